fn main() {
    std::process::exit(nullity_cli::run_cli(std::env::args_os()));
}
