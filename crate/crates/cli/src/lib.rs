//! Command-line front end. `run_cli` parses arguments, dispatches, writes
//! to the given streams and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, positive answer |
//! | 1 | negative answer (ASAP fails, SP fails, minor absent, ...) |
//! | 2 | usage or input error |
//! | 3 | capacity limit exceeded |
//! | 4 | internal consistency check failed |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nullity_core::bipartite::{from_bipartite, to_bipartite, BipartiteMultigraph};
use nullity_core::classify::{classify_with, Certificate, ClassifyOptions};
use nullity_core::kelly::{greedy_width, kelly_width_exact, KellyDecomposition, RootCheck};
use nullity_core::matrix::{
    asap_check, check_matrix, nu_lower_bound_search, reduce_contract, reduce_delete, reduce_semicontract, sp_check,
    MatrixVerdict, RationalMatrix, SpVerdict,
};
use nullity_core::minors::{forbidden_scan_with, has_directed_minor_with, MinorSearch, Pattern, SearchRegime};
use nullity_core::survey::{survey, SurveyOptions};
use nullity_core::{Digraph, Error};

#[derive(Parser, Debug)]
#[command(name = "nullity", version, about = "Classify digraphs by stable maximum nullity")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide nu = 0, nu = 1 or nu >= 2 with certificates.
    Classify(ClassifyArgs),
    /// Exact Kelly-width, or validation of a Kelly-decomposition.
    KellyWidth(KellyArgs),
    /// Search for a directed minor, or scan for all forbidden ones.
    Minor(MinorArgs),
    /// Matrix properties.
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
    },
    /// Run the reduction engine, or a single reduction with --kind.
    Reduce(ReduceArgs),
    /// Randomized search for an ASAP matrix of large nullity.
    SearchNu(SearchNuArgs),
    /// Translate between digraphs and bipartite graphs with a perfect matching.
    Bipartite {
        #[command(subcommand)]
        op: BipartiteOp,
    },
    /// Check the classification equivalences over all digraphs of one order.
    Survey(SurveyArgs),
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Also search for an ASAP matrix certificate.
    #[arg(long)]
    with_matrix: bool,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings (makes the report nondeterministic).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    minor_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RootCheckArg {
    GuardSets,
    Literal,
    Skip,
}

#[derive(Args, Debug)]
struct KellyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Kelly-decomposition JSON to validate instead of computing the width.
    #[arg(long)]
    validate: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RootCheckArg::GuardSets)]
    root_check: RootCheckArg,
    /// Exact subset dynamic program (the default).
    #[arg(long, conflicts_with = "greedy")]
    exact: bool,
    /// Greedy least-outdegree elimination; an upper bound only.
    #[arg(long, conflicts_with = "validate")]
    greedy: bool,
    /// Refuse digraphs with more than this many vertices.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Guided,
    Interleaved,
    SubdigraphFirst,
}

#[derive(Args, Debug)]
struct MinorArgs {
    #[arg(long)]
    input: PathBuf,
    /// Built-in pattern name (k2, k3, n4, m5, n4r, m5r).
    #[arg(long, conflicts_with_all = ["pattern_file", "scan"])]
    pattern: Option<String>,
    /// Pattern digraph file.
    #[arg(long, conflicts_with = "scan")]
    pattern_file: Option<PathBuf>,
    /// Scan for all five forbidden patterns.
    #[arg(long)]
    scan: bool,
    #[arg(long, value_enum, default_value_t = RegimeArg::Guided)]
    regime: RegimeArg,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum MatrixOp {
    Asap(MatrixArgs),
    Sp(MatrixArgs),
    Nullity(MatrixArgs),
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    digraph: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Contract,
    Delete,
    Semicontract,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long)]
    digraph: PathBuf,
    #[arg(long)]
    matrix: PathBuf,
    /// Apply one reduction instead of running the engine.
    #[arg(long, value_enum, requires = "vertex")]
    kind: Option<KindArg>,
    /// 1-based vertex for --kind.
    #[arg(long, requires = "kind")]
    vertex: Option<usize>,
}

#[derive(Args, Debug)]
struct SearchNuArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum BipartiteOp {
    /// Digraph to bipartite graph with its diagonal matching.
    To {
        #[arg(long)]
        input: PathBuf,
    },
    /// Bipartite graph with a matching section to digraph.
    From {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SurveyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2000)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    nu_trials: u64,
    #[arg(long, default_value_t = 2)]
    matrix_samples: usize,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// What a command produced: a JSON value, its text rendering, and whether
/// the answer was positive.
struct Output {
    json: Value,
    text: String,
    positive: bool,
}

impl Output {
    fn new(json: Value, text: impl Into<String>, positive: bool) -> Self {
        Output {
            json,
            text: text.into(),
            positive,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_digraph(path: &Path) -> Result<Digraph, Error> {
    Digraph::parse_any(&read(path)?)
}

fn read_matrix(path: &Path) -> Result<RationalMatrix, Error> {
    RationalMatrix::parse_any(&read(path)?)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => 3,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
                Format::Text => write!(out, "{}", o.text),
            };
            if o.positive {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "nullity: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Classify(a) => cmd_classify(a),
        Command::KellyWidth(a) => cmd_kelly(a),
        Command::Minor(a) => cmd_minor(a),
        Command::Matrix { op } => cmd_matrix(op),
        Command::Reduce(a) => cmd_reduce(a),
        Command::SearchNu(a) => cmd_search_nu(a),
        Command::Bipartite { op } => cmd_bipartite(op),
        Command::Survey(a) => cmd_survey(a),
    }
}

fn minor_search(cap: Option<usize>, regime: SearchRegime) -> MinorSearch {
    let mut m = MinorSearch {
        regime,
        ..MinorSearch::default()
    };
    if let Some(c) = cap {
        m.cap = c;
    }
    m
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Output, Error> {
    let d = read_digraph(&a.input)?;
    let opts = ClassifyOptions {
        minor: minor_search(a.minor_cap, SearchRegime::Guided),
        with_matrix: a.with_matrix,
        matrix_trials: a.trials,
        seed: a.seed,
        timings: a.timings,
    };
    let r = classify_with(&d, &opts)?;
    let mut text = format!("verdict: {:?}\n", r.verdict);
    match &r.certificate {
        Certificate::TopologicalOrder(order) => {
            let order: Vec<String> = order.iter().map(|v| (v + 1).to_string()).collect();
            text += &format!("topological order: {}\n", order.join(" "));
        }
        Certificate::WidthOne { forward, reverse, matrix } => {
            text += &format!(
                "Kelly-width: {} (reverse {})\n",
                forward.kelly_width, reverse.kelly_width
            );
            if let Some(m) = matrix {
                text += &format!("ASAP matrix of nullity {}:\n{}", m.nullity, m.matrix.to_text());
            }
        }
        Certificate::ForbiddenMinor {
            forward,
            reverse,
            minor,
            matrix,
        } => {
            text += &format!(
                "Kelly-width: {} (reverse {})\n",
                forward.kelly_width, reverse.kelly_width
            );
            if let Some((p, w)) = minor {
                text += &format!("forbidden minor: {p} ({} steps)\n", w.steps.len());
            }
            if let Some(m) = matrix {
                text += &format!("ASAP matrix of nullity {}:\n{}", m.nullity, m.matrix.to_text());
            }
        }
    }
    Ok(Output::new(r.to_json(), text, true))
}

fn cmd_kelly(a: &KellyArgs) -> Result<Output, Error> {
    let d = read_digraph(&a.input)?;
    if let Some(path) = &a.validate {
        let dec = KellyDecomposition::parse_json(&read(path)?)?;
        let root_check = match a.root_check {
            RootCheckArg::GuardSets => RootCheck::GuardSets,
            RootCheckArg::Literal => RootCheck::Literal,
            RootCheckArg::Skip => RootCheck::Skip,
        };
        let check = dec.validate(&d, root_check)?;
        let mut text = format!("valid: {}\nwidth: {}\n", check.valid, check.width);
        for v in &check.violations {
            text += &format!("violation: {v}\n");
        }
        let json = serde_json::to_value(&check).expect("check serializes");
        return Ok(Output::new(json, text, check.valid));
    }
    if let Some(cap) = a.cap.filter(|&c| d.n() > c) {
        return Err(Error::Capacity {
            what: "kelly-width input",
            size: d.n(),
            limit: cap,
        });
    }
    let r = if a.greedy { greedy_width(&d) } else { kelly_width_exact(&d)? };
    r.revalidate(&d)?;
    let order: Vec<String> = r.ordering.one_based().iter().map(ToString::to_string).collect();
    let text = format!("Kelly-width: {}\nordering: {}\n", r.kelly_width, order.join(" "));
    let json = json!({
        "kelly_width": r.kelly_width,
        "ordering": r.ordering.one_based(),
        "method": r.method,
    });
    Ok(Output::new(json, text, true))
}

fn cmd_minor(a: &MinorArgs) -> Result<Output, Error> {
    let d = read_digraph(&a.input)?;
    let regime = match a.regime {
        RegimeArg::Guided => SearchRegime::Guided,
        RegimeArg::Interleaved => SearchRegime::Interleaved,
        RegimeArg::SubdigraphFirst => SearchRegime::SubdigraphFirst,
    };
    let opts = minor_search(a.cap, regime);
    if a.scan {
        let report = forbidden_scan_with(&d, &opts)?;
        let mut text = String::new();
        let mut found = serde_json::Map::new();
        for (p, w) in &report.entries {
            text += &format!("{p}: {}\n", if w.is_some() { "present" } else { "absent" });
            found.insert(p.name().into(), w.as_ref().map_or(Value::Null, |w| w.to_json_value()));
        }
        let json = json!({ "clean": report.is_clean(), "minors": found });
        return Ok(Output::new(json, text, report.is_clean()));
    }
    let pattern = match (&a.pattern, &a.pattern_file) {
        (Some(name), None) => name.parse::<Pattern>()?.digraph(),
        (None, Some(path)) => read_digraph(path)?,
        _ => return Err(Error::Input("give one of --pattern, --pattern-file or --scan".into())),
    };
    let witness = has_directed_minor_with(&d, &pattern, &opts)?;
    let text = match &witness {
        Some(w) => format!("minor: present\nsteps: {}\n", w.steps.len()),
        None => "minor: absent\n".to_string(),
    };
    let json = json!({
        "present": witness.is_some(),
        "witness": witness.as_ref().map(|w| w.to_json_value()),
    });
    Ok(Output::new(json, text, witness.is_some()))
}

fn cmd_matrix(op: &MatrixOp) -> Result<Output, Error> {
    match op {
        MatrixOp::Asap(a) => {
            let b = read_matrix(&a.matrix)?;
            let r = asap_check(&b);
            let json = json!({
                "asap": r.holds,
                "violation_dimension": r.dimension,
                "violation_basis": r.basis.iter().map(RationalMatrix::to_json).collect::<Vec<_>>(),
            });
            let mut text = format!("asap: {}\n", r.holds);
            if !r.holds {
                text += &format!("violation space dimension: {}\n", r.dimension);
            }
            Ok(Output::new(json, text, r.holds))
        }
        MatrixOp::Sp(a) => {
            let b = read_matrix(&a.matrix)?;
            let path = a
                .digraph
                .as_ref()
                .ok_or_else(|| Error::Input("matrix sp needs --digraph".into()))?;
            let d = read_digraph(path)?;
            match sp_check(&b, &d)? {
                SpVerdict::Holds => Ok(Output::new(json!({ "sp": true }), "sp: true\n", true)),
                SpVerdict::Violated(w) => {
                    let text = format!("sp: false\nx: {}\ny: {}\n", join(&w.x), join(&w.y));
                    Ok(Output::new(json!({ "sp": false, "witness": w.to_json() }), text, false))
                }
            }
        }
        MatrixOp::Nullity(a) => {
            let b = read_matrix(&a.matrix)?;
            if let Some(path) = &a.digraph {
                let d = read_digraph(path)?;
                if d.n() != b.n() {
                    return Err(Error::Input("matrix and digraph orders differ".into()));
                }
            }
            let k = b.nullity();
            Ok(Output::new(json!({ "nullity": k }), format!("nullity: {k}\n"), true))
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_reduce(a: &ReduceArgs) -> Result<Output, Error> {
    let d = read_digraph(&a.digraph)?;
    let b = read_matrix(&a.matrix)?;
    if let (Some(kind), Some(vertex)) = (a.kind, a.vertex) {
        let u = vertex
            .checked_sub(1)
            .ok_or_else(|| Error::Input("vertices are 1-based".into()))?;
        let r = match kind {
            KindArg::Contract => reduce_contract(&d, &b, u)?,
            KindArg::Delete => reduce_delete(&d, &b, u)?,
            KindArg::Semicontract => reduce_semicontract(&d, &b, u)?,
        };
        let text = format!("{}{}", r.digraph.to_text(), r.matrix.to_text());
        let json = json!({
            "digraph": serde_json::from_str::<Value>(&r.digraph.to_json()).expect("digraph json"),
            "matrix": r.matrix.to_json(),
            "nullity": r.matrix.nullity(),
        });
        return Ok(Output::new(json, text, true));
    }
    let report = check_matrix(&d, &b)?;
    let trace = serde_json::to_value(&report.trace).expect("trace serializes");
    let (verdict, witness, text) = match &report.verdict {
        MatrixVerdict::NullityAtMostOne => ("nullity_at_most_one", Value::Null, "verdict: nullity at most one\n".to_string()),
        MatrixVerdict::SpViolation(w) => (
            "sp_violation",
            w.to_json(),
            format!("verdict: SP violation\nx: {}\ny: {}\n", join(&w.x), join(&w.y)),
        ),
    };
    let json = json!({ "verdict": verdict, "witness": witness, "trace": trace });
    Ok(Output::new(json, text, true))
}

fn cmd_search_nu(a: &SearchNuArgs) -> Result<Output, Error> {
    let d = read_digraph(&a.input)?;
    match nu_lower_bound_search(&d, a.target, a.trials, a.seed) {
        Some(c) => {
            let json = json!({
                "found": true,
                "nullity": c.nullity,
                "trial": c.trial,
                "matrix": c.matrix.to_json(),
            });
            let text = format!("found: nullity {} at trial {}\n{}", c.nullity, c.trial, c.matrix.to_text());
            Ok(Output::new(json, text, true))
        }
        None => Ok(Output::new(json!({ "found": false }), "found: none\n", false)),
    }
}

fn cmd_bipartite(op: &BipartiteOp) -> Result<Output, Error> {
    match op {
        BipartiteOp::To { input } => {
            let d = read_digraph(input)?;
            let (g, m) = to_bipartite(&d);
            let text = g.to_text(Some(&m));
            let json = json!({
                "n_left": g.n_left(),
                "n_right": g.n_right(),
                "edges": g.edges().map(|(l, r, k)| [l + 1, r + 1, k as usize]).collect::<Vec<_>>(),
                "matching": m.pairs().iter().map(|&(l, r)| [l + 1, r + 1]).collect::<Vec<_>>(),
            });
            Ok(Output::new(json, text, true))
        }
        BipartiteOp::From { input } => {
            let (g, m) = BipartiteMultigraph::parse_text(&read(input)?)?;
            let m = m.ok_or_else(|| Error::Input("bigraph file has no matching section".into()))?;
            let d = from_bipartite(&g, &m)?;
            let json = serde_json::from_str::<Value>(&d.to_json()).expect("digraph json");
            Ok(Output::new(json, d.to_text(), true))
        }
    }
}

fn cmd_survey(a: &SurveyArgs) -> Result<Output, Error> {
    let opts = SurveyOptions {
        sample: a.sample,
        seed: a.seed,
        nu_trials: a.nu_trials,
        matrix_samples: a.matrix_samples,
        ..SurveyOptions::default()
    };
    let s = survey(a.n, &opts)?;
    let json = s.to_json();
    if let Some(path) = &a.output {
        let body = serde_json::to_string_pretty(&json).expect("json");
        std::fs::write(path, body + "\n").map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    }
    let text = format!(
        "n = {} ({}), {} instances\nnu = 0: {}\nnu = 1: {}\nnu >= 2: {}\nequivalences hold: {}\ndichotomy: {} checked, {} counterexamples\n",
        s.n,
        s.mode,
        s.instances,
        s.nu_zero,
        s.nu_one,
        s.nu_at_least_two,
        s.equivalences_hold(),
        s.dichotomy.checked,
        s.dichotomy.counterexamples
    );
    Ok(Output::new(json, text, s.equivalences_hold()))
}
