use std::io::Write as _;
use std::path::Path;

use serde_json::Value;
use tempfile::{NamedTempFile, TempDir};

use nullity_cli::run_cli_with;

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("bad JSON ({e}):\n{}", self.out))
    }
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nullity").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn file(body: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const K2: &str = "digraph 2\n1 2\n2 1\n";
const K3: &str = "digraph 3\n1 2\n1 3\n2 1\n2 3\n3 1\n3 2\n";
const PATH3: &str = "digraph 3\n1 2\n2 3\n";

#[test]
fn classify_verdicts() {
    let cases = [(PATH3, "NuZero", "topological_order"), (K2, "NuOne", "width_one_orderings"), (K3, "NuAtLeastTwo", "forbidden_minor")];
    for (src, verdict, kind) in cases {
        let f = file(src);
        let r = run(&["classify", "--input", path(&f)]);
        assert_eq!(r.code, 0, "{}", r.err);
        let v = r.json();
        assert_eq!(v["verdict"], verdict);
        assert_eq!(v["certificate"]["kind"], kind);
        assert_eq!(v["schema"], 1);
        assert!(v.get("timings_ms").is_none());
    }
}

#[test]
fn classify_is_deterministic_and_accepts_json_input() {
    let f = file(r#"{"n": 3, "arcs": [[1, 2], [2, 3], [3, 1]]}"#);
    let a = run(&["classify", "--input", path(&f), "--with-matrix", "--seed", "4"]);
    let b = run(&["classify", "--input", path(&f), "--with-matrix", "--seed", "4"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    let v = a.json();
    assert_eq!(v["verdict"], "NuOne");
    assert_eq!(v["certificate"]["matrix"]["nullity"], 1);
}

#[test]
fn classify_timings_are_opt_in() {
    let f = file(K3);
    let r = run(&["classify", "--input", path(&f), "--timings"]);
    assert_eq!(r.code, 0);
    assert!(r.json()["timings_ms"].is_object());
}

#[test]
fn text_format() {
    let f = file(K2);
    let r = run(&["--format", "text", "classify", "--input", path(&f)]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("verdict: NuOne"), "{}", r.out);
}

#[test]
fn malformed_input_exits_2() {
    let f = file("digraph 2\n1 1\n");
    let r = run(&["classify", "--input", path(&f)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("self-arc"), "{}", r.err);
    let r = run(&["classify", "--input", "/nonexistent/digraph.txt"]);
    assert_eq!(r.code, 2);
    let r = run(&["classify"]);
    assert_eq!(r.code, 2);
    let r = run(&["no-such-command"]);
    assert_eq!(r.code, 2);
}

#[test]
fn help_exits_0() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("classify"));
}

#[test]
fn kelly_width_of_cycle() {
    let f = file("digraph 3\n1 2\n2 3\n3 1\n");
    let r = run(&["kelly-width", "--input", path(&f)]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["kelly_width"], 2);
    assert_eq!(v["method"], "exact");
    assert_eq!(v["ordering"].as_array().unwrap().len(), 3);

    let r = run(&["kelly-width", "--input", path(&f), "--greedy"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["method"], "greedy");
    assert!(r.json()["kelly_width"].as_u64().unwrap() >= 2);

    let r = run(&["kelly-width", "--input", path(&f), "--cap", "2"]);
    assert_eq!(r.code, 3);
}

#[test]
fn minor_queries() {
    let host = file(K3);
    let r = run(&["minor", "--input", path(&host), "--pattern", "k2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["present"], true);

    let acyclic = file(PATH3);
    let r = run(&["minor", "--input", path(&acyclic), "--pattern", "k2"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["present"], false);

    let r = run(&["minor", "--input", path(&host), "--scan"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["clean"], false);

    let r = run(&["minor", "--input", path(&host), "--pattern", "nonsense"]);
    assert_eq!(r.code, 2);
}

#[test]
fn minor_scan_over_cap_exits_3() {
    let big = file(&format!("digraph 9\n{}", (1..9).map(|i| format!("{i} {}\n", i + 1)).collect::<String>()));
    let r = run(&["minor", "--input", path(&big), "--scan", "--cap", "8"]);
    assert_eq!(r.code, 3, "{}", r.err);
}

#[test]
fn matrix_commands() {
    let ones3 = file("matrix 3\n1 1 1\n1 1 1\n1 1 1\n");
    let r = run(&["matrix", "asap", "--matrix", path(&ones3)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["asap"], true);

    let r = run(&["matrix", "nullity", "--matrix", path(&ones3)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["nullity"], 2);

    let zero = file("matrix 2\n0 0\n0 0\n");
    let r = run(&["matrix", "asap", "--matrix", path(&zero)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["violation_dimension"], 4);

    let empty = file("digraph 2\n");
    let r = run(&["matrix", "sp", "--matrix", path(&zero), "--digraph", path(&empty)]);
    assert_eq!(r.code, 1);
    let w = &r.json()["witness"];
    assert!(!w["supp_x"].as_array().unwrap().is_empty());

    let fractions = file(r#"{"n": 2, "entries": [["1/2", "1"], ["1", "2"]]}"#);
    let r = run(&["matrix", "nullity", "--matrix", path(&fractions)]);
    assert_eq!(r.json()["nullity"], 1);
}

#[test]
fn reduce_single_step_and_engine() {
    // 1 -> 2 only; a_11 and a_12 nonzero, so contraction applies at vertex 1
    let d = file("digraph 2\n1 2\n");
    let a = file("matrix 2\n1 2\n0 3\n");
    let r = run(&["reduce", "--digraph", path(&d), "--matrix", path(&a), "--kind", "contract", "--vertex", "1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = r.json();
    assert_eq!(v["nullity"], 0);
    assert_eq!(v["matrix"]["n"], 1);

    let r = run(&["reduce", "--digraph", path(&d), "--matrix", path(&a), "--kind", "semicontract", "--vertex", "1"]);
    assert_eq!(r.code, 2);

    let r = run(&["reduce", "--digraph", path(&d), "--matrix", path(&a), "--kind", "contract", "--vertex", "0"]);
    assert_eq!(r.code, 2);

    let zero = file("matrix 2\n0 0\n0 0\n");
    let r = run(&["reduce", "--digraph", path(&d), "--matrix", path(&zero)]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["verdict"], "sp_violation");
    assert!(!v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn reduce_reports_the_two_cycle_counterexample() {
    let k2 = file(K2);
    let zero = file("matrix 2\n0 0\n0 0\n");
    let r = run(&["reduce", "--digraph", path(&k2), "--matrix", path(&zero)]);
    assert_eq!(r.code, 4, "{}", r.err);
}

#[test]
fn search_nu() {
    let k3 = file(K3);
    let r = run(&["search-nu", "--input", path(&k3), "--target", "2", "--trials", "500", "--seed", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["nullity"], 2);

    let p = file(PATH3);
    let r = run(&["search-nu", "--input", path(&p), "--target", "1", "--trials", "200"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["found"], false);
}

#[test]
fn bipartite_round_trip() {
    let src = file("digraph 3\n1 2\n2 3\n3 1\n2 1\n");
    let to = run(&["--format", "text", "bipartite", "to", "--input", path(&src)]);
    assert_eq!(to.code, 0);
    assert!(to.out.starts_with("bigraph 3 3"), "{}", to.out);
    let g = file(&to.out);
    let back = run(&["--format", "text", "bipartite", "from", "--input", path(&g)]);
    assert_eq!(back.code, 0, "{}", back.err);
    assert_eq!(back.out, "digraph 3\n1 2\n2 1\n2 3\n3 1\n");
}

#[test]
fn survey_writes_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("survey.json");
    let r = run(&["survey", "--n", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&out)).unwrap()).unwrap();
    assert_eq!(saved, r.json());
    assert_eq!(saved["instances"], 64);
    assert_eq!(saved["equivalences_hold"], true);
}
