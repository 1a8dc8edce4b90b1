use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semisym"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn analyze(path: &Path, expect: bool) -> (Value, i32) {
    let mut args = vec!["analyze", path.to_str().unwrap(), "--no-generators"];
    if expect {
        args.extend_from_slice(&["--expect", "recorded"]);
    }
    let o = run(&args);
    (json(&o), o.status.code().unwrap())
}

fn compare(a: &Path, b: &Path) -> Value {
    let o = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(o.status.success());
    json(&o)
}

#[test]
fn construct_writes_graph6_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "g.g6", &["--family", "nrc", "--n", "2", "--q", "5"]);
    let text = std::fs::read_to_string(&p).unwrap();
    let g = semisym::graph6::decode(&text).unwrap();
    assert_eq!(g.n(), 250);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(p.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["part_sizes"], serde_json::json!([125, 125]));
    assert_eq!(meta["family"], "nrc_minus_point");

    let c = construct(dir.path(), "cone.g6", &["--family", "cone", "--n", "3", "--q0", "2", "--h", "3"]);
    let g = semisym::graph6::decode(&std::fs::read_to_string(c).unwrap()).unwrap();
    assert_eq!(g.n(), 8192);
}

#[test]
fn inadmissible_parameters_fail_with_a_reason() {
    let o = run(&["construct", "--family", "basis", "--n", "2", "--q", "4", "--out", "/nonexistent/x.g6"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("q = 3"), "{err}");
    let o = run(&["construct", "--family", "cone", "--n", "3", "--q0", "2", "--out", "x.g6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--h"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn analyze_nrc_2_5() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "g.g6", &["--family", "nrc", "--n", "2", "--q", "5"]);
    let (r, code) = analyze(&p, true);
    assert_eq!(code, 0);
    assert_eq!(r["graph"]["girth"]["value"], 8);
    assert_eq!(r["graph"]["girth"]["source"], "engine");
    assert_eq!(r["verdict"]["semisymmetric"], true);
    assert_eq!(r["automorphisms"]["group_order"], "10000");
    assert_eq!(r["geometric"]["formula"]["value"], 10000);
    assert!(r["expectations"].as_array().unwrap().iter().all(|e| e["pass"] == true));
}

#[test]
fn analyze_basis_index() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "b.g6", &["--family", "basis", "--n", "3", "--q", "4"]);
    let (r, code) = analyze(&p, true);
    assert_eq!(code, 0);
    assert_eq!(r["index_over_geometric"]["value"], "8");
    let idx = r["expectations"].as_array().unwrap().iter().find(|e| e["check"] == "[Aut : geometric] for the basis").unwrap();
    assert_eq!(idx["pass"], true);
}

#[test]
fn analyze_disconnected() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "d.g6", &["--family", "custom", "--n", "2", "--q", "4", "--points", "1,0,0;0,1,0;1,1,0;1,2,0"]);
    let (r, code) = analyze(&p, false);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["semisymmetric"], false);
    assert_eq!(r["graph"]["components"]["value"], 4);
    let reasons = r["verdict"]["reasons"].as_array().unwrap();
    assert!(reasons.iter().any(|s| s.as_str().unwrap().starts_with("not connected")));
}

#[test]
fn failed_expectation_exits_2() {
    // Five arc directions in PG(3,7) close an affine pentagon.
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "n37.g6", &["--family", "nrc", "--n", "3", "--q", "7"]);
    let (r, code) = analyze(&p, true);
    assert_eq!(code, 2);
    let c10 = r["expectations"].as_array().unwrap().iter().find(|e| e["check"] == "C10 present iff n = 2").unwrap();
    assert_eq!(c10["pass"], false);
    assert_eq!(r["verdict"]["semisymmetric"], true);
}

#[test]
fn malformed_input_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.g6");
    std::fs::write(&p, "D Qc\n").unwrap();
    let o = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 1"));
    let q = construct(dir.path(), "g.g6", &["--family", "nrc", "--n", "2", "--q", "3"]);
    std::fs::write(q.with_extension("json"), "{\n  \"schema\": 1,\n  oops\n}").unwrap();
    let o = run(&["analyze", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let lambda = construct(d, "l.g6", &["--family", "lambda", "--n", "2", "--q", "5"]);
    let gamma = construct(d, "g.g6", &["--family", "nrc", "--n", "2", "--q", "5"]);
    let r = compare(&lambda, &gamma);
    assert_eq!(r["isomorphic"], true);
    assert_eq!(r["witness"].as_array().unwrap().len(), 250);

    // σ = 4 inverts σ = 2 in Aut(GF(8)), and C(σ^-1) is projectively
    // equivalent to C(σ).
    let s2 = construct(d, "s2.g6", &["--family", "casse_glynn", "--q", "8", "--sigma-exp", "1"]);
    let s4 = construct(d, "s4.g6", &["--family", "casse_glynn", "--q", "8", "--sigma-exp", "2"]);
    assert_eq!(compare(&s2, &s4)["isomorphic"], true);

    let other = construct(d, "c.g6", &["--family", "custom", "--n", "2", "--q", "5", "--points", "1,0,0;0,1,0;1,1,0;1,2,0;0,0,1"]);
    assert_eq!(compare(&gamma, &other)["isomorphic"], false);
    let o = run(&["compare", gamma.to_str().unwrap(), other.to_str().unwrap(), "--expect", "isomorphic"]);
    assert_eq!(o.status.code(), Some(2));

    // relabeled copy without a sidecar
    let g = semisym::graph6::decode(&std::fs::read_to_string(&gamma).unwrap()).unwrap();
    let mut perm: Vec<u32> = (0..g.n() as u32).collect();
    perm.reverse();
    perm.swap(3, 200);
    let bare = d.join("bare.g6");
    std::fs::write(&bare, semisym::graph6::encode(&g.relabel(&perm))).unwrap();
    assert_eq!(compare(&gamma, &bare)["isomorphic"], true);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(dir.path(), "g.g6", &["--family", "frame", "--n", "3", "--q", "5"]);
    let a = run(&["analyze", p.to_str().unwrap(), "--expect", "recorded"]);
    let b = run(&["analyze", p.to_str().unwrap(), "--expect", "recorded"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn catalog_and_stabilizer() {
    let o = run(&["catalog"]);
    assert!(o.status.success());
    let c = json(&o);
    let glynn = c.as_array().unwrap().iter().find(|e| e["family"] == "glynn").unwrap();
    assert_eq!(glynn["constructible"], false);

    let o = run(&["stabilizer", "--family", "casse_glynn", "--q", "8", "--sigma-exp", "2"]);
    assert!(o.status.success());
    let s = json(&o);
    assert_eq!(s["stabilizer"]["order"], 168);
    assert_eq!(s["geometric_order"], "4816896");
    let o = run(&["stabilizer", "--family", "nrc", "--n", "2", "--q", "5", "--no-frobenius"]);
    assert_eq!(json(&o)["stabilizer"]["order"], 20);
}
