use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsr_core::engine::{upper_bound, BoundOptions, NamedGraph};
use jsr_core::families::FamilySpec;
use jsr_core::fixtures;
use jsr_core::io::MatrixSetFile;
use jsr_core::lmi::LyapunovTemplate;
use serde_json::Value;
use tempfile::TempDir;

fn jsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jsr"))
        .args(args)
        .env_remove("JSR_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixture_file(dir: &Path, name: &str) -> String {
    let f = MatrixSetFile::from_alphabet(&fixtures::by_name(name).unwrap());
    write(dir, &format!("{name}.json"), &f.to_json())
        .to_string_lossy()
        .into_owned()
}

fn rho_hat(o: &Output) -> f64 {
    json_out(o)["rho_hat"].as_f64().unwrap()
}

#[test]
fn fixture_files_round_trip() {
    for name in ["ex4.1", "ex5.2", "ex5.3"] {
        let text = MatrixSetFile::from_alphabet(&fixtures::by_name(name).unwrap()).to_json();
        let again = MatrixSetFile::parse(&text).unwrap().to_json();
        assert_eq!(text, again, "{name}");
    }
}

#[test]
fn bound_on_ex52() {
    let dir = TempDir::new().unwrap();
    let m = fixture_file(dir.path(), "ex5.2");
    let o = jsr(&["bound", "--matrices", &m, "--graph", "g1", "--template", "quadratic", "--json"]);
    assert_eq!(code(&o), 0);
    assert!((rho_hat(&o) - 1.0).abs() < 1e-3);
    let doc = json_out(&o);
    assert!(doc["certificate"]["nodes"].as_array().unwrap().len() == 2);
    assert!(!doc["bisection_trace"].as_array().unwrap().is_empty());

    let text = jsr(&["bound", "--matrices", &m, "--graph", "h1"]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).contains("rho_hat:      1.414"));
}

#[test]
fn bound_on_ex53() {
    let dir = TempDir::new().unwrap();
    let m = fixture_file(dir.path(), "ex5.3");
    for (graph, want) in [("h1", 12.5683), ("g1", 11.8097)] {
        let o = jsr(&["bound", "--matrices", &m, "--graph", graph, "--template", "quadratic", "--json"]);
        assert_eq!(code(&o), 0);
        let r = rho_hat(&o);
        assert!((r - want).abs() <= 5e-3 * want, "{graph}: {r}");
    }
}

#[test]
fn perturbation_is_applied() {
    let dir = TempDir::new().unwrap();
    let m = fixture_file(dir.path(), "ex5.2");
    let o = jsr(&["bound", "--matrices", &m, "--graph", "g1", "--perturb", "0.1", "--json"]);
    assert_eq!(code(&o), 0);
    let a = fixtures::ex52().perturbed(0.1).unwrap();
    let g = NamedGraph::family(FamilySpec::G1, 2).unwrap();
    let want = upper_bound(&g, &a, LyapunovTemplate::quadratic(), &BoundOptions::default())
        .unwrap()
        .rho_hat;
    assert_eq!(rho_hat(&o), want);
}

#[test]
fn check_verdicts() {
    let dir = TempDir::new().unwrap();
    let o = jsr(&["check", "--graph", "h3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("path-complete"));

    let g = write(
        dir.path(),
        "only_a1.json",
        r#"{"m":2,"nodes":["a"],"edges":[{"from":"a","to":"a","label":[1]}]}"#,
    );
    let arg = format!("file:{}", g.display());
    let o = jsr(&["check", "--graph", &arg, "--json"]);
    assert_eq!(code(&o), 4);
    let doc = json_out(&o);
    assert_eq!(doc["verdict"], "not path-complete");
    assert_eq!(doc["witness"], serde_json::json!([2]));

    assert_eq!(code(&jsr(&["check", "--graph", "debruijn:k=2"])), 0);
    assert_eq!(code(&jsr(&["check", "--graph", "nonsense"])), 1);
}

#[test]
fn budget_exhaustion() {
    let o = Command::new(env!("CARGO_BIN_EXE_jsr"))
        .args(["check", "--graph", "debruijn:k=3"])
        .env("JSR_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 5);

    let dir = TempDir::new().unwrap();
    let m = fixture_file(dir.path(), "ex5.2");
    let o = Command::new(env!("CARGO_BIN_EXE_jsr"))
        .args(["bound", "--matrices", &m, "--graph", "h1"])
        .env("JSR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn malformed_inputs() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n":2,"matrices":[[[1,0],[1]]]}"#);
    let o = jsr(&["bound", "--matrices", bad.to_str().unwrap(), "--graph", "h1"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("matrices[0][1]"));

    let m = fixture_file(dir.path(), "ex5.2");
    let o = jsr(&["bound", "--matrices", &m, "--graph", "h1", "--template", "sos:3"]);
    assert_ne!(code(&o), 0);

    let g = write(
        dir.path(),
        "incomplete.json",
        r#"{"m":2,"nodes":["a"],"edges":[{"from":"a","to":"a","label":[1]}]}"#,
    );
    let arg = format!("file:{}", g.display());
    assert_eq!(code(&jsr(&["bound", "--matrices", &m, "--graph", &arg])), 4);
}

#[test]
fn compare_reports_relations() {
    let dir = TempDir::new().unwrap();
    let m = fixture_file(dir.path(), "ex5.2");
    let o = jsr(&["compare", "--matrices", &m, "--graphs", "g1,g2,g3,h1,h3", "--json"]);
    assert_eq!(code(&o), 0);
    let doc = json_out(&o);
    assert_eq!(doc["violations"], 0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    let pairs = doc["pairs"].as_array().unwrap();
    assert!(pairs
        .iter()
        .any(|p| p["first"] == "g2" && p["second"] == "h3" && p["relation"] == "Equal"));

    let text = jsr(&["compare", "--matrices", &m, "--graphs", "g3,h1"]);
    let out = String::from_utf8_lossy(&text.stdout);
    assert!(out.contains("g3 = h1  ok"), "{out}");
}

#[test]
fn reproduce_ex52() {
    let o = jsr(&["reproduce", "ex5.2", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["passed"], true);
    assert_eq!(code(&jsr(&["reproduce", "ex9.9"])), 1);
}
