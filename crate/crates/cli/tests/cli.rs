use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauduchon")).args(args).output().expect("binary runs")
}

fn run_report(args: &[&str], path: &Path) -> Value {
    let mut full = args.to_vec();
    full.extend(["--report", path.to_str().unwrap()]);
    let out = run(&full);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn nil4_check_report() {
    let dir = tempfile::tempdir().unwrap();
    let doc = run_report(&["check", "--manifold", "builtin:nil4", "--metric", "diag:1,1"], &dir.path().join("r.json"));
    assert_eq!(doc["del_omega"], "-1/2 phi1^phi2^~phi1");
    assert_eq!(doc["strongly_gauduchon_witness"], "-1i phi1^phi2");
    assert_eq!(doc["flags"]["almost_kahler"], "fails");
    assert_eq!(doc["flags"]["integral_condition"], "holds");
    assert_eq!(doc["flags"]["orthogonality"], "holds");
    assert_eq!(doc["harmonic_01"], serde_json::json!(["~phi1"]));
    assert_eq!(doc["integrable"], false);
    assert_eq!(doc["invariant_violations"], serde_json::json!([]));
}

#[test]
fn iwasawa_conformal_check_report() {
    let dir = tempfile::tempdir().unwrap();
    let doc = run_report(
        &["check", "--manifold", "builtin:iwasawa", "--metric", "cdiag:1*exp(-2),1*exp(-2),1*exp(2)"],
        &dir.path().join("r.json"),
    );
    assert_eq!(doc["flags"]["gauduchon"], "fails");
    assert_eq!(doc["gauduchon_formal"], true);
    assert_eq!(doc["flags"]["integral_condition"], "holds");
    assert_eq!(doc["harmonic_01"], serde_json::json!(["~phi1", "~phi2"]));
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("formal")));
}

#[test]
fn human_readable_output() {
    let out = run(&["check", "--manifold", "builtin:nil4", "--metric", "diag:1,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nil4"));
    assert!(text.contains("non-integrable"));
}

#[test]
fn relations_and_harmonic() {
    let dir = tempfile::tempdir().unwrap();
    let rel = run_report(&["relations", "--manifold", "builtin:nil4"], &dir.path().join("rel.json"));
    assert_eq!(rel["identities"].as_array().unwrap().len(), 7);
    let h = run_report(&["harmonic", "--manifold", "builtin:torus3", "--metric", "diag:1,1,1", "--p", "0", "--q", "1"], &dir.path().join("h.json"));
    assert_eq!(h["dimension"], 3);
    assert_eq!(h["dolbeault_dimension"], 3);
    let h = run_report(&["harmonic", "--manifold", "builtin:iwasawa", "--metric", "diag:1,1,1", "--p", "0", "--q", "1"], &dir.path().join("h2.json"));
    assert_eq!(h["dimension"], 2);
}

#[test]
fn obstruction_reports() {
    let dir = tempfile::tempdir().unwrap();
    let nil4 = run_report(&["obstruction", "--manifold", "builtin:nil4"], &dir.path().join("o.json"));
    assert_eq!(nil4["solution_space_dimension"], 2);
    assert!(nil4["certificate"].is_array());
    let torus = run_report(&["obstruction", "--manifold", "builtin:torus2"], &dir.path().join("t.json"));
    assert_eq!(torus["conclusion"], "inconclusive");
}

#[test]
fn batch_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["classify-batch", "--manifold", "builtin:iwasawa", "--samples", "12", "--seed", "7"];
    let doc = run_report(&args, &a);
    run_report(&args, &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(doc["summary"]["samples"], 12);
    assert_eq!(doc["summary"]["sg_without_ic"], 0);
    assert_eq!(doc["summary"]["ic_orthogonality_disagreements"], 0);
    let c = dir.path().join("c.json");
    let other = run_report(&["classify-batch", "--manifold", "builtin:iwasawa", "--samples", "12", "--seed", "8"], &c);
    assert_ne!(doc["rows"], other["rows"]);
}

#[test]
fn check_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["check", "--manifold", "builtin:iwasawa", "--metric", "herm:2,(1/2)i,0,-(1/2)i,1,0,0,0,3"];
    run_report(&args, &a);
    run_report(&args, &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn parse_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("kt.alg");
    std::fs::write(&file, "manifold kt\nreal_dim 4\nJ 0 -1 0 0\nJ 1 0 0 0\nJ 0 0 0 -1\nJ 0 0 1 0\nd e3 = -e1^e2\n").unwrap();
    let out = run(&["parse", file.to_str().unwrap(), "--validate"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["check", "--manifold", file.to_str().unwrap(), "--metric", "diag:1,1"]);
    assert!(out.status.success());
}

#[test]
fn exit_code_for_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.alg");
    std::fs::write(&file, "manifold bad\ncomplex_dim 3\nd phi3 = phi9^phi2\n").unwrap();
    let out = run(&["parse", file.to_str().unwrap(), "--validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:10"));
    let out = run(&["check", "--manifold", "builtin:k3", "--metric", "diag:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_for_jacobi_violation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("jac.alg");
    // d(de1) = d(e3^e4) = e1^e2^e4, so d^2 != 0
    std::fs::write(&file, "manifold jac\nreal_dim 4\nJ 0 -1 0 0\nJ 1 0 0 0\nJ 0 0 0 -1\nJ 0 0 1 0\nd e3 = e1^e2\nd e4 = e3^e2\nd e1 = e3^e4\n").unwrap();
    let out = run(&["parse", file.to_str().unwrap(), "--validate"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_code_for_invalid_metrics() {
    for metric in ["diag:1,-1", "diag:1,1,1", "herm:1,i,1,1", "cdiag:1*exp(x),1"] {
        let out = run(&["check", "--manifold", "builtin:nil4", "--metric", metric]);
        assert_eq!(out.status.code(), Some(3), "{}", metric);
    }
}

#[test]
fn invariant_checks_pass_on_the_catalog() {
    for name in ["iwasawa", "nil4", "torus2", "torus3", "kodaira_thurston"] {
        let out = run(&["classify-batch", "--manifold", &format!("builtin:{}", name), "--samples", "5", "--seed", "1"]);
        assert_ne!(out.status.code(), Some(4), "{}", name);
        assert!(out.status.success(), "{}: {}", name, String::from_utf8_lossy(&out.stderr));
    }
}
