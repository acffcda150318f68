use std::process::Command;

use herbrand::corpus::{model_path, proof_path};

fn herbrand(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_herbrand")).args(args).output().expect("runs");
    (out.status.success(), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn proof() -> String {
    proof_path().display().to_string()
}

#[test]
fn check_reports_goal() {
    let (ok, out, _) = herbrand(&["check", &proof()]);
    assert!(ok);
    assert!(out.starts_with("OK "));
    assert!(out.contains("GOAL (exists m (P m (g m) (S 0)))"));
}

#[test]
fn extract_k2() {
    let model = model_path("k2.model").display().to_string();
    let (ok, out, err) = herbrand(&["extract", &proof(), "--model", &model]);
    assert!(ok, "{}", err);
    let terms: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("HERBRAND_TERM ")).collect();
    let mut terms = terms;
    terms.sort();
    assert_eq!(terms, ["(g (g 0))", "(g 0)", "0"]);
    assert!(out.contains("DISJUNCT (P 0 (g 0) (S 0)) false"));
    assert!(out.contains("DISJUNCT (P (g 0) (g (g 0)) (S 0)) true"));
    assert!(out.contains("VERDICT true"));
    assert!(out.contains("GAMMA_SAMPLE pass"));
    assert!(out.contains("MEMBERSHIP true"));
}

#[test]
fn extract_json() {
    let model = model_path("k3.model").display().to_string();
    let (ok, out, _) = herbrand(&["extract", &proof(), "--model", &model, "--json"]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["herbrand_terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["verdict"], true);
}

#[test]
fn normalize_and_interpret() {
    let (ok, out, _) = herbrand(&["normalize", &proof(), "--trace", "--shown", "2"]);
    assert!(ok);
    assert!(out.lines().any(|l| l.starts_with("STEP 1 ")));
    assert!(out.lines().any(|l| l.starts_with("NORMAL ")));
    let (ok, out, _) = herbrand(&["interpret", &proof()]);
    assert!(ok);
    assert!(out.starts_with("(interpretation"));
}

#[test]
fn errors_exit_nonzero() {
    let (ok, _, err) = herbrand(&["check", "/nonexistent.proof"]);
    assert!(!ok);
    assert!(err.starts_with("error:"));
    let dir = std::env::temp_dir().join(format!("herbrand-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.proof");
    std::fs::write(&bad, "(theory pa)\n(relation P 1)\n(step 0 (em (P 0)) (P 0))\n").unwrap();
    let (ok, _, err) = herbrand(&["check", bad.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("step 0"), "{}", err);
    let _ = std::fs::remove_dir_all(&dir);
}
