use std::f64::consts::PI;
use std::path::Path;

use swiss_cheese::files::{read_config, read_report};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["cheese", "--workers", "2"];
    full.extend_from_slice(args);
    let code = cheese_cli::run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_with_four_pi_gives_unit_c0() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let (code, text, _) = run(&["build", "--C", "12.566", "--out", s(&out)]);
    assert_eq!(code, 0);
    assert!(text.contains("C0"));
    let cfg = read_config(&out).unwrap();
    assert!((cfg.budget_c0 - 12.566 / (4.0 * PI)).abs() < 1e-15);
    assert!((cfg.budget_c0 - 1.0).abs() < 1e-4);
}

#[test]
fn empty_build_is_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    assert_eq!(run(&["build", "--C", "1", "--L", "0", "--out", s(&out)]).0, 0);
    let cfg = read_config(&out).unwrap();
    assert!(cfg.deletions.is_empty());
    let svg = dir.path().join("c.svg");
    assert_eq!(run(&["render", "--config", s(&out), "--out", s(&svg)]).0, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<rect").count(), 1);
    assert_eq!(text.matches("<circle").count(), 0);
}

#[test]
fn disc_cap_exceeded_exits_three() {
    let (code, _, err) = run(&["build", "--C", "51471.85", "--L", "6", "--n-cap", "4", "--disc-cap", "10"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(run(&["build", "--C", "-1"]).0, 1);
    assert_eq!(run(&["verify", "--suite", "budget"]).0, 1);
    assert_eq!(run(&["verify", "--suite", "derivation", "--config", "/nonexistent/c.json"]).0, 1);
    assert_eq!(run(&["render", "--config", "/nonexistent/c.json", "--out", "/tmp/x.svg"]).0, 1);
    assert_eq!(run(&["verify", "--suite", "nope"]).0, 1);
}

#[test]
fn residue_suite_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.jsonl");
    let (code, text, _) = run(&["verify", "--suite", "residue-oracle", "--out", s(&rep)]);
    assert_eq!(code, 0);
    assert!(text.contains("PASS"));
    let (header, rows) = read_report(&rep).unwrap();
    assert_eq!(header.suite, "residue-oracle");
    assert_eq!(header.environment.workers, 2);
    assert!(rows[0].params["max_abs_deviation"] < 1e-9);
}

#[test]
fn level_family_suite_fails_on_the_outer_ring() {
    let (code, text, _) = run(&["verify", "--suite", "level-family", "--n", "3..4", "--samples", "256"]);
    assert_eq!(code, 4);
    let failed: Vec<&str> = text.lines().filter(|l| l.contains("\"verdict\":\"fail\"")).collect();
    assert_eq!(failed.len(), 2);
    assert!(failed.iter().all(|l| l.contains("level.outer")));
}

#[test]
fn family_zoom_draws_one_ring() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.json");
    // C0 = 4096 makes D(0, 1/2) start at level 4
    let c = format!("{}", 4.0 * PI * 4096.0);
    assert_eq!(run(&["build", "--C", &c, "--L", "6", "--n-cap", "4", "--out", s(&cfg_path)]).0, 0);
    let cfg = read_config(&cfg_path).unwrap();
    let e = cfg.ledger.entries.iter().find(|e| e.exact == ["0", "0", "1/2"]).unwrap();
    assert_eq!(e.m, 4);
    let svg = dir.path().join("f.svg");
    let l = e.l.to_string();
    let args = ["render", "--config", s(&cfg_path), "--out", s(&svg), "--zoom", "family", "--l", &l, "--level", "4"];
    assert_eq!(run(&args).0, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 1024);
    let full = dir.path().join("full.svg");
    assert_eq!(run(&["render", "--config", s(&cfg_path), "--out", s(&full)]).0, 0);
    let text = std::fs::read_to_string(&full).unwrap();
    assert_eq!(text.matches("<circle").count(), cfg.deletions.len());
    let again = dir.path().join("again.svg");
    run(&["render", "--config", s(&cfg_path), "--out", s(&again)]);
    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn witness_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.json");
    assert_eq!(run(&["build", "--levels", "2", "--seed", "4", "--out", s(&cfg_path)]).0, 0);
    let (code, text, _) = run(&["witness", "--config", s(&cfg_path), "--z0", "0", "--b", "0.9"]);
    assert_eq!(code, 0);
    let w: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!(w["l"].as_u64().unwrap() >= 1);

    let cfg = read_config(&cfg_path).unwrap();
    let p = cfg.deletions[0].disc.center;
    let inside = format!("{}{:+}i", p.re, p.im);
    let (code, _, err) = run(&["witness", "--config", s(&cfg_path), "--z0", &inside, "--b", "0.9"]);
    assert_eq!(code, 2);
    assert!(err.contains("domain"));

    assert_eq!(run(&["witness", "--config", s(&cfg_path), "--z0", "1+", "--b", "0.9"]).0, 1);
    assert_eq!(run(&["witness", "--config", s(&cfg_path), "--z0", "0", "--b", "0.001", "--cap", "5"]).0, 4);
}
