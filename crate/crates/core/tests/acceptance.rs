//! Acceptance criteria AC1-AC6, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the lines always appear in
//! `cargo test` output. The process fails if any criterion fails, except for
//! the documented expected failure of AC5 on the tanh6 model, which is still
//! printed as FAIL and must fail in exactly the predicted way.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use susyqm::harness::{parse_json_report, validate_all, Check, Flag, ValidateOptions};
use susyqm::numerics::{fd_spectrum, richardson_check, shooting_solve, swkb_energy, wkb_energy};
use susyqm::{ModelParams, SolverConfig};

const BIN: &str = env!("CARGO_BIN_EXE_susyqm");

struct Outcome {
    passed: bool,
    /// Failure that is expected and explained (counts as a red line, not a broken build).
    expected_failure: bool,
    detail: String,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome { passed: true, expected_failure: false, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome { passed: false, expected_failure: false, detail: detail.into() }
    }

    fn check(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(detail)
        } else {
            Self::fail(detail)
        }
    }
}

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out, start.elapsed())
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// The published values are 3-decimal roundings; 224.5425 rounds to 224.542,
// which sits exactly on the 5e-4 bound, so allow for its binary representation.
const ROUNDING_SLACK: f64 = 1e-9;

fn ac1() -> Outcome {
    let table = [49.1225, 142.835, 224.542, 294.245, 351.943, 397.635, 431.323, 453.005, 462.683];
    let (out, elapsed) = run(&["spectrum", "--family", "tanh6", "--B0", "24", "--p", "0.35", "--format", "json"]);
    if !out.status.success() {
        return Outcome::fail(format!("exit {:?}", out.status.code()));
    }
    let v = json_stdout(&out);
    let levels: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    let worst = levels.iter().zip(table).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let n_max = v["n_max"].as_u64().unwrap();
    let asym = v["asymptote"].as_f64().unwrap();
    Outcome::check(
        levels.len() == 9 && worst <= 5e-4 + ROUNDING_SLACK && n_max == 8 && (asym - 463.245).abs() <= 1e-3 && elapsed < Duration::from_secs(1),
        format!("max |dE| = {worst:.2e}, n_max = {n_max}, asymptote = {asym:.4}, {} ms", elapsed.as_millis()),
    )
}

fn ac2() -> Outcome {
    let (out, elapsed) = run(&["spectrum", "--family", "scarf2", "--A", "7", "--B", "4", "--p", "1", "--format", "json"]);
    if !out.status.success() {
        return Outcome::fail(format!("exit {:?}", out.status.code()));
    }
    let v = json_stdout(&out);
    let levels: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    let n_max = v["n_max"].as_u64().unwrap();
    Outcome::check(
        levels == [0.0, 13.0, 24.0, 33.0, 40.0, 45.0, 48.0] && n_max == 6 && elapsed < Duration::from_secs(1),
        format!("levels {levels:?}, n_max = {n_max}, {} ms", elapsed.as_millis()),
    )
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let m = ModelParams::default();
    let cfg = SolverConfig::for_model(&m);
    let nde = [49.1225, 142.835, 227.456, 302.920, 369.135, 425.962];
    let wkb = [50.205, 143.826, 228.356, 303.730, 369.859, 426.605];
    let swkb = [49.1265, 142.839, 227.464, 302.936, 369.163, 426.008];

    let fd = match fd_spectrum(&m, &cfg, 6) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(format!("fd: {e}")),
    };
    let fd_err = fd.iter().zip(nde).map(|(a, b)| rel(*a, b)).fold(0.0, f64::max);
    let mut wkb_err = 0.0f64;
    let mut swkb_err = 0.0f64;
    for n in 0..6 {
        match (wkb_energy(&m, n, &cfg), swkb_energy(&m, n, &cfg)) {
            (Ok(w), Ok(s)) => {
                wkb_err = wkb_err.max(rel(w, wkb[n]));
                swkb_err = swkb_err.max(rel(s, swkb[n]));
            }
            (Err(e), _) | (_, Err(e)) => return Outcome::fail(format!("n = {n}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome::check(
        fd_err < 5e-3 && wkb_err < 3e-3 && swkb_err < 3e-3 && elapsed < Duration::from_secs(120),
        format!(
            "max rel err FD {:.3}%, WKB {:.3}%, SWKB {:.3}%, {:.1} s",
            100.0 * fd_err,
            100.0 * wkb_err,
            100.0 * swkb_err,
            elapsed.as_secs_f64()
        ),
    )
}

fn ac4() -> Outcome {
    let m = ModelParams::oscillator(1.0).unwrap();
    let cfg = SolverConfig { half_width: 12.0, grid_points: 8000, quad_tol: 1e-6, ..SolverConfig::default() };
    let fd = match fd_spectrum(&m, &cfg, 6) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(format!("fd: {e}")),
    };
    let mut worst = [0.0f64; 4];
    for (n, &fd_n) in fd.iter().enumerate() {
        let exact = (2 * n + 1) as f64;
        let got = [
            wkb_energy(&m, n, &cfg),
            swkb_energy(&m, n, &cfg),
            Ok(fd_n),
            shooting_solve(&m, &cfg, n),
        ];
        for (w, g) in worst.iter_mut().zip(got) {
            *w = w.max(g.map(|e| (e - exact).abs()).unwrap_or(f64::INFINITY));
        }
    }
    let orders: Vec<f64> = (0..6).map(|n| richardson_check(&m, n, &cfg).unwrap_or(f64::NAN)).collect();
    let orders_ok = orders.iter().all(|o| (1.9..=2.1).contains(o));
    Outcome::check(
        worst[0] <= 1e-6 && worst[1] <= 1e-6 && worst[2] <= 1e-3 && worst[3] <= 1e-3 && orders_ok,
        format!(
            "max |E - (2n+1)|: WKB {:.1e}, SWKB {:.1e}, FD {:.1e}, shooting {:.1e}; FD orders {:.3}..{:.3}",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            orders.iter().cloned().fold(f64::INFINITY, f64::min),
            orders.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        ),
    )
}

fn index_of(name: &str) -> Option<usize> {
    let start = name.find('=')? + 1;
    name[start..name.len() - 1].parse().ok()
}

/// Failures explained by the tanh6 hierarchy being shape invariant only at
/// the first step: every check that relies on stage k >= 1 or state n >= 2.
fn predicted_tanh6_failure(c: &Check) -> bool {
    let idx = index_of(&c.name);
    if c.name.starts_with("shape_invariance") {
        return idx.is_some_and(|k| k >= 1);
    }
    if ["residual", "intertwining", "nodes"].iter().any(|p| c.name.starts_with(p)) {
        return idx.is_some_and(|n| n >= 2);
    }
    c.name == "gram_identity"
}

fn ac5() -> Outcome {
    let tanh6 = ModelParams::default();
    let scarf = ModelParams::scarf2(7.0, 4.0, 1.0).unwrap();
    let t = validate_all(&tanh6, &SolverConfig::for_model(&tanh6), ValidateOptions::default());
    let s = validate_all(&scarf, &SolverConfig::for_model(&scarf), ValidateOptions::default());
    let (cli, _) = run(&["validate"]);
    let (cli_scarf, _) = run(&["validate", "--family", "scarf2"]);

    let t_failed: Vec<&Check> = t.failures().collect();
    let s_failed: Vec<&Check> = s.failures().collect();
    let detail = format!(
        "tanh6 {}/{} checks fail, scarf2 {}/{} fail; validate exit codes tanh6 {:?}, scarf2 {:?}",
        t_failed.len(),
        t.checks.len(),
        s_failed.len(),
        s.checks.len(),
        cli.status.code(),
        cli_scarf.status.code()
    );
    if t.passed() && s.passed() && cli.status.success() && cli_scarf.status.success() {
        return Outcome::pass(detail);
    }
    // Expected: scarf2 clean, tanh6 failing only where the hierarchy breaks.
    let expected = s.passed()
        && cli_scarf.status.success()
        && cli.status.code() == Some(1)
        && t_failed.iter().all(|c| predicted_tanh6_failure(c))
        && t.checks.iter().any(|c| c.name == "shape_invariance[k=1]" && !c.passed);
    let first = t_failed.iter().take(3).map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ");
    Outcome {
        passed: false,
        expected_failure: expected,
        detail: format!("{detail}; first failures: {first}"),
    }
}

fn ac6() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_dir = dir.path().to_str().unwrap();
    let (out, elapsed) = run(&["table", "--replicate-above-asymptote", "--format", "json", "--out", out_dir]);
    if !out.status.success() {
        return Outcome::fail(format!("exit {:?}", out.status.code()));
    }
    let rows = parse_json_report(&out.stdout).expect("report parses");
    let flagged: Vec<(String, f64, Flag)> = rows
        .iter()
        .flat_map(|r| r.per_method.iter())
        .filter(|(_, e)| matches!(e.flag, Flag::AboveAsymptote | Flag::OnAsymptote))
        .filter_map(|(m, e)| e.value.map(|v| (m.label().to_string(), v, e.flag)))
        .collect();
    let hit = flagged.iter().find(|(_, v, _)| rel(*v, 463.245) < 2e-3);
    match hit {
        Some((m, v, f)) => Outcome::pass(format!(
            "{m} reports {v:.4} flagged {} ({} flagged entries, {:.1} s)",
            f.as_str(),
            flagged.len(),
            elapsed.as_secs_f64()
        )),
        None => Outcome::fail(format!("no flagged value near 463.245: {flagged:?}")),
    }
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    // libtest-style arguments (filters, --nocapture, ...) are accepted and ignored
    let criteria: [Criterion; 6] = [
        ("AC1", "tanh6 exact spectrum", ac1),
        ("AC2", "scarf2 exact spectrum", ac2),
        ("AC3", "numerical columns of the comparison table", ac3),
        ("AC4", "oscillator oracle for all four methods", ac4),
        ("AC5", "invariant suite", ac5),
        ("AC6", "state replicated above the asymptote", ac6),
    ];
    let mut broken = Vec::new();
    for (id, title, f) in criteria {
        let o = f();
        let status = if o.passed { "PASS" } else { "FAIL" };
        let note = if o.expected_failure { " [expected failure]" } else { "" };
        println!("{status} {id} {title}{note}: {}", o.detail);
        if !o.passed && !o.expected_failure {
            broken.push(id);
        }
    }
    if !broken.is_empty() {
        eprintln!("unexpected acceptance failures: {}", broken.join(", "));
        std::process::exit(1);
    }
}
