use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_susyqm");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn spectrum_defaults() {
    let o = run(&["spectrum"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# config {"));
    assert!(text.contains("n_max = 8"));
    assert!(text.contains("asymptote = 463.245000"));
    assert!(text.contains("462.682500"));
}

#[test]
fn spectrum_scarf_csv() {
    let o = run(&["spectrum", "--family", "scarf2", "--A", "7", "--B", "4", "--p", "1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert_eq!(last, "6,48.000000,48.000000");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let o = run(&["spectrum", "--p", "9", "--B0", "24"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires 0 < p < B0/3"), "{}", stderr(&o));
}

#[test]
fn unknown_flags_and_values_are_rejected() {
    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--methods", "ritz"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "--which", "fig3"]).status.code(), Some(2));
}

#[test]
fn help_lists_every_flag() {
    let o = run(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for flag in [
        "--family",
        "--B0",
        "--p",
        "--A",
        "--B",
        "--half-width",
        "--grid",
        "--format",
        "--out",
        "--replicate-above-asymptote",
        "--config",
    ] {
        assert!(text.contains(flag), "missing {flag}");
    }
    for cmd in ["spectrum", "table", "figure", "validate"] {
        assert!(text.contains(cmd));
    }
}

#[test]
fn table_with_one_method_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["table", "--methods", "wkb", "--format", "csv", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv, stdout(&o));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config "));
    assert_eq!(lines.next().unwrap(), "n,exact,WKB,WKB_err_pct,WKB_flag");

    let exact: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let table = [49.1225, 142.835, 224.542, 294.245, 351.943, 397.635, 431.323, 453.005, 462.683];
    assert_eq!(exact.len(), 9);
    for (a, b) in exact.iter().zip(table) {
        assert!((a - b).abs() <= 5e-4 + 1e-9, "{a} vs {b}");
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["methods"], serde_json::json!(["WKB"]));
    assert_eq!(json["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn table_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = run(&["table", "--grid", "8000", "--out", out]);
        assert!(o.status.success());
        let csv = fs::read(dir.path().join("report.csv")).unwrap();
        let json = fs::read(dir.path().join("report.json")).unwrap();
        runs.push((csv, json, o.stdout));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn oracle_table_is_all_ok() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["table", "--oracle", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let exact = row["exact"].as_f64().unwrap();
        for (_, e) in row["per_method"].as_object().unwrap() {
            assert_eq!(e["flag"], "ok");
            assert!((e["value"].as_f64().unwrap() - exact).abs() < 1e-3);
        }
    }
}

#[test]
fn validate_exit_codes() {
    let o = run(&["validate", "--family", "scarf2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let diag: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert!(diag["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let o = run(&["validate", "--family", "scarf2", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL residual[n=1]"));

    let o = run(&["validate", "--p", "8", "--B0", "24"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL parameters"));
}

#[test]
fn validate_reports_n_max_for_other_parameters() {
    let o = run(&["validate", "--p", "0.4", "--B0", "24"]);
    assert!(stdout(&o).starts_with("n_max = 7\n"));
    // the oracle and exactness checks that do not depend on the hierarchy pass
    for name in ["parameters", "shape_invariance[k=0]", "residual[n=0]", "residual[n=1]", "energy_forms", "oracle_fd"] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(&format!("PASS {name} "))), "{name}");
    }
}

#[test]
fn config_file_composes_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, "[model]\nB0 = 30.0\np = 0.5\n\n[output]\nformat = \"json\"\n").unwrap();
    let o = run(&["spectrum", "--config", path.to_str().unwrap(), "--p", "0.4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // B0 = 30, p = 0.4: n_max = floor((150 + 2.4) / 16.8) = 9
    assert_eq!(v["n_max"], 9);

    fs::write(&path, "[model]\nb_zero = 1\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.toml");
    assert_eq!(run(&["spectrum", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = run(&["table", "--methods", "swkb", "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["figure", "--which", "fig2", "--grid", "8000", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["fig2_potential.dat", "fig2_levels.dat", "fig2_states.dat"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("# config {"), "{name}");
    }
    let levels = fs::read_to_string(dir.path().join("fig2_levels.dat")).unwrap();
    let exact: Vec<f64> = levels.lines().skip(2).map(|l| l.split(' ').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(exact, vec![0.0, 13.0, 24.0, 33.0, 40.0, 45.0, 48.0]);

    // fig1 needs the tanh6 family
    let o = run(&["figure", "--which", "fig1", "--family", "scarf2", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}
