//! End-to-end tests of the `singode` binary: exit codes, report shapes,
//! and output determinism, all through the real process boundary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_fixture(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// x*y'' = -y' + y'^3, the power-family pencil with unit parameter.
const PENCIL: &str = r#"{"delta": [[1, 0, 1.0]], "mu": [[], [[0, 0, -1.0]], [], [[0, 0, 1.0]]]}"#;

/// Same shape with coefficient sqrt(2): saddle at slope 0, irrational nodes.
const PENCIL_SQRT2: &str = r#"{"delta": [[1, 0, 1.0]], "mu": [[], [[0, 0, -1.4142135623730951]], [], [[0, 0, 1.4142135623730951]]]}"#;

const METRIC: &str = r#"{"metric": {"a": [[0, 0, 1.0]], "b": [], "c": [[0, 1, 1.0]]}}"#;

const ZERO: &str = r#"{"delta": [], "mu": [[], [], [], []]}"#;

#[test]
fn analyze_reports_the_directions_with_their_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);

    let out = run(&["analyze", "--input", &eq, "--point", "0,0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let v = stdout_json(&out);
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["equation"]["from_metric"], false);
    let report = &v["report"];
    assert_eq!(report["point_verdict"], "singular");
    assert_eq!(report["oscillation"], "excluded");
    assert_eq!(report["delta_gradient"][0], 1.0);

    let dirs = report["directions"].as_array().unwrap();
    assert_eq!(dirs.len(), 3);
    let slopes: Vec<f64> = dirs.iter().map(|d| d["p"].as_f64().unwrap()).collect();
    assert_eq!(slopes, vec![-1.0, 0.0, 1.0]);
    for d in dirs {
        assert_eq!(d["lambda1"], 1.0);
        let expect = if d["p"] == 0.0 { -1.0 } else { 2.0 };
        assert_eq!(d["lambda2"], expect);
    }
    assert_eq!(dirs[1]["verdict"], "negative_rational_resonant");
    assert_eq!(dirs[2]["verdict"], "node_positive_resonant");
    assert_eq!(dirs[2]["family_form"]["exponent"], 2.0);
}

#[test]
fn analyze_converts_metric_input_on_load() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "metric.json", METRIC);

    let out = run(&["analyze", "--input", &eq, "--point", "0,0"]);
    assert!(out.status.success());

    let v = stdout_json(&out);
    assert_eq!(v["equation"]["from_metric"], true);
    // ds^2 = dx^2 + y dy^2 has Delta = y and M = -p^2 (the y-coefficient rule).
    assert_eq!(v["equation"]["delta"], serde_json::json!([[0, 1, 1.0]]));
    assert_eq!(v["equation"]["mu"][2], serde_json::json!([[0, 0, -1.0]]));
    assert_eq!(v["report"]["point_verdict"], "singular");
}

#[test]
fn analyze_grid_maps_verdicts_and_lists_locus_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);

    let out = run(&[
        "analyze",
        "--input",
        &eq,
        "--point",
        "0,0",
        "--grid",
        "-0.5,0.5,-0.5,0.5,4,4",
    ]);
    assert!(out.status.success());

    let v = stdout_json(&out);
    let grid = &v["grid"];
    assert_eq!(grid["shape"], serde_json::json!([4, 4]));
    let verdicts = grid["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 16);
    // No lattice node sits on x = 0 for this node count.
    assert!(verdicts.iter().all(|s| s == "not_singular"));

    let crossings = grid["locus_crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 4);
    for c in crossings {
        assert!(c[0].as_f64().unwrap().abs() < 1e-9, "crossing off the locus: {c}");
    }
}

#[test]
fn analyze_rejects_malformed_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_fixture(dir.path(), "bad.json", "{ not json");

    let out = run(&["analyze", "--input", &bad, "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singode:"));

    let missing = dir.path().join("missing.json");
    let out = run(&["analyze", "--input", missing.to_str().unwrap(), "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_writes_one_csv_per_offset_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "saddle.json", PENCIL_SQRT2);
    let prefix = dir.path().join("run");
    let prefix = prefix.to_str().unwrap();

    let out = run(&[
        "trace", "--input", &eq, "--point", "0,0", "--dir", "0", "--side", "plus",
        "--offsets", "0.0,1e-3", "--out", prefix,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let v = stdout_json(&out);
    assert_eq!(v["command"], "trace");
    assert_eq!(v["verdict"], "saddle");
    assert_eq!(v["lambda1"], 1.0);
    let trajs = v["trajectories"].as_array().unwrap();
    assert_eq!(trajs.len(), 2);

    for (k, t) in trajs.iter().enumerate() {
        let file = t["file"].as_str().unwrap();
        assert!(file.ends_with(&format!("run.{k}.csv")));
        let text = std::fs::read_to_string(file).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("# traj"), "header: {header}");
        assert_eq!(lines.next().unwrap(), "t,x,y,p");
        assert!(lines.count() as u64 > 10);
    }

    let summary_path = format!("{prefix}.summary.json");
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(&summary_path).unwrap()).unwrap();
    assert_eq!(summary, v, "stdout and the summary file carry the same report");
}

#[test]
fn trace_refuses_points_off_the_singular_locus() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);
    let prefix = dir.path().join("off");

    let out = run(&[
        "trace", "--input", &eq, "--point", "0.5,0.5", "--dir", "1", "--side", "plus",
        "--out", prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no traceable family"));
}

#[test]
fn trace_refuses_the_vertical_direction() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);
    let prefix = dir.path().join("vert");

    let out = run(&[
        "trace", "--input", &eq, "--point", "0,0", "--dir", "inf", "--side", "plus",
        "--out", prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("swap axes"));
}

#[test]
fn portrait_draws_arrows_locus_and_pencils() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "saddle.json", PENCIL_SQRT2);
    let svg_path = dir.path().join("p.svg");
    let csv_path = dir.path().join("p.csv");

    let out = run(&[
        "portrait", "--input", &eq, "--window", "-1,1,-1,1",
        "--out", svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("#607080"), "direction arrows are drawn");
    assert!(svg.contains("#c62828"), "the singular locus is drawn");
    assert!(svg.contains("#1565c0"), "the traced pencils are drawn");

    let out = run(&[
        "portrait", "--input", &eq, "--window", "-1,1,-1,1",
        "--out", csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# singode portrait; window=[-1,1]x[-1,1]"), "meta: {meta}");
    assert_eq!(lines.next().unwrap(), "kind,id,a,b,c,d");
    // 21x21 samples minus the 21 on the locus column x = 0.
    assert_eq!(csv.lines().filter(|l| l.starts_with("arrow,")).count(), 420);
    assert!(csv.lines().any(|l| l.starts_with("locus,")));
    assert!(csv.lines().any(|l| l.starts_with("trace,")));
}

#[test]
fn portrait_of_the_zero_equation_has_no_arrows() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "zero.json", ZERO);
    let svg_path = dir.path().join("z.svg");

    let out = run(&[
        "portrait", "--input", &eq, "--window", "-1,1,-1,1",
        "--out", svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(!svg.contains("#607080"), "a zero field has nothing to draw");
    assert!(!svg.contains("#1565c0"));
}

#[test]
fn portrait_validates_window_and_extension() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);

    let empty = run(&[
        "portrait", "--input", &eq, "--window", "1,-1,-1,1",
        "--out", dir.path().join("p.svg").to_str().unwrap(),
    ]);
    assert_eq!(empty.status.code(), Some(2));

    let ext = run(&[
        "portrait", "--input", &eq, "--window", "-1,1,-1,1",
        "--out", dir.path().join("p.png").to_str().unwrap(),
    ]);
    assert_eq!(ext.status.code(), Some(2));
}

#[test]
fn verify_passes_on_builtin_entries_and_rejects_unknown_ids() {
    let out = run(&["verify", "--example", "ex1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let json_start = text.find('{').unwrap();
    let summary: Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(summary["command"], "verify");
    assert_eq!(summary["failures"], 0);
    assert!(summary["checks"].as_u64().unwrap() >= 4);

    let out = run(&["verify", "--example", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown corpus entry"));
}

#[test]
fn analyze_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let eq = write_fixture(dir.path(), "pencil.json", PENCIL);
    let args =
        ["analyze", "--input", eq.as_str(), "--point", "0,0", "--grid", "-1,1,-1,1,8,8"];

    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}
