use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hgp_optim::alist::parse_matrix;
use serde_json::Value;

const REP2: &str = "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n";
const REP3: &str = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";

fn hgp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgp-optim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = hgp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn build_reports_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let rep2 = fixture(dir.path(), "rep2.alist", REP2);
    assert!(ok(&["build", "--alist", &rep2]).starts_with("N=5 K=1\n"));
    let rep3 = fixture(dir.path(), "rep3.alist", REP3);
    let text = ok(&["build", "--alist", &rep3]);
    assert_eq!(text, "N=13 K=1\nn=3 m=2 rank=2 girth=inf\n");
    assert!(ok(&["build", "--preset", "625-sa"]).starts_with("N=625 K=25\n"));
}

#[test]
fn malformed_alist_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = fixture(
        dir.path(),
        "bad.alist",
        "3 2\n2 2\n1 2 1\n2 2\n1 0 4\n1 2\n2 0\n1 2\n2 3\n",
    );
    let out = hgp(&["build", "--alist", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");

    let missing = dir.path().join("nope.alist").display().to_string();
    assert_eq!(hgp(&["build", "--alist", &missing]).status.code(), Some(2));
    assert_eq!(
        hgp(&["build", "--preset", "no-such"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture(dir.path(), "c.toml", "seed = 1\ntrials = [\n");
    let out = hgp(&["eval", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = hgp(&["optimize", "--preset", "625-sa"]);
    assert_eq!(out.status.code(), Some(2), "missing --out");
}

#[test]
fn eval_at_trivial_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let rep3 = fixture(dir.path(), "rep3.alist", REP3);
    for (p, failures) in [("0", 0), ("1", 300)] {
        let line = ok(&[
            "eval",
            "--alist",
            &rep3,
            "--erasure-prob",
            p,
            "--trials",
            "300",
        ]);
        let v: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["failures"], failures);
        assert_eq!(v["trials"], 300);
        for key in ["p", "rate", "std_error", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let rep3 = fixture(dir.path(), "rep3.alist", REP3);
    let args = [
        "sweep", "--alist", &rep3, "--p-grid", "0,1", "--trials", "100", "--seed", "4",
    ];
    let csv = ok(&args);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,rate,std_error,trials,seed");
    assert!(lines[1].starts_with("0.0,0.0,0.0,100,"));
    assert!(lines[2].starts_with("1.0,1.0,0.0,100,"));
    assert_eq!(ok(&args), csv);
}

#[test]
fn exported_alist_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp");
    ok(&[
        "export-alist",
        "--preset",
        "1600-plain",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(out.join("code.alist")).unwrap();
    let h = parse_matrix(&text).unwrap();
    assert_eq!((h.rows(), h.cols()), (24, 32));
    let again = ok(&["build", "--alist", out.join("code.alist").to_str().unwrap()]);
    assert!(again.starts_with("N=1600 K=64\n"));
    assert_eq!(
        ok(&[
            "export-alist",
            "--alist",
            out.join("code.alist").to_str().unwrap()
        ]),
        text
    );
}

fn optimize(preset: &str, extra: &[&str]) -> (tempfile::TempDir, Vec<Value>) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = vec![
        "optimize",
        "--preset",
        preset,
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    ok(&args);
    let log = fs::read_to_string(out.join("run.jsonl")).unwrap();
    let records = log
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (dir, records)
}

#[test]
fn plain_preset_budget_and_outputs() {
    let (dir, records) = optimize("625-plain", &["--trials", "10"]);
    assert_eq!(records.len(), 24 * 120);
    let run = dir.path().join("run");
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(run.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["evaluations"], 2880);
    let best_record = &records[summary["best"]["record"].as_u64().unwrap() as usize];
    assert_eq!(best_record["rate"], summary["best"]["rate"]);
    assert_eq!(best_record["key"], summary["best"]["key"]);

    let best = parse_matrix(&fs::read_to_string(run.join("best.alist")).unwrap()).unwrap();
    assert_eq!((best.rows(), best.cols()), (15, 20));
    let trajectory: Vec<Value> =
        serde_json::from_str(&fs::read_to_string(run.join("best_trajectory.json")).unwrap())
            .unwrap();
    let last = trajectory.last().unwrap();
    assert_eq!(last["key"], summary["best"]["key"]);
    assert_eq!(last["edges"].as_array().unwrap().len(), 60);
}

#[test]
fn sa_preset_echo() {
    let (dir, records) = optimize("1600-sa", &["--trials", "1"]);
    assert_eq!(records.len(), 451);
    let echo: toml::Table = fs::read_to_string(dir.path().join("run/config.toml"))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(echo["strategy"]["kind"].as_str(), Some("sa"));
    assert_eq!(echo["strategy"]["t_max"].as_integer(), Some(450));
    assert_eq!(echo["strategy"]["beta"].as_float(), Some(10.0));
    assert_eq!(echo["trials"].as_integer(), Some(1));
}

#[test]
fn ps_preset_echo() {
    let (dir, records) = optimize("2025-ps-hard", &["--trials", "1"]);
    assert!(records.len() <= 5 * 35);
    let echo: toml::Table = fs::read_to_string(dir.path().join("run/config.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let s = &echo["strategy"];
    assert_eq!(s["theta"].as_float(), Some(3e-2));
    assert_eq!(s["beta"].as_float(), Some(7.97));
    assert_eq!(s["gamma"].as_float(), Some(28.6e-4));
    assert_eq!(s["eta"].as_float(), Some(2.60e-3));
    assert_eq!(echo["erasure_prob"].as_float(), Some(12.0 / 32.0));
}
