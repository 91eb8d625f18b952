//! End-to-end tests of the `dpsem` binary: flag handling, output formats,
//! and exit codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dpsem::io;
use dpsem::mechanism::{DatabaseSpace, Mechanism};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpsem"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// A dense mechanism that ignores its input entirely.
fn constant_mechanism_file(dir: &Path) -> PathBuf {
    let space = DatabaseSpace::binary(2).unwrap();
    let mut rows = BTreeMap::new();
    for db in space.enumerate(1 << 20).unwrap() {
        rows.insert(db, vec![0.25, 0.75]);
    }
    let m = Mechanism::new_dense(space, vec!["lo".into(), "hi".into()], rows).unwrap();
    let path = dir.join("constant.json");
    io::save_mechanism(&m, &path).unwrap();
    path
}

fn gen_rr(dir: &Path, flip: &str, n: &str) -> PathBuf {
    let path = dir.join(format!("rr_{flip}_{n}.json"));
    let out = run(&[
        "gen",
        "--type",
        "randomized_response",
        "--n",
        n,
        "--flip-prob",
        flip,
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success(), "gen failed: {out:?}");
    path
}

#[test]
fn analyze_writes_curve_csv_with_one_row_per_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let rr = gen_rr(dir.path(), "0.25", "2");
    let csv = dir.path().join("curve.csv");
    let out = run(&[
        "analyze",
        "--mechanism",
        path_str(&rr),
        "--epsilons",
        "0,0.5,1.1",
        "--csv",
        path_str(&csv),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header + 3 rows: {text}");
    assert_eq!(lines[0], "epsilon,delta,worst_x,worst_y");
}

#[test]
fn analyze_reports_ln3_for_quarter_flip_response() {
    let dir = tempfile::tempdir().unwrap();
    let rr = gen_rr(dir.path(), "0.25", "2");
    let json = dir.path().join("dp.json");
    let out = run(&[
        "analyze",
        "--mechanism",
        path_str(&rr),
        "--epsilons",
        "0.5",
        "--json",
        path_str(&json),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let eps_max = report["epsilon_max"].as_f64().unwrap();
    assert!(
        (eps_max - 3.0f64.ln()).abs() <= 1e-9,
        "epsilon_max {eps_max}"
    );
}

#[test]
fn analyze_constant_mechanism_is_perfectly_private() {
    let dir = tempfile::tempdir().unwrap();
    let path = constant_mechanism_file(dir.path());
    let out = run(&[
        "analyze",
        "--mechanism",
        path_str(&path),
        "--epsilons",
        "0,0.5",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("epsilon_max = 0"), "{text}");
    for line in text.lines().filter(|l| l.starts_with("tight delta")) {
        assert!(line.contains("= 0e0"), "nonzero delta: {line}");
    }
}

#[test]
fn semantic_constant_mechanism_has_zero_loss() {
    let dir = tempfile::tempdir().unwrap();
    let mech = constant_mechanism_file(dir.path());
    let prior = dir.path().join("prior.json");
    std::fs::write(
        &prior,
        r#"[{"database": "0,0", "weight": "0.5"}, {"database": "1,1", "weight": "0.5"}]"#,
    )
    .unwrap();
    let out = run(&[
        "semantic",
        "--mechanism",
        path_str(&mech),
        "--prior",
        path_str(&prior),
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("epsilon_star = 0\n"), "{text}");
    assert!(text.contains("weighting = mixture"), "{text}");
}

#[test]
fn semantic_real_db_flag_switches_weighting() {
    let dir = tempfile::tempdir().unwrap();
    let rr = gen_rr(dir.path(), "0.25", "2");
    let prior = dir.path().join("prior.json");
    std::fs::write(
        &prior,
        r#"[{"database": "0,0", "weight": "0.5"}, {"database": "1,0", "weight": "0.5"}]"#,
    )
    .unwrap();
    let json = dir.path().join("sem.json");
    let out = run(&[
        "semantic",
        "--mechanism",
        path_str(&rr),
        "--prior",
        path_str(&prior),
        "--real-db",
        "1,1",
        "--json",
        path_str(&json),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("weighting = real_db 1,1"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["weighting"]["real_db"], "1,1");

    // the mixture run reports the plain mixture tag instead
    let out = run(&[
        "semantic",
        "--mechanism",
        path_str(&rr),
        "--prior",
        path_str(&prior),
        "--json",
        path_str(&json),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["weighting"], "mixture");
}

#[test]
fn gen_round_trips_rows_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let rr = gen_rr(dir.path(), "0.1", "2");
    let loaded = io::load_mechanism(&rr).unwrap();
    assert!(loaded.is_dense(), "small mechanisms are saved densely");
    let space = DatabaseSpace::binary(2).unwrap();
    let reference = dpsem::mechanism::make_randomized_response(&space, 0.1).unwrap();
    assert_eq!(loaded.transcripts(), reference.transcripts());
    for db in space.enumerate(1 << 20).unwrap() {
        let a = loaded.row(&db).unwrap();
        let b = reference.row(&db).unwrap();
        for (x, y) in a.probs.iter().zip(&b.probs) {
            assert_eq!(x.to_bits(), y.to_bits(), "row drift at {db:?}");
        }
    }
}

#[test]
fn gen_large_mechanism_stays_generator_backed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gauss.json");
    let out = run(&[
        "gen",
        "--type",
        "gaussian_sum",
        "--n",
        "500",
        "--epsilon",
        "0.5",
        "--delta",
        "1e-6",
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("generator descriptor"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(value.get("matrix").is_none(), "must not densify n = 500");
    assert_eq!(value["generator"]["type"], "gaussian_sum");
}

#[test]
fn counterexample_writes_contracted_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let out = run(&[
        "counterexample",
        "--n",
        "2",
        "--epsilon",
        "0.5",
        "--delta",
        "9.5367431640625e-7",
        "--csv",
        path_str(&csv),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "transcript,ratio,posterior_x0,sd_game1"
    );
    // small n: the attack has no bite
    let summary = stdout_of(&out);
    assert!(
        summary.contains("mass(SD >= 0.45 | real database) = 0"),
        "{summary}"
    );
}

#[test]
fn verify_claims_prints_six_pass_lines_and_exits_zero() {
    let out = run(&[
        "verify", "--suite", "claims", "--trials", "60", "--seed", "3",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let pass_lines = text.lines().filter(|l| l.starts_with("PASS ")).count();
    assert_eq!(pass_lines, 6, "{text}");
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("6/6 laws passed"), "{text}");
}

#[test]
fn malformed_mechanism_file_exits_two_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"domain\": [\"0\",\"1\"], \"n\": 1").unwrap();
    let out = run(&[
        "analyze",
        "--mechanism",
        path_str(&path),
        "--epsilons",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error:") && err.contains("line"), "{err}");
}

#[test]
fn unknown_suite_exits_two() {
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_generator_parameter_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rr.json");
    let out = run(&[
        "gen",
        "--type",
        "randomized_response",
        "--n",
        "2",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--flip-prob"), "{err}");
}
