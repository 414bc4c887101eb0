//! End-to-end tests of the `qcomplex` binary: JSON/CSV contracts, exit
//! codes, and manifest reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcomplex"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

const SIGMA_X_JSON: &str =
    r#"{"dim": 2, "entries": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}"#;
const KET0_JSON: &str = r#"{"n_qubits": 1, "dim": 2, "amps": [[1.0, 0.0], [0.0, 0.0]]}"#;

#[test]
fn ghz_fixture_and_complexity_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["gen-fixture", "--kind", "ghz", "--n", "3", "--out", "ghz3.json"]);
    assert!(out.status.success());
    assert!(dir.path().join("ghz3.json").exists());
    assert!(dir.path().join("ghz3.json.manifest.json").exists());

    let report = stdout_json(&run_in(
        dir.path(),
        &["complexity", "--state", "ghz3.json", "--strategy", "heuristic"],
    ));
    assert_eq!(report["naive"], 3);
    assert_eq!(report["quantum"], 1);
    assert_eq!(report["certified"], false);
    assert!(report["witness"].as_array().unwrap().len() == 8);
}

#[test]
fn chain_h4_fixture_is_integer_exact_and_certifies() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["gen-fixture", "--kind", "chain-h4", "--out", "h4.json"]);
    let text = fs::read_to_string(dir.path().join("h4.json")).unwrap();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["dim"], 4);
    for (i, row) in parsed["entries"].as_array().unwrap().iter().enumerate() {
        for (j, entry) in row.as_array().unwrap().iter().enumerate() {
            let expect = if (i + j) % 2 == 1 { 1.0 } else { 0.0 };
            assert_eq!(entry[0], expect, "entry ({i},{j})");
            assert_eq!(entry[1], 0.0);
        }
    }

    let report = stdout_json(&run_in(
        dir.path(),
        &["complexity", "--ham", "h4.json", "--strategy", "exhaustive"],
    ));
    assert_eq!(report["naive"], 2);
    assert_eq!(report["quantum"], 1);
    assert_eq!(report["certified"], true);
    assert_eq!(report["witness"], serde_json::json!([0, 1, 3, 2]));
}

#[test]
fn grover_run_emits_analytic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let summary = stdout_json(&run_in(
        dir.path(),
        &["grover", "--n", "2", "--target", "0", "--csv", "run.csv"],
    ));
    assert_eq!(summary["success_iteration"], 1);
    assert!((summary["final_success_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let csv = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iter,beta_re,beta_im,alpha_modulus,support_size,success"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(row[5], "true");
    assert!(dir.path().join("run.csv.manifest.json").exists());
}

#[test]
fn estimate_q_reports_breakdown_scale() {
    let dir = tempfile::tempdir().unwrap();
    let summary = stdout_json(&run_in(
        dir.path(),
        &[
            "estimate-q",
            "--n-min",
            "2",
            "--n-max",
            "14",
            "--eps-min",
            "0.03125",
            "--csv",
            "q.csv",
        ],
    ));
    assert_eq!(summary["q_hat"], 11);
    let csv = fs::read_to_string(dir.path().join("q.csv")).unwrap();
    assert_eq!(csv.lines().count(), 14); // header + 13 sizes
    let n10: Vec<&str> = csv
        .lines()
        .find(|l| l.starts_with("10,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(n10[6], "true", "n = 10 deviates");
}

#[test]
fn quantize_writes_quanta_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ket0.json"), KET0_JSON).unwrap();
    fs::write(dir.path().join("sx.json"), SIGMA_X_JSON).unwrap();

    let out = run_in(
        dir.path(),
        &[
            "quantize", "--state", "ket0.json", "--op", "sx.json", "--eps", "0.5", "--out",
            "quanta.json",
        ],
    );
    assert!(out.status.success());
    let quanta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("quanta.json")).unwrap()).unwrap();
    assert_eq!(quanta["epsilon"], 0.5);
    assert_eq!(quanta["nu"], 2);
    assert_eq!(quanta["c"], 1.0);
    let list = quanta["quanta"].as_array().unwrap();
    assert_eq!(list.len(), 4);
    for q in list {
        assert_eq!(q["b_in"], 0);
        assert_eq!(q["b_fin"], 1);
        assert_eq!(q["t_in"], "+1");
        assert_eq!(q["t_fin"], "+1");
    }

    let trace = stdout_json(&run_in(
        dir.path(),
        &[
            "quantize", "--state", "ket0.json", "--op", "sx.json", "--eps", "0.5", "--trace", "2",
        ],
    ));
    assert_eq!(trace["id"], 2);
    assert_eq!(trace["size"], 0.25);
    assert_eq!(trace["b_fin"], 1);

    let out = run_in(
        dir.path(),
        &[
            "quantize", "--state", "ket0.json", "--op", "sx.json", "--eps", "0.5", "--trace", "9",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["code"], "unknown_quantum_id");
}

#[test]
fn symmetry_reports_connected_and_refused_lemma() {
    let dir = tempfile::tempdir().unwrap();
    run_in(
        dir.path(),
        &[
            "gen-fixture", "--kind", "tavis-cummings", "--atoms", "2", "--couplings", "0.5,0.5",
            "--out", "tc.json",
        ],
    );
    run_in(
        dir.path(),
        &[
            "gen-fixture", "--kind", "connected", "--ham", "tc.json", "--seed-index", "1",
            "--pattern", "+1,-1", "--out", "pair.json",
        ],
    );
    let report = stdout_json(&run_in(
        dir.path(),
        &["symmetry", "--ham", "tc.json", "--state", "pair.json", "--t", "0.7"],
    ));
    assert_eq!(report["equilibrium"], true);
    assert_eq!(report["connected"], true);
    assert_eq!(report["group_order"], 2);
    assert_eq!(report["lemma_ok"], true);

    // A state with support split across orbits: the lemma refuses (null).
    run_in(
        dir.path(),
        &["gen-fixture", "--kind", "ghz", "--n", "3", "--out", "ghz3.json"],
    );
    let report = stdout_json(&run_in(
        dir.path(),
        &["symmetry", "--ham", "tc.json", "--state", "ghz3.json"],
    ));
    assert_eq!(report["connected"], false);
    assert_eq!(report["lemma_ok"], Value::Null);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    // Usage errors: 2.
    assert_eq!(run_in(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run_in(dir.path(), &["gen-fixture", "--kind", "bogus", "--out", "x.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run_in(dir.path(), &["complexity"]).status.code(), Some(2));

    // Domain errors: 1, with a machine-readable object on stderr.
    let out = run_in(dir.path(), &["complexity", "--state", "absent.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["code"], "io_error");
    assert!(err["message"].as_str().unwrap().contains("absent.json"));

    fs::write(dir.path().join("plus.json"), r#"{"n_qubits": 1, "dim": 2, "amps": [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]}"#).unwrap();
    fs::write(
        dir.path().join("diag.json"),
        r#"{"dim": 2, "entries": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["quantize", "--state", "plus.json", "--op", "diag.json", "--eps", "0.1"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["code"], "not_equilibrium");
}

#[test]
fn identical_invocations_reproduce_outputs_bitwise() {
    let run_once = || {
        let dir = tempfile::tempdir().unwrap();
        let out = run_in(
            dir.path(),
            &[
                "grover", "--n", "5", "--target", "3", "--eps-min", "0.07", "--csv", "run.csv",
            ],
        );
        assert!(out.status.success());
        (
            out.stdout,
            fs::read(dir.path().join("run.csv")).unwrap(),
            fs::read(dir.path().join("run.csv.manifest.json")).unwrap(),
        )
    };
    let (stdout_a, csv_a, manifest_a) = run_once();
    let (stdout_b, csv_b, manifest_b) = run_once();
    assert_eq!(stdout_a, stdout_b);
    assert_eq!(csv_a, csv_b);
    assert_eq!(manifest_a, manifest_b);
}

#[test]
fn fixture_regeneration_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen-fixture", "--kind", "gsa-state", "--n", "3", "--t", "1.0841", "--out", "s.json",
    ];
    run_in(dir.path(), &args);
    let first = fs::read(dir.path().join("s.json")).unwrap();
    run_in(dir.path(), &args);
    let second = fs::read(dir.path().join("s.json")).unwrap();
    assert_eq!(first, second);
}
