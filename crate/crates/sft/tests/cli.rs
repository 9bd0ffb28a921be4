//! End-to-end tests of the `sft` binary: exit codes, file determinism, and
//! the generate/simulate/localize round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sft(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sft"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_p5(dir: &Path) {
    fs::write(dir.join("p5.tsv"), "0\t1\t1\n1\t2\t1\n2\t3\t1\n3\t4\t1\n").unwrap();
}

#[test]
fn generate_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = sft(
        dir.path(),
        &[
            "generate",
            "--graph",
            "er:60:0.1:0.2:0.5",
            "--seed",
            "7",
            "--out",
            "a.tsv",
        ],
    );
    assert!(a.status.success(), "{a:?}");
    let b = sft(
        dir.path(),
        &[
            "generate",
            "--graph",
            "er:60:0.1:0.2:0.5",
            "--seed",
            "7",
            "--out",
            "b.tsv",
        ],
    );
    assert!(b.status.success());
    assert_eq!(
        fs::read(dir.path().join("a.tsv")).unwrap(),
        fs::read(dir.path().join("b.tsv")).unwrap()
    );
    let c = sft(
        dir.path(),
        &[
            "generate",
            "--graph",
            "er:60:0.1:0.2:0.5",
            "--seed",
            "8",
            "--out",
            "c.tsv",
        ],
    );
    assert!(c.status.success());
    assert_ne!(
        fs::read(dir.path().join("a.tsv")).unwrap(),
        fs::read(dir.path().join("c.tsv")).unwrap()
    );
}

#[test]
fn simulate_same_seed_same_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    write_p5(dir.path());
    fs::write(dir.path().join("sim.json"), r#"{"source": 1, "rounds": 3}"#).unwrap();
    for out in ["s1.json", "s2.json"] {
        let r = sft(
            dir.path(),
            &[
                "simulate", "--graph", "p5.tsv", "--config", "sim.json", "--seed", "7", "--out",
                out,
            ],
        );
        assert!(r.status.success(), "{r:?}");
    }
    assert_eq!(
        fs::read(dir.path().join("s1.json")).unwrap(),
        fs::read(dir.path().join("s2.json")).unwrap()
    );
}

#[test]
fn localize_prints_path_center() {
    let dir = tempfile::tempdir().unwrap();
    write_p5(dir.path());
    fs::write(dir.path().join("sim.json"), r#"{"source": 0, "rounds": 4}"#).unwrap();
    let sim = sft(
        dir.path(),
        &[
            "simulate",
            "--graph",
            "p5.tsv",
            "--config",
            "sim.json",
            "--seed",
            "1",
            "--out",
            "snap.json",
        ],
    );
    assert!(sim.status.success());
    for algo in ["sft-bnd", "sft-wbnd", "ecce"] {
        let loc = sft(
            dir.path(),
            &[
                "localize",
                "--graph",
                "p5.tsv",
                "--snapshot",
                "snap.json",
                "--algo",
                algo,
            ],
        );
        assert!(loc.status.success(), "{loc:?}");
        let text = stdout(&loc);
        assert_eq!(text.lines().next(), Some("2"), "algo {algo}: {text}");
    }
}

#[test]
fn missing_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = sft(dir.path(), &["experiment", "--config", "missing.json"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let out = sft(dir.path(), &["bench", "--config", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_p5(dir.path());
    let out = sft(
        dir.path(),
        &[
            "localize",
            "--graph",
            "p5.tsv",
            "--snapshot",
            "s.json",
            "--algo",
            "nope",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = sft(
        dir.path(),
        &[
            "generate",
            "--graph",
            "er:abc:0.1",
            "--seed",
            "1",
            "--out",
            "x.tsv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_inputs_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.tsv"), "0\t0\t0.5\n").unwrap();
    fs::write(dir.path().join("sim.json"), r#"{"rounds": 2}"#).unwrap();
    let out = sft(
        dir.path(),
        &[
            "simulate", "--graph", "bad.tsv", "--config", "sim.json", "--seed", "1", "--out",
            "s.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    // Valid graph, inconsistent snapshot (disconnected infected set).
    write_p5(dir.path());
    fs::write(
        dir.path().join("snap.json"),
        r#"{"n": 5, "infected": [0, 4]}"#,
    )
    .unwrap();
    let out = sft(
        dir.path(),
        &[
            "localize",
            "--graph",
            "p5.tsv",
            "--snapshot",
            "snap.json",
            "--algo",
            "sft-bnd",
        ],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn experiment_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write_p5(dir.path());
    let cfg = serde_json::json!({
        "graph": {"type": "file", "path": dir.path().join("p5.tsv")},
        "sizes": [5],
        "samples": 3,
        "algorithms": ["sft-wbnd", "sft-bnd", "ecce", "rum", "netsleuth"],
        "master_seed": 2,
        "window": {"lo": 5, "hi": 5},
        "measure_time": false
    });
    fs::write(dir.path().join("exp.json"), cfg.to_string()).unwrap();
    let out = sft(
        dir.path(),
        &[
            "experiment",
            "--config",
            "exp.json",
            "--out",
            "records.csv",
            "--workers",
            "2",
            "--gamma",
            "20,100",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let records = fs::read_to_string(dir.path().join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 1 + 3 * 5, "{records}");
    assert!(records
        .starts_with("algorithm,trial,source,estimator,rank,distance,infected,obs_time,seconds\n"));
    let summary = fs::read_to_string(dir.path().join("records.summary.csv")).unwrap();
    assert!(summary.contains("gamma_20"), "{summary}");
}

#[test]
fn experiment_cli_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "graph": {"type": "er", "n": 150, "p": 0.03},
        "weights": {"lo": 0.2, "hi": 0.5},
        "sizes": [15],
        "samples": 5,
        "algorithms": ["sft-bnd", "rum"],
        "master_seed": 9,
        "measure_time": false
    });
    fs::write(dir.path().join("exp.json"), cfg.to_string()).unwrap();
    for (out, workers) in [("r1.csv", "1"), ("r2.csv", "4")] {
        let r = sft(
            dir.path(),
            &[
                "experiment",
                "--config",
                "exp.json",
                "--out",
                out,
                "--workers",
                workers,
            ],
        );
        assert!(r.status.success(), "{r:?}");
    }
    assert_eq!(
        fs::read(dir.path().join("r1.csv")).unwrap(),
        fs::read(dir.path().join("r2.csv")).unwrap()
    );
}
