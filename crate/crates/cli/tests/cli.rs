use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trdmoea"))
}

#[test]
fn run_report_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs");
    let status = bin()
        .args([
            "run",
            "--problem",
            "DMOP2",
            "--algo",
            "nsga2",
            "--config",
            "C1",
            "--seeds",
            "1..2",
        ])
        .args([
            "--population",
            "20",
            "--generations",
            "2",
            "--changes",
            "4",
            "--out",
        ])
        .arg(&runs)
        .status()
        .unwrap();
    assert!(status.success());
    let s1 = runs.join("run_DMOP2_nsga2_C1_s1.json");
    assert!(s1.exists());
    assert!(runs.join("run_DMOP2_nsga2_C1_s2.json").exists());
    let record: serde_json::Value = serde_json::from_str(&fs::read_to_string(&s1).unwrap()).unwrap();
    assert_eq!(record["payload"]["config"]["population"], 20);
    assert_eq!(record["payload"]["changes"].as_array().unwrap().len(), 4);

    let out = bin()
        .args(["report", "--format", "csv", "--in"])
        .arg(&runs)
        .output()
        .unwrap();
    assert!(out.status.success());
    let migd = fs::read_to_string(runs.join("migd.csv")).unwrap();
    assert_eq!(migd.lines().count(), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("gap"));

    let snaps = dir.path().join("snaps");
    let status = bin()
        .args(["snapshots", "--run"])
        .arg(&s1)
        .arg("--out")
        .arg(&snaps)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read_dir(&snaps).unwrap().count(), 4);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"problem": "FDA4", "algorithm": "nsga2", "config": "C2", "population": 30}"#,
    )
    .unwrap();
    let status = bin()
        .args(["run", "--config-file"])
        .arg(&cfg)
        .args(["--generations", "1", "--changes", "2", "--seeds", "3", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("run_FDA4_nsga2_C2_s3.json")).unwrap();
    let record: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(record["payload"]["config"]["population"], 30);
    assert_eq!(record["payload"]["config"]["generations"], 1);
}

#[test]
fn bad_input_fails() {
    let out = bin()
        .args(["run", "--problem", "FDA4", "--algo", "nsga2", "--config", "C9"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = bin()
        .args([
            "run",
            "--problem",
            "FDA4",
            "--algo",
            "nsga2",
            "--config",
            "C1",
            "--changes",
            "50",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("changes"));
}

#[test]
fn timed_out_run_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "run",
            "--problem",
            "FDA4",
            "--algo",
            "tr-nsga2",
            "--config",
            "C1",
            "--seeds",
            "1",
        ])
        .args([
            "--population",
            "40",
            "--generations",
            "5",
            "--timeout",
            "0.000001",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("run_FDA4_tr-nsga2_C1_s1.json")).unwrap();
    let record: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(record["payload"]["complete"], false);
}
