use std::fs;
use std::process::{Command, Output};

fn qaffine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaffine")).args(args).env_remove("QAFFINE_CACHE_DIR").output().expect("binary runs")
}

#[test]
fn rmatrix_suite_exact() {
    let o = qaffine(&["run", "--suite", "rmatrix", "--mode", "exact", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = doc["suites"][0]["checks"].as_array().unwrap();
    for name in ["yang-baxter: R12(z) R13(zw) R23(w)", "initial condition: R(1) = P"] {
        let c = checks.iter().find(|c| c["description"].as_str().unwrap().starts_with(name)).unwrap();
        assert_eq!(c["status"], "PASS");
    }
    assert_eq!(doc["schema_version"], 1);
    assert!(doc.get("total_wall_time_s").is_none());
}

#[test]
fn numeric_only_suite_rejects_exact_mode() {
    let o = qaffine(&["run", "--suite", "invertibility", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("requires --mode numeric"));
}

#[test]
fn invalid_config_is_usage_error() {
    assert_eq!(qaffine(&["run", "--max-degree", "3"]).status.code(), Some(2));
    assert_eq!(qaffine(&["run", "--q", "2"]).status.code(), Some(2));
    assert_eq!(qaffine(&["run", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(qaffine(&["run", "--max-degree", "x"]).status.code(), Some(2));
}

#[test]
fn cache_is_transparent_and_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["run", "module-structure", "--max-degree", "5", "--format", "json", "--cache-dir", cache];
    let cold = qaffine(&args);
    assert_eq!(cold.status.code(), Some(0));
    let warm = Command::new(env!("CARGO_BIN_EXE_qaffine"))
        .args(&args[..6])
        .env("QAFFINE_CACHE_DIR", cache)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&warm.stderr).contains(" 0 misses"));
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = qaffine(&args[..6]);
    assert_eq!(cold.stdout, uncached.stdout);
    let version_dir = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let entry = fs::read_dir(&version_dir).unwrap().next().unwrap().unwrap().path();
    fs::write(&entry, b"\x00garbage").unwrap();
    let repaired = qaffine(&args);
    assert_eq!(repaired.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&repaired.stderr).contains("warning: discarding corrupt cache entry"));
    assert_eq!(cold.stdout, repaired.stdout);
}

#[test]
fn out_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = qaffine(&["run", "rmatrix", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("== rmatrix"));
    assert!(text.contains("summary:"));
}

#[test]
fn seed_changes_spot_checks_only() {
    let a = qaffine(&["run", "rmatrix", "--format", "json", "--seed", "1"]);
    let b = qaffine(&["run", "rmatrix", "--format", "json", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
    let spots = |o: &Output| -> usize {
        let d: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        d["suites"][0]["checks"].as_array().unwrap().iter().filter(|c| c["description"].as_str().unwrap().starts_with("yang-baxter at q")).count()
    };
    assert_eq!(spots(&a), 3);
}

#[test]
fn rmatrix_subcommand() {
    let o = qaffine(&["rmatrix", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 19);
    let o = qaffine(&["rmatrix", "--z", "1", "--q", "0.3", "--format", "json"]);
    let m: Vec<Vec<f64>> = serde_json::from_slice(&o.stdout).unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let p = if i == (j % 3) * 3 + j / 3 { 1.0 } else { 0.0 };
            assert!((x - p).abs() < 1e-12, "R(1) entry ({i}, {j}) = {x}");
        }
    }
}

#[test]
fn failure_exit_code() {
    let o = qaffine(&["run", "invertibility", "--q", "0.9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let d: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(d["summary"]["fail"].as_u64().unwrap() > 0);
}
