use std::path::Path;
use std::process::{Command, Output};

fn symqm(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symqm"));
    cmd.args(args).env_remove("SYMQM_CACHE");
    if let Some(dir) = cache {
        cmd.env("SYMQM_CACHE", dir);
    }
    cmd.output().expect("run symqm")
}

#[test]
fn exit_codes() {
    assert_eq!(symqm(&["basis", "--n", "3", "--ncut", "6"], None).status.code(), Some(0));
    let bad = symqm(&["basis", "--n", "1", "--ncut", "6"], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("at least 2"));
    assert_eq!(symqm(&["basis", "--n", "3"], None).status.code(), Some(2));
    assert_eq!(symqm(&["spectrum", "--n", "3", "--ncut", "4", "--format", "xml"], None).status.code(), Some(2));
    assert_eq!(symqm(&["spectrum", "--n", "3", "--ncut", "4", "--sector", "nF=2"], None).status.code(), Some(2));
    // a comparison tolerance nothing can meet
    let strict = symqm(&["spectrum", "--n", "3", "--ncut", "10", "--tol", "1e-300"], None);
    assert_eq!(strict.status.code(), Some(1));
    assert_eq!(symqm(&["verify", "--suite", "mixing"], None).status.code(), Some(1));
    assert_eq!(symqm(&["verify", "--suite", "overlap"], None).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["spectrum", "--n", "4", "--ncut", "8"][..],
        &["gram", "--n", "3", "--ncut", "6"][..],
        &["state", "--n", "4", "--ncut", "9", "--family", "1,0", "--root", "1"][..],
        &["families", "--n", "5", "--ncut", "7", "--format", "csv"][..],
    ] {
        let a = symqm(args, None);
        let b = symqm(args, None);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--n", "3", "--ncut", "12"];
    let plain = symqm(&args, None);
    let cold = symqm(&args, Some(dir.path()));
    assert!(dir.path().join("symqm-n3-ncut12-v1.json").exists());
    let warm = symqm(&args, Some(dir.path()));
    assert_eq!(cold.stdout, plain.stdout);
    assert_eq!(warm.stdout, cold.stdout);

    // the environment variable wins over the flag
    let other = tempfile::tempdir().unwrap();
    let flag = other.path().to_str().unwrap();
    let mut with_flag = args.to_vec();
    with_flag.extend(["--cache-dir", flag]);
    assert_eq!(symqm(&with_flag, Some(dir.path())).stdout, cold.stdout);
    assert!(std::fs::read_dir(other.path()).unwrap().next().is_none());
    symqm(&with_flag, None);
    assert!(other.path().join("symqm-n3-ncut12-v1.json").exists());
}

#[test]
fn exports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("basis.csv");
    let run = symqm(&["basis", "--n", "3", "--ncut", "6", "--format", "csv", "--out", out.to_str().unwrap()], None);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 8);

    let state = symqm(&["state", "--n", "3", "--ncut", "10", "--dress", "3"], None);
    let v: serde_json::Value = serde_json::from_slice(&state.stdout).unwrap();
    assert_eq!(v["nF"], 3);
    assert_eq!(v["family"], serde_json::json!([0]));
    assert!(v["residual"].as_f64().unwrap() < 1e-10);

    let sp = symqm(&["spectrum", "--n", "3", "--ncut", "2"], None);
    let v: serde_json::Value = serde_json::from_slice(&sp.stdout).unwrap();
    assert_eq!(v["comparison"]["matched"], true);
    assert_eq!(v["closed"].as_array().unwrap().len(), 2);
}

#[test]
fn brick_table_sector() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    std::fs::write(&table, r#"{"N": 3, "nF": 2, "bricks": [{"alpha": 1, "nB": 1}]}"#).unwrap();
    let t = table.to_str().unwrap();
    let closed = symqm(
        &["spectrum", "--n", "3", "--ncut", "5", "--sector", "nF=2", "--brick-table", t, "--method", "closed"],
        None,
    );
    assert_eq!(closed.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&closed.stdout).unwrap();
    assert_eq!(v["nF"], 2);
    assert_eq!(v["closed"][0]["family"]["nb"], 1);
    // no explicit fermionic states behind a table brick
    let both = symqm(&["spectrum", "--n", "3", "--ncut", "5", "--sector", "nF=2", "--brick-table", t], None);
    assert_eq!(both.status.code(), Some(2));
}
