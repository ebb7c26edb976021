use std::process::{Command, Output};

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai-kit"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(kit(&["--preset", "U+<2>", "lattice"]).status.code(), Some(0));
    let bad = kit(&["--lattice", "[[0,1],[2,0]]", "lattice"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("NonSymmetric"));
    assert_eq!(kit(&["--preset", "no-such-lattice", "lattice"]).status.code(), Some(2));
    assert_eq!(kit(&["--preset", "U", "lattice", "--tol", "-1"]).status.code(), Some(2));
    let strict = kit(&[
        "--preset",
        "mukai_rank1(1)",
        "geodesic",
        "--steps",
        "500",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let out = dir.path().join("cusps.json");
    std::fs::write(&job, r#"{"preset": "U+<12>", "height": 12}"#).unwrap();
    let run = kit(&[
        "--config",
        job.to_str().unwrap(),
        "cusps",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["tool"], "mukai-kit");
    assert_eq!(v["config"]["height"], 12);
    assert_eq!(v["result"]["count"], 2);
    assert_eq!(v["result"]["fricke_oracle"], 2);
    // the output path does not enter the hash
    let stdout = kit(&["--config", job.to_str().unwrap(), "cusps"]);
    let w: serde_json::Value = serde_json::from_slice(&stdout.stdout).unwrap();
    assert_eq!(v["config_hash"], w["config_hash"]);
}

#[test]
fn csv_carries_a_banner() {
    let run = kit(&["--preset", "mukai_rank1(3)", "roots", "--format", "csv"]);
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("# mukai-kit "));
    assert!(text.lines().any(|l| l == "1,0,1"));
    let svg = kit(&["--preset", "U", "lattice", "--format", "svg"]);
    assert_eq!(svg.status.code(), Some(2));
}
