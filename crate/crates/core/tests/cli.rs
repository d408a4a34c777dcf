use std::process::{Command, Output};

fn kspecial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kspecial"))
        .args(args)
        .env_remove("KSPECIAL_PROFILE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gamma_csv() {
    let out = kspecial(&["eval", "gamma-k", "--k", "2", "--x", "1,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "function,k,x,value,err_estimate,method");
    assert!(
        lines[1].starts_with("gamma_k,2,1,1.2533141373155008,"),
        "{}",
        lines[1]
    );
    let row: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(&row[..3], ["gamma_k", "2", "2"]);
    assert!((row[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(row[5], "scaling");
}

#[test]
fn exact_pochhammer() {
    let out = kspecial(&[
        "eval",
        "pochhammer",
        "--x",
        "1/2",
        "--n",
        "3",
        "--k",
        "1/3",
        "--exact",
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).lines().nth(1).unwrap().contains(",35/72,"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn json_output_parses() {
    let out = kspecial(&[
        "eval", "beta-k", "--k", "1", "--x", "2", "--y", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let records: Vec<kspecial::cli::OutputRecord> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records.len(), 1);
    let v: f64 = records[0].value.parse().unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-14);
}

#[test]
fn negative_grid_values() {
    let out = kspecial(&[
        "eval",
        "hyper",
        "--a",
        "2",
        "--ka",
        "2",
        "--x",
        "-0.4:0.4:3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn domain_errors_exit_2() {
    for args in [
        &["eval", "zeta-k", "--k", "1", "--x", "1", "--s", "1"][..],
        &[
            "eval", "gamma-k", "--k", "1", "--x", "-2", "--method", "limit",
        ],
        &["eval", "hyper", "--a", "1", "--ka", "1", "--x", "2"],
        &["eval", "gamma-k", "--k", "1", "--x", "1", "--rel-tol", "-1"],
    ] {
        let out = kspecial(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn profile_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kspecial"))
        .args(["eval", "gamma-k", "--k", "1", "--x", "1"])
        .env("KSPECIAL_PROFILE", "no-such-profile")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite() {
    let out = kspecial(&["verify", "forests"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn forests_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forests.txt");
    let out = kspecial(&[
        "forests",
        "--a",
        "1",
        "--n",
        "2",
        "--k",
        "1",
        "--export",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains('2'));
    let text = std::fs::read_to_string(&path).unwrap();
    let blocks: Vec<&str> = text.trim_end().split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    for block in blocks {
        assert!(block.starts_with("root 1\n"));
        assert!(block.ends_with("tails=3"));
    }
}

#[test]
fn forests_export_over_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let out = kspecial(&[
        "forests",
        "--a",
        "2",
        "--n",
        "6",
        "--k",
        "2",
        "--cap",
        "10",
        "--export",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("46080"));
    assert!(!path.exists());
}
