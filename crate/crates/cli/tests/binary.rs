use std::fs;
use std::process::{Command, Output};

use pad_sim::OUT_DIR_ENV;

fn pad_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pad-sim"))
        .args(args)
        .env_remove(OUT_DIR_ENV)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn success_writes_csv_to_stdout() {
    let out = pad_sim(&["pxn", "--n", "0", "--grid", "x=-1:1:3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n,x,density\n0,-1.0,0.2075537487102974\n0,0.0,0.5641895835477563\n0,1.0,0.2075537487102974\n"
    );
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["nonsense"][..],
        &["point-query", "--delta", "-0.5"],
        &["point-query", "--eta", "1.5"],
        &["pxn", "--grid", "x=0:1:1"],
        &["rates", "--grid", "x=0:1:5"],
        &["point-query", "--format", "xml"],
        &["point-query", "--config", "/nonexistent/pad.conf"],
    ] {
        let out = pad_sim(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn numerical_errors_exit_two() {
    let out = pad_sim(&["rates", "--p", "1", "--rates", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pad_sim(&["point-query", "--p", "1", "--w", "1", "--delta", "1e-200"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = pad_sim(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equiv-efficiency"));
}

#[test]
fn out_flag_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/pq.json");
    let out = pad_sim(&["point-query", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["p_ideal"].as_f64(), Some(0.25));

    let out = Command::new(env!("CARGO_BIN_EXE_pad-sim"))
        .args(["window-convergence", "--p", "1", "--w-max", "2"])
        .env(OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("window-convergence.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("p,w,fidelity_change\n"));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("pad.conf");
    fs::write(&conf, "# detector\np = 2\ndelta = 0.4\nformat = json\n").unwrap();
    let conf = conf.to_str().unwrap();

    let from_file = pad_sim(&["point-query", "--config", conf]);
    assert_eq!(from_file.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v["p"].as_u64(), Some(2));
    assert_eq!(v["delta"].as_f64(), Some(0.4));

    let flagged = pad_sim(&[
        "point-query",
        "--config",
        conf,
        "--delta",
        "0.2",
        "--format",
        "csv",
    ]);
    assert_eq!(flagged.status.code(), Some(0));
    let text = stdout(&flagged);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[2], "0.2");
}

#[test]
fn output_is_deterministic() {
    let args = ["density", "--p", "3", "--grid", "x=-3:3:61", "--format", "json"];
    let a = pad_sim(&args);
    let b = pad_sim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
