//! End-to-end tests of the binary: generation, norm evaluation, the
//! verification entry point, config handling and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_extrapkit"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("extrapkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_is_deterministic_and_norm_reads_it() {
    let f1 = tmp("f1.json");
    let f2 = tmp("f2.json");
    for f in [&f1, &f2] {
        let out = bin()
            .args(["gen", "--family", "random", "--seed", "11", "--pieces", "9", "--out"])
            .arg(f)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&f1).unwrap(), std::fs::read(&f2).unwrap());

    let out = bin().args(["norm", "--space", "lp", "--p", "1"]).arg("--input").arg(&f1).output().unwrap();
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!(v > 0.0 && v.is_finite());
}

#[test]
fn norm_all_emits_csv() {
    let f = tmp("fa.json");
    bin()
        .args(["gen", "--family", "indicator", "--a", "0.5", "--out"])
        .arg(&f)
        .output()
        .unwrap();
    let out = bin().args(["norm", "--all", "--input"]).arg(&f).output().unwrap();
    let text = stdout(&out);
    assert!(text.starts_with("space,p,alpha,value"), "{text}");
    assert!(text.lines().count() >= 10);
}

#[test]
fn kfun_curve_and_values() {
    let f = tmp("fk.json");
    bin().args(["gen", "--family", "indicator", "--a", "1.0", "--out"]).arg(&f).output().unwrap();
    let out = bin().args(["kfun", "--t", "0.25", "--input"]).arg(&f).output().unwrap();
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.25).abs() < 1e-12);
    let out = bin().args(["kfun", "--curve", "--input"]).arg(&f).output().unwrap();
    assert!(stdout(&out).starts_with("t,K"));
}

#[test]
fn verify_list_and_suite_exit_codes() {
    let out = bin().args(["verify", "--list"]).output().unwrap();
    assert!(out.status.success());
    let listed = stdout(&out);
    assert_eq!(listed.lines().count(), 10);
    assert!(listed.contains("envelope") && listed.contains("dilation"));

    // a fully green suite exits 0 and prints one line per check
    let out = bin().args(["verify", "dilation"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
    assert!(stdout(&out).lines().all(|l| l.starts_with("[PASS]")));

    // the envelope suite carries the known-red literal check: exit 1
    let out = bin().args(["verify", "envelope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // unknown suite: usage error
    let out = bin().args(["verify", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn verify_writes_reports() {
    let dir = tmp("reports");
    let out = bin().args(["verify", "fubini", "--report-dir"]).arg(&dir).output().unwrap();
    assert!(out.status.success());
    let json = std::fs::read_to_string(dir.join("report.json")).unwrap();
    assert!(json.contains("\"suite\": \"fubini\""));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("suite,check,metric,value,bound,passed"));
}

#[test]
fn malformed_config_reports_line() {
    let cfg = tmp("bad.toml");
    std::fs::write(&cfg, "[grids]\npoints_per_decade = \"lots\"\n").unwrap();
    let out = bin().args(["--config"]).arg(&cfg).args(["verify", "--list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "config errors should carry a position: {err}");
}

#[test]
fn config_env_var_is_honored() {
    let cfg = tmp("tiny.toml");
    std::fs::write(&cfg, "[suite]\nn_random = 3\nkj_grid = 4\n").unwrap();
    let dir = tmp("env-reports");
    let out = bin()
        .env("EXTRAPKIT_CONFIG", &cfg)
        .args(["verify", "kj", "--report-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert!(csv.contains("kj,3,suite_size,3,"), "{csv}");
}

#[test]
fn envelope_csv_shape() {
    let out = bin().args(["envelope", "--weight", "const"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,tau,w"));
    assert!(text.contains("# atom at"), "the constant weight has a unit atom: {text}");
}

#[test]
fn schatten_pipeline() {
    let m = tmp("diag.json");
    std::fs::write(&m, "[3, 1, 2]").unwrap();
    let out = bin().args(["schatten", "snumbers", "--input"]).arg(&m).output().unwrap();
    let vals: Vec<f64> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(vals, vec![3.0, 2.0, 1.0]);
    let out = bin().args(["schatten", "kfun", "--t", "2", "--input"]).arg(&m).output().unwrap();
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 5.0).abs() < 1e-12);
}

#[test]
fn op_yano_check_hardy() {
    let f = tmp("fy.json");
    bin().args(["gen", "--family", "random", "--seed", "3", "--pieces", "10", "--out"])
        .arg(&f)
        .output()
        .unwrap();
    let out = bin().args(["op", "yano-check", "--op", "hardy", "--input"]).arg(&f).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["pass"].as_bool().unwrap());
    assert!(v["c_averaged"].as_f64().unwrap() <= 4.0);
}
