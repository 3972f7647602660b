use std::path::PathBuf;
use std::process::{Command, Output};

use gaussian_discord::CovarianceMatrix;

fn gdiscord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdiscord")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gdiscord-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn family_then_report() {
    let path = scratch("tms.json");
    let out = gdiscord(&["family", "two-mode-squeezed", "--params", "0.7", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let cm = CovarianceMatrix::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cm.n_modes(), 2);

    let v = stdout_json(&gdiscord(&["report", path.to_str().unwrap()]));
    let (l, r) = (v["report"]["d_left"].as_f64().unwrap(), v["report"]["d_right"].as_f64().unwrap());
    assert!((l - r).abs() < 1e-9 && l > 0.5);
    assert_eq!(v["entangled"], true);

    let v = stdout_json(&gdiscord(&["report", path.to_str().unwrap(), "--direction", "left"]));
    assert_eq!(v["report"]["direction"], "left");
    assert!((v["report"]["discord"].as_f64().unwrap() - l).abs() < 1e-12);
}

#[test]
fn csv_family_is_read_back() {
    let path = scratch("st.csv");
    let out = gdiscord(&["family", "squeezed-thermal", "--params", "0.4,0.9", "--format", "csv", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&gdiscord(&["report", path.to_str().unwrap(), "--direction", "right"]));
    assert!(v["report"]["discord"].as_f64().unwrap() > 0.0);
}

#[test]
fn sample_is_deterministic() {
    let a = gdiscord(&["sample", "--seed", "5", "--count", "20", "--class", "separable"]);
    let b = gdiscord(&["sample", "--seed", "5", "--count", "20", "--class", "separable"]);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["states"].as_array().unwrap().len(), 20);
}

#[test]
fn verify_and_figure() {
    let v = stdout_json(&gdiscord(&["verify", "asymmetry", "-n", "50"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["n_violations"], 0);
    let out = gdiscord(&["figure", "left", "-n", "0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a,b,c,d,marginal_entropy,discord_left,bound\n");
    let path = scratch("fig.csv");
    let out = gdiscord(&["figure", "left", "-n", "30", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 31);
}

#[test]
fn eavesdrop_json() {
    let v = stdout_json(&gdiscord(&["eavesdrop", "--s", "2", "--n", "3", "--t", "0.5"]));
    assert_eq!(v["geof_a_st"]["method"], "duality");
    assert!(v["discord_ab_left"].as_f64().unwrap() > 0.0);
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(gdiscord(&["family", "eq5", "--params", "2,3.5"]).status.code(), Some(1));
    assert_eq!(gdiscord(&["family", "eq5", "--params", "2"]).status.code(), Some(1));
    assert_eq!(gdiscord(&["report", "/nonexistent/cm.json"]).status.code(), Some(1));
    assert_eq!(gdiscord(&["eavesdrop", "--s", "0.5", "--n", "2", "--t", "0.5"]).status.code(), Some(1));
    assert_eq!(gdiscord(&["bogus"]).status.code(), Some(1));
    assert_eq!(gdiscord(&["--help"]).status.code(), Some(0));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"n_modes": 2, "entries": [[1, 0], [0, 1]]}"#).unwrap();
    assert_eq!(gdiscord(&["report", bad.to_str().unwrap()]).status.code(), Some(1));
    let unphysical = scratch("unphysical.json");
    std::fs::write(
        &unphysical,
        r#"{"n_modes": 2, "entries": [[1,0,2,0],[0,1,0,2],[2,0,1,0],[0,2,0,1]]}"#,
    )
    .unwrap();
    assert_eq!(gdiscord(&["report", unphysical.to_str().unwrap()]).status.code(), Some(1));
}
