use std::process::{Command, Output};

use serde_json::Value;

fn ltconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltconj")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const ZERO: &str = r#"{"rational":"0","coeffs":{}}"#;
const A: &str = r#"{"rational":"0","coeffs":{"a":"1"}}"#;

#[test]
fn classify_spinc3_objects() {
    let rho = format!("{ZERO},{A}");
    let rho_prime = format!("{A},{A}");
    let v = json(&ltconj(&["classify", "--group", "spinc3", "--rho", &rho, "--rho-prime", &rho_prime]));
    assert_eq!(v["verdict"]["status"], "conjugate");
    assert_eq!(v["verdict"]["solution"]["n"], 1);
    let v = json(&ltconj(&["classify", "--group", "so3xs1", "--rho", &rho, "--rho-prime", &rho_prime]));
    assert_eq!(v["verdict"]["reason"], "odd-coefficient");
}

#[test]
fn all_modes() {
    let v = json(&ltconj(&["classify", "--group", "u2", "--rho", "1/4,alpha", "--rho-prime", "1/4 + 2*alpha, alpha", "--mode", "all"]));
    assert_eq!(v["verdicts"]["topological"]["status"], "conjugate");
    assert_eq!(v["verdicts"]["smooth"]["status"], "conjugate");
    assert_eq!(v["verdicts"]["algebraic"]["status"], "not-conjugate");
}

#[test]
fn validation_errors_exit_2() {
    let out = ltconj(&["classify", "--group", "u2", "--rho", "0.3", "--rho-prime", "0.3,0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("arity"));
    let out = ltconj(&["classify", "--group", "so4", "--rho", "0.3", "--rho-prime", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown group"));
    let out = ltconj(&["classify", "--group", "su2", "--rho", "[{\"rational\":", "--rho-prime", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed JSON"));
    let out = ltconj(&["verify", "--group", "su2", "--rho", "gamma", "--rho-prime", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_unknown_exits_3() {
    let args = ["classify", "--numeric", "--group", "su2", "--rho", "0.123456789123", "--rho-prime", "0.3"];
    let out = ltconj(&args);
    assert_eq!(json(&out)["verdict"]["status"], "unknown");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(ltconj(&strict).status.code(), Some(3));
}

#[test]
fn verify_is_small_and_deterministic() {
    let args = ["verify", "--group", "su2", "--rho", "0.3", "--rho-prime", "0.7", "--samples", "1000"];
    let a = ltconj(&args);
    let b = ltconj(&args);
    assert!(json(&a)["max_error"].as_f64().unwrap() < 1e-9);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn witness_descriptor() {
    let v = json(&ltconj(&["witness", "--group", "su2", "--rho", "0.3", "--rho-prime", "0.7", "--verify", "1000"]));
    assert_eq!(v["witness"]["kind"], "left-translated");
    assert!(v["max_error"].as_f64().unwrap() < 1e-9);
    let v = json(&ltconj(&["witness", "--group", "so3xs1", "--rho", "1/5,alpha", "--rho-prime", "1/5+2*alpha,alpha", "--verify", "200"]));
    assert_eq!(v["witness"]["kind"], "descended");
    assert!(v["max_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn reduce_feeds_classify() {
    let e = r#"{"group":"u2","matrix":[[[0.0,1.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#;
    let r = json(&ltconj(&["reduce", "--element", e]));
    assert!(r["defect"].as_f64().unwrap() < 1e-12);
    let rho = r["rho"].to_string();
    let v = json(&ltconj(&["classify", "--rho", &rho, "--rho-prime", "3/4,1/4"]));
    assert_eq!(v["group"], "u2");
    assert_eq!(v["verdict"]["status"], "conjugate");
}

#[test]
fn classify_elements() {
    let e = r#"{"group":"su2","quaternion":{"a":0.6,"b":0.8,"c":0.0,"d":0.0}}"#;
    let ep = r#"{"group":"su2","quaternion":{"a":0.6,"b":0.0,"c":0.0,"d":-0.8}}"#;
    let v = json(&ltconj(&["classify", "--element", e, "--element-prime", ep]));
    assert_eq!(v["verdict"]["status"], "conjugate");
}

#[test]
fn lift_and_project() {
    let v = json(&ltconj(&["lift", "--covering", "su2-so3", "--rho", "1/3"]));
    let lifts: Vec<&str> = v["lifts"].as_array().unwrap().iter().map(|l| l["angles"][0]["rational"].as_str().unwrap()).collect();
    assert_eq!(lifts, ["1/6", "2/3"]);
    let e = r#"{"group":"su2","quaternion":{"a":0.0,"b":0.0,"c":0.0,"d":1.0}}"#;
    let v = json(&ltconj(&["project", "--covering", "SU2_to_SO3", "--element", e]));
    assert_eq!(v["element"]["group"], "so3");
    assert!((v["element"]["matrix"][2][2].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn orbit_with_oracle() {
    let path = std::env::temp_dir().join(format!("ltconj-points-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let v = json(&ltconj(&["orbit", "--group", "u2", "--rho", "1/3,alpha", "--samples", "3000", "--emit-points", p]));
    assert_eq!(v["closure"]["kind"], "Circles");
    assert_eq!(v["closure"]["count"], 3);
    assert_eq!(v["components"], 3);
    let pts: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(pts.as_array().unwrap().len(), 3000);
    std::fs::remove_file(path).ok();
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ltconj-out-{}.json", std::process::id()));
    let out = ltconj(&["lift", "--covering", "u2-selfcover:3", "--rho", "0,alpha", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lifts"].as_array().unwrap().len(), 3);
    std::fs::remove_file(path).ok();
}
