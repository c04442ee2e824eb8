use std::process::{Command, Output};

use ddelta::json::FromJson;
use ddelta::parse::parse_element;
use ddelta::HElement;
use serde_json::Value;

fn ddelta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddelta")).args(args).env_remove("DDELTA_CONFIG").output().unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = ddelta(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gcd_of_shift_and_z() {
    let v = json_of(&["gcd", "s-1", "z"]);
    let g = HElement::from_json(&v["element"]).unwrap();
    assert!(g.eq_up_to_unit(&parse_element("z").unwrap()));
}

#[test]
fn smith_column() {
    let v = json_of(&["smith", "[[s-1],[z]]"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["rank"], 1);
    let d0 = HElement::from_json(&v["D"]["entries"][0][0]).unwrap();
    let d1 = HElement::from_json(&v["D"]["entries"][1][0]).unwrap();
    assert!(d0.eq_up_to_unit(&parse_element("z").unwrap()));
    assert!(d1.is_zero());
    assert!(!v["steps"].as_array().unwrap().is_empty());
}

#[test]
fn residue_default_bump() {
    let v = json_of(&["residue", "s-1", "--support", "9"]);
    let value = &v["current"]["value"];
    let got = value[0].as_f64().unwrap();
    // radial bump exp(1 - 1/(1 - |ζ|²/r²)) at 0 and ±2πi
    let t = (std::f64::consts::TAU / 9.0).powi(2);
    let want = std::f64::consts::PI * (1.0 + 2.0 * (1.0 - 1.0 / (1.0 - t)).exp());
    assert!((got - want).abs() < 1e-3 * want, "{got} vs {want}");
    assert!(value[1].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| ddelta(args).status.code().unwrap();
    assert_eq!(code(&["normalize", "s +"]), 2);
    assert_eq!(code(&["normalize", "(s-1)/(s-z)"]), 3);
    assert_eq!(code(&["normalize", "(s-1)/z^2"]), 4);
    assert_eq!(code(&["gcd", "0", "0"]), 5);
    assert_eq!(code(&["simulate", "s*z + s^2"]), 10);
    assert_eq!(code(&["residue", "s-1", "--grid", "4"]), 16);
    assert_eq!(code(&["residue", "s-1", "--bump", "{\"center\": [0, 0]}"]), 15);
    assert_eq!(code(&["frobnicate"]), 16);
    assert_eq!(code(&["gcd", "s-1", "z"]), 0);
}

#[test]
fn diagnostics_on_stderr() {
    let out = ddelta(&["normalize", "(s-1)/z^2"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not entire"));
}

#[test]
fn deterministic_output() {
    for args in [&["project", "s*z + 1", "--modes", "2", "--seed", "7", "--rect=-3,3,-10,10"][..], &["bezout", "s-1", "z"][..]] {
        let a = ddelta(args);
        let b = ddelta(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn normalize_round_trips_through_json() {
    let v = json_of(&["normalize", "s^2 - 2*s + 1"]);
    let h = HElement::from_json(&v["element"]).unwrap();
    assert_eq!(h, parse_element("(s-1)^2").unwrap());
    let again = json_of(&["normalize", v["element"]["expr"].as_str().unwrap()]);
    assert_eq!(again, v);
}

#[test]
fn member_and_hefer_replay() {
    let v = json_of(&["member", "--h", "z", "--gens", "s-1;z"]);
    assert_eq!(v["member"], true);
    assert_eq!(v["verified"], true);
    let v = json_of(&["hefer", "--q", "s^2 - z", "--alpha", "2"]);
    assert_eq!(v["identity"]["holds"], true);
}

#[test]
fn simulate_csv_and_text() {
    let out = ddelta(&["simulate", "s - 1/2", "--horizon", "3", "--step", "0.5", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 3.0);
    assert!((last[1] - 0.25).abs() < 1e-12);
    let out = ddelta(&["--format", "text", "gcd", "s-1", "z"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("gcd: z"));
}

#[test]
fn config_file_is_read() {
    let dir = std::env::temp_dir().join(format!("ddelta-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"rect": [-1, 1, -1, 1], "tol": 1e-8}"#).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"grid": 3}"#).unwrap();
    let run = |p: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_ddelta")).args(["zeros", "s-1"]).env("DDELTA_CONFIG", p).output().unwrap()
    };
    let out = run(&good);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["clusters"].as_array().unwrap().len(), 1);
    assert_eq!(run(&bad).status.code(), Some(15));
}
