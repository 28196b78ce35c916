use serde_json::Value;
use std::process::{Command, Output};

fn frobgl(args: &[&str]) -> Output {
    frobgl_env(args, &[])
}

fn frobgl_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frobgl"));
    cmd.args(args).env_remove("FROBGL_P").env_remove("FROBGL_Q").env_remove("FROBGL_FORMAT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = frobgl(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn frobenius_powers_are_prime() {
    for p in ["2", "3", "5"] {
        let o = frobgl(&["--p", p, "ideal", "m[p^2]", "prime"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("GL-prime: true"));
    }
    let o = frobgl(&["ideal", "m^3", "prime"]);
    assert!(stdout(&o).contains("GL-prime: false"));
}

#[test]
fn radical_of_a_power_is_the_maximal_ideal() {
    assert_eq!(json(&["ideal", "m^2", "radical"])["radical"], "m");
}

#[test]
fn monomial_membership() {
    let o = frobgl(&["ideal", "m[p^1]", "member", "x1^2"]);
    assert!(stdout(&o).contains("true"));
    let o = frobgl(&["ideal", "m[p^1]", "member", "x1*x2"]);
    assert!(stdout(&o).contains("false"));
}

#[test]
fn koszul_betti_table_of_a_truncation() {
    let v = json(&["--n", "4", "--jmax", "8", "betti", "S/m^3"]);
    let t = &v[0];
    assert_eq!(t["n"], 4);
    assert_eq!(t["t"], serde_json::json!([0, 3, 4, 5, 6]));
    assert_eq!(t["slope"], "3");
}

#[test]
fn text_and_json_agree() {
    let text = stdout(&frobgl(&["--n", "3", "betti", "S/m^2"]));
    let v = json(&["--n", "3", "betti", "S/m^2"]);
    let t: Vec<i64> = v[0]["t"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert!(text.contains(&format!("t: {t:?}")), "{text}");
    assert!(text.contains(&format!("slope: {}", v[0]["slope"].as_str().unwrap())));
}

#[test]
fn free_module_is_flat_immediately() {
    let o = frobgl(&["--q", "2", "shift-experiment", "free:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("flat at l = 0"));
}

#[test]
fn residue_field_shifts_to_zero() {
    let v = json(&["--q", "2", "shift-experiment", "k"]);
    assert_eq!(v["flat_step"], 1);
    let last = v["steps"].as_array().unwrap().last().unwrap();
    assert_eq!(last["zero"], true);
}

#[test]
fn inconclusive_run_exits_5() {
    let o = frobgl(&["--q", "2", "--lmax", "0", "shift-experiment", "k"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn parse_error_exits_2() {
    let o = frobgl(&["ideal", "m[", "canon"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(frobgl(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn bad_prime_exits_3() {
    assert_eq!(frobgl(&["--p", "4", "ideal", "m", "canon"]).status.code(), Some(3));
    assert_eq!(frobgl(&["shift-experiment", "k"]).status.code(), Some(3));
}

#[test]
fn memory_limit_exits_6() {
    let o = frobgl(&["--limit-mem", "64", "--n", "6", "betti", "S/m^3"]);
    assert_eq!(o.status.code(), Some(6));
    assert!(o.stdout.is_empty());
}

#[test]
fn empty_suite_passes() {
    let o = frobgl(&["verify", "empty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 passed, 0 failed"));
}

#[test]
fn verify_reports_json() {
    let v = json(&["verify", "spectrum"]);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 30);
}

#[test]
fn environment_overrides_and_flags_win() {
    let o = frobgl_env(&["ideal", "m[p^1]", "canon"], &[("FROBGL_P", "3")]);
    assert!(stdout(&o).contains("x^[3]"));
    let o = frobgl_env(&["--p", "2", "ideal", "m[p^1]", "canon"], &[("FROBGL_P", "3")]);
    assert!(stdout(&o).contains("x^[2]"));
}

#[test]
fn runs_are_reproducible() {
    let args = ["--format", "json", "--seed", "7", "verify", "oracles"];
    let a = frobgl(&args);
    let b = frobgl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_has_a_header() {
    let o = frobgl(&["--format", "csv", "--n", "3", "betti", "S/m^2"]);
    assert!(stdout(&o).starts_with("n,i,j,dim,stable\n"));
}
