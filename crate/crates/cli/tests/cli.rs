use std::process::{Command, Output};

fn symspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symspace")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("s,"))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn info_reports_root_data() {
    let out = symspace(&["info", "A:2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["positive_roots"], 3);
    assert_eq!(v["nu_even"], 5);
    assert_eq!(v["weyl_order"], 6);
    let out = symspace(&["info", "G:2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["positive_roots"], 6);
    assert_eq!(v["weyl_order"], 12);
}

#[test]
fn bad_system_is_a_usage_error() {
    let out = symspace(&["info", "Q:9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q:9"));
    let out = symspace(&["table", "A:2", "--z", "1", "--direction", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = symspace(&["table", "A:2", "--z", "1", "--nu", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = symspace(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rank_one_table_is_positive_and_decreasing() {
    let out = symspace(&["table", "A:1", "--z", "1", "--direction", "1", "--start", "0", "--stop", "2", "--count", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with('#'));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for w in rows.windows(2) {
        assert!(w[0][1] > w[1][1]);
    }
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[2] == 0.0));
}

#[test]
fn first_row_is_the_base_point_value() {
    let table = data_rows(&stdout(&symspace(&["table", "A:2", "--z", "1", "--count", "4"])));
    let eval = symspace(&["eval", "A:2", "--z", "1", "--h", "0,0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&eval)).unwrap();
    assert_eq!(table[0][0], 0.0);
    assert_eq!(table[0][1], v["u"][0].as_f64().unwrap());
    assert_eq!(table[0][3], 0.125);
    // continuity: the next point of a fine table approaches it
    let fine = data_rows(&stdout(&symspace(&["table", "A:2", "--z", "1", "--stop", "1e-6", "--count", "2"])));
    assert!((fine[1][1] - fine[0][1]).abs() <= 1e-6 * fine[0][1].abs());
}

#[test]
fn even_rank_values_are_real() {
    let rows = data_rows(&stdout(&symspace(&["table", "A:2", "--z", "1", "--count", "7"])));
    assert!(rows.iter().all(|r| r[2].abs() < 1e-10 && r[1] < 0.0));
}

#[test]
fn csv_is_bit_stable() {
    let args = ["table", "G:2", "--z", "0.7", "--count", "9", "--direction", "1,2"];
    assert_eq!(symspace(&args).stdout, symspace(&args).stdout);
}

#[test]
fn verify_selected_suites() {
    let out = symspace(&["verify", "--only", "harmonicity"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["check_id"].as_str().unwrap().starts_with("harmonicity.")));
    for key in ["check_id", "status", "achieved_error", "tolerance", "parameters"] {
        assert!(checks[0].get(key).is_some());
    }
}

#[test]
fn verify_failures_exit_with_one() {
    let out = symspace(&["verify", "--only", "harmonicity", "--corrupt-pi-plus"]);
    assert_eq!(out.status.code(), Some(1));
    let out = symspace(&["verify", "--only", "residue", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["checks"][0]["status"], "fail");
    assert!(v["checks"][0]["achieved_error"].as_f64().unwrap() > 1e-30);
    let out = symspace(&["verify", "--only", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_loose_tolerance_passes() {
    let out = symspace(&["verify", "--only", "three_way,hecke,residue", "--systems", "A:1,A:2", "--tol", "1e-2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_default_passes() {
    let out = symspace(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn bessel_command_agrees_with_quadrature() {
    let out = symspace(&["bessel", "--alpha", "1", "--x", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let k = v["k"].as_f64().unwrap();
    assert!((k - 0.601_907_230_197_234_6).abs() < 1e-12);
    assert!((v["quadrature"].as_f64().unwrap() - k).abs() < 1e-8 * k);
}
