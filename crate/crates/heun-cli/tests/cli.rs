//! End-to-end tests of the installed binary: canonical outputs, JSON modes,
//! exit codes and thread-count determinism.

use std::process::{Command, Output};

fn heun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun"))
        .args(args)
        .env_remove("HEUN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn spectral_poly_prints_the_canonical_level_two_polynomial() {
    let out = heun(&["spectral-poly", "--l", "2"]);
    assert_eq!(stdout_of(&out), "1*λ^2 + -1*λ^1 + -1*v^1\n");
}

#[test]
fn rotation_number_matches_the_closed_form() {
    let out = heun(&["rotnum", "--B", "2", "--A", "0", "--omega", "1"]);
    let rho: f64 = stdout_of(&out).trim().parse().unwrap();
    assert!((rho - 3f64.sqrt()).abs() < 1e-6, "rho = {rho}");
}

#[test]
fn genus_json_reports_eighty_one_at_level_twenty() {
    let out = heun(&["genus", "--l", "20", "--emit", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["conjectured_genus"], 81);
    assert_eq!(v["bidegree"][0], 10);
    assert_eq!(v["bidegree"][1], 10);
}

#[test]
fn unknown_flags_exit_with_the_usage_code() {
    let out = heun(&["newton-cert", "--l", "3", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nonpositive_tolerances_exit_with_the_usage_code() {
    let out = heun(&["rotnum", "--B", "2", "--A", "0", "--omega", "1", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undersized_grids_exit_with_the_usage_code() {
    let out = heun(&[
        "portrait", "--omega", "2", "--b-max", "4", "--a-max", "8", "--nx", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    // At this frequency the level-2 line has a single positive crossing, so
    // the count check reports failure (not an error).
    let out = heun(&["crosscheck", "--l", "2", "--count-omega", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "FAIL\n");
}

#[test]
fn count_check_passes_at_the_reference_frequency() {
    let out = heun(&["crosscheck", "--l", "2", "--count-omega", "0.3"]);
    assert_eq!(stdout_of(&out), "PASS\n");
}

#[test]
fn crosscheck_report_json_carries_per_point_records() {
    let out = heun(&["crosscheck", "--l", "2", "--mu", "1.5", "--emit", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["l"], 2);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
}

#[test]
fn crosscheck_requires_exactly_one_mode() {
    let none = heun(&["crosscheck", "--l", "2"]);
    assert_eq!(none.status.code(), Some(2));
    let two = heun(&["crosscheck", "--l", "2", "--mu", "1", "--count-omega", "0.3"]);
    assert_eq!(two.status.code(), Some(2));
}

#[test]
fn boundary_hits_the_axis_growth_point() {
    let out = heun(&["boundary", "--s", "1", "--sign", "+", "--A", "0", "--omega", "1"]);
    let text = stdout_of(&out);
    let row = text.lines().nth(1).expect("one data row");
    let b: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((b - 2f64.sqrt()).abs() < 1e-6, "B = {b}");
}

#[test]
fn eigen_text_lists_the_golden_pair() {
    let out = heun(&["eigen", "--l", "2", "--mu", "1"]);
    let text = stdout_of(&out);
    let mut rows = text.lines().skip(1);
    let lo: f64 = rows.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let hi: f64 = rows.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((lo - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert!((hi - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
}

#[test]
fn xi_prints_both_signs_by_default_and_one_on_request() {
    let both = stdout_of(&heun(&["xi", "--l", "1"]));
    assert_eq!(both, "+: 1*μ^1 + 1*r^1\n-: 1*μ^1 + -1*r^1\n");
    let minus = stdout_of(&heun(&["xi", "--l", "1", "--sign", "-"]));
    assert_eq!(minus, "1*μ^1 + -1*r^1\n");
}

#[test]
fn certificates_pass_on_reference_levels() {
    assert!(heun(&["newton-cert", "--l", "5"]).status.success());
    assert!(heun(&["smooth-cert", "--l", "4"]).status.success());
    assert!(heun(&["factor-check", "--l", "6"]).status.success());
}

#[test]
fn constrictions_locate_the_documented_axis_point() {
    let out = heun(&[
        "constrictions", "--s", "1", "--omega", "2", "--a-max", "10",
    ]);
    let text = stdout_of(&out);
    let row = text.lines().nth(1).expect("one hit");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "*");
    let a: f64 = fields[2].parse().unwrap();
    assert!((a - 7.773386982798665).abs() < 1e-6, "A = {a}");
}

#[test]
fn portrait_bytes_are_identical_across_thread_counts() {
    let args = [
        "portrait", "--omega", "2", "--b-max", "4", "--a-max", "8", "--nx", "16", "--ny", "12",
        "--emit", "svg",
    ];
    let one = heun(&[&args[..], &["--threads", "1"]].concat());
    let two = heun(&[&args[..], &["--threads", "2"]].concat());
    let one_bytes = stdout_of(&one);
    assert_eq!(one_bytes, stdout_of(&two));
    assert!(one_bytes.starts_with("<svg "));
    assert!(one_bytes.ends_with("</svg>\n"));
}

#[test]
fn emit_svg_is_rejected_outside_portrait() {
    let out = heun(&["eigen", "--l", "2", "--mu", "1", "--emit", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let path = std::env::temp_dir().join("heun-cli-test-intersections.csv");
    let direct = stdout_of(&heun(&["intersections", "--l", "2", "--mu", "1.5"]));
    let filed = heun(&[
        "intersections", "--l", "2", "--mu", "1.5", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    assert!(filed.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(direct, written);
    assert!(direct.starts_with("j,mu,lambda_j,R_j,omega_j,B,A,s\n"));
}
