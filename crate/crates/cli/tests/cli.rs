use std::process::{Command, Output};

use serde_json::Value;

const PHO: &str = "p=0,q=1;a=;b=1.5";

fn hypercs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercs")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hypercs(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().expect("number"))
}

#[test]
fn state_canonical_vacuum_amplitude() {
    let v = json(&["state", "--params", "p=0,q=0;a=;b=", "--kind", "bg", "--z", "1+0i"]);
    assert!((f(&v["coeffs"][0]["re"]) - (-0.5f64).exp()).abs() < 1e-15);
    assert_eq!(v["kind"], "bg");
    assert!(f(&v["norm_residual"]) <= f(&v["tail_bound"]) + 1e-14);
}

#[test]
fn state_at_origin_is_vacuum() {
    let v = json(&["state", "--z", "0+0i"]);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 1);
    assert_eq!(f(&coeffs[0]["re"]), 1.0);
}

#[test]
fn state_outside_radius_exits_two() {
    let out = hypercs(&["state", "--params", "p=1,q=0;a=2;b=", "--kind", "bg", "--z", "1.5+0i"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["state", "--z", "1+x"][..],
        &["state", "--z", "1", "--tol", "0.5"],
        &["state", "--z", "1", "--trunc", "many"],
        &["state", "--z", "1", "--params", "p=1,q=0;a=;b="],
        &["verify", "--suite", "everything"],
        &["verify", "--suite", "all", "--params", "p=0,q=1;a=;b=-1"],
        &["moments", "--l-max", "31"],
        &["frobnicate"],
    ] {
        assert_eq!(hypercs(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn fixed_truncation_sets_length() {
    let v = json(&["state", "--z", "0.5-0.25i", "--trunc", "7"]);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 8);
}

#[test]
fn json_numbers_carry_seventeen_digits() {
    let out = hypercs(&["state", "--z", "1+0i"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("6.0653065971263342e-1"), "{text}");
}

#[test]
fn shift_canonical_routes_agree() {
    let v = json(&["shift", "--z", "0.3+0i", "--sigma", "0.2+0i"]);
    assert!(f(&v["max_gap"]) <= 1e-10);
    assert!(f(&v["diagnostic_gap"]) < 1e-14);
}

#[test]
fn shift_without_second_label_is_bg_state() {
    let v = json(&["shift", "--z", "0.6-0.2i", "--lam", "0", "--sigma", "0.9+0.4i"]);
    let s = json(&["state", "--z", "0.6-0.2i"]);
    let a = v["shifted"].as_array().unwrap();
    let b = s["coeffs"].as_array().unwrap();
    let n = a.len().min(b.len());
    for k in 0..n {
        assert!((f(&a[k]["re"]) - f(&b[k]["re"])).abs() < 1e-15);
        assert!((f(&a[k]["im"]) - f(&b[k]["im"])).abs() < 1e-15);
    }
    assert!(f(&v["max_gap"]) <= 1e-10);
}

#[test]
fn shift_pho_reports_convention_gap() {
    let v = json(&["shift", "--params", PHO, "--z", "0.4+0i", "--sigma", "0.3+0i"]);
    assert!(f(&v["max_gap"]) <= 1e-8);
    assert!(f(&v["diagnostic_gap"]) > 0.0);
}

#[test]
fn shift_accepts_negative_scalars() {
    let v = json(&["shift", "--eps", "-0.5", "--z", "0.4+0.1i", "--lam", "-1.5", "--sigma", "-0.2+0.3i"]);
    assert!(f(&v["max_gap"]) <= 1e-8);
}

#[test]
fn overlap_kernel_matches_inner_product() {
    let v = json(&["overlap", "--z", "0.5+0i", "--w", "0+0.5i"]);
    assert!(f(&v["gap"]) < 1e-14);
    let k = (f(&v["kernel"]["re"]).powi(2) + f(&v["kernel"]["im"]).powi(2)).sqrt();
    assert!((k - (-0.25f64).exp()).abs() < 1e-14);
}

#[test]
fn moments_canonical_are_factorials() {
    let out = hypercs(&["moments", "--l-max", "6", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "l,moment_exact,moment_quadrature,rel_gap");
    let exact: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(exact, vec![1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0]);
}

#[test]
fn moments_pho_first_order() {
    let v = json(&["moments", "--params", PHO, "--l-max", "3"]);
    let row = &v["rows"][1];
    assert!((f(&row["moment_exact"]) - 1.329_340_388_179_137).abs() < 1e-14);
    assert!(f(&row["rel_gap"]) < 1e-6);
}

#[test]
fn moments_unsupported_family_drops_quadrature() {
    let v = json(&["moments", "--params", "p=1,q=1;a=0.5;b=2", "--l-max", "4"]);
    for row in v["rows"].as_array().unwrap() {
        assert!(row.get("moment_quadrature").is_none());
        assert!(row.get("rel_gap").is_none());
    }
}

#[test]
fn verify_limits_passes() {
    let v = json(&["verify", "--suite", "limits"]);
    assert_eq!(v["failed_count"], 0);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
        assert!(!c["paper_ref"].as_str().unwrap().is_empty());
    }
}

#[test]
fn verify_kernels_pho() {
    let v = json(&["verify", "--suite", "kernels", "--params", PHO]);
    assert_eq!(v["failed_count"], 0);
    let rk = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "kernels.reproducing_kernel").unwrap();
    assert_eq!(rk["status"], "pass");
    assert!(f(&rk["tol"]) <= 1e-6 * (1.0 + 1e-12));
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hypercs"))
            .args(["verify", "--suite", "states", "--seed", "7", "--params", PHO])
            .env("HYPERCS_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let names: Vec<String> = serde_json::from_slice::<Value>(&a.stdout).unwrap()["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn bad_thread_count_is_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypercs"))
        .args(["verify", "--suite", "limits"])
        .env("HYPERCS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_verify_has_header() {
    let out = hypercs(&["verify", "--suite", "limits", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,paper_ref,status,max_err,tol,detail\n"));
}
