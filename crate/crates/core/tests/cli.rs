//! End-to-end runs of the `gnatural` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gnatural(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnatural"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().expect("report is an object").remove("generated_at");
    v
}

#[test]
fn sasaki_over_flat_space_is_flat() {
    let out = gnatural(&["flatness", "--profile", "sasaki", "--manifold", "flat3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_report(&out);
    assert_eq!(r["verdict"], "flat");
    assert_eq!(r["schema"], 1);
    assert_eq!(r["passed"], true);
}

#[test]
fn sasaki_over_the_sphere_fails_the_base_condition() {
    let out = gnatural(&["flatness", "--profile", "sasaki", "--manifold", "sphere2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_report(&out);
    assert_eq!(r["verdict"], "not_flat");
    let violations = r["details"]["flatness"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|v| v["label"] == "i"), "{violations:?}");
}

#[test]
fn flat_family_inverse_check_passes() {
    let out = gnatural(&[
        "invert-check", "--profile", "flat-family", "--manifold", "flat2", "--samples", "50", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_report(&out);
    for c in r["checks"].as_array().unwrap() {
        assert!(c["value"].as_f64().unwrap() <= 1e-9, "{c}");
    }
}

#[test]
fn every_preset_and_manifold_runs_without_config_errors() {
    for profile in ["sasaki", "flat-family", "scaled-sasaki"] {
        for manifold in ["flat2", "flat3", "sphere2", "halfplane2"] {
            for cmd in ["classify", "invert-check", "connection-check", "curvature-scan", "flatness"] {
                let out = gnatural(&[cmd, "--profile", profile, "--manifold", manifold, "--samples", "3"]);
                let code = out.status.code();
                assert!(matches!(code, Some(0) | Some(1)), "{cmd} {profile} {manifold}: {code:?}");
                let r = json_report(&out);
                assert_eq!(r["passed"], code == Some(0), "{cmd} {profile} {manifold}");
            }
        }
    }
}

#[test]
fn invalid_configurations_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["classify", "--manifold", "torus"],
        &["classify", "--profile", "no-such-preset"],
        &["invert-check", "--samples", "0"],
        &["invert-check", "--t-max", "-1"],
        &["curvature-scan", "--format", "xml"],
        &["no-such-command"],
    ];
    for args in cases {
        let out = gnatural(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn reports_are_reproducible_apart_from_the_timestamp() {
    let args = ["curvature-scan", "--profile", "sasaki", "--manifold", "sphere2", "--samples", "4", "--seed", "11"];
    let a = without_timestamp(json_report(&gnatural(&args)));
    let b = without_timestamp(json_report(&gnatural(&args)));
    assert_eq!(a, b);
}

#[test]
fn csv_reports_have_a_header_row() {
    let out = gnatural(&["curvature-scan", "--profile", "sasaki", "--manifold", "flat2", "--samples", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let width = header.split(',').count();
    assert!(width > 1, "{header}");
    for line in lines {
        assert_eq!(line.split(',').count(), width, "{line}");
    }
}

#[test]
fn profile_documents_load_from_disk_and_reports_go_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    std::fs::write(
        &profile,
        r#"{"schema": 1, "polynomial": {"alpha1": [1.0, 0.2], "alpha3": [0.5], "beta1": [0.1], "beta3": [0.3]}}"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = gnatural(&[
        "classify",
        "--profile",
        profile.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["command"], "classify");
    assert!(Path::new(&report).exists());
}

#[test]
fn json_keys_are_sorted() {
    let out = gnatural(&["classify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim_start().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}
