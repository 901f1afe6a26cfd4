use std::process::{Command, Output};

fn polarcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarcheck"))
        .args(args)
        .output()
        .expect("spawn polarcheck")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sphere_full_isotropy_is_polar() {
    let out = polarcheck(&["--space", "sphere(4)", "--subgroup", "so(4)"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["polar"]["verdict"], "polar");
    assert_eq!(v["polar"]["cohomogeneity"], 1);
    assert_eq!(v["status"], "ok");
}

#[test]
fn dual_check_produces_matching_subreports() {
    let out = polarcheck(&["--space", "sphere(3)", "--subgroup", "so(3)", "--checks", "dual"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["polar"]["verdict"], v["dual"]["verdict"]);
    assert_eq!(v["polar"]["cohomogeneity"], v["dual"]["cohomogeneity"]);
}

#[test]
fn not_polar_subgroup_reports_ok_status() {
    let out = polarcheck(&["--space", "op2", "--subgroup", "spin(7)bare"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["polar"]["verdict"], "not_polar");
}

#[test]
fn same_config_twice_is_byte_identical() {
    let a = polarcheck(&["--space", "cp(2)", "--subgroup", "torus", "--checks", "polar,jacobi"]);
    let b = polarcheck(&["--space", "cp(2)", "--subgroup", "torus", "--checks", "polar,jacobi"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_run_with_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{
            "space": {"family": "sphere", "n": 4},
            "subgroup": "so(4)",
            "checks": ["polar"],
            "seed": 7,
            "expected": {"verdict": "polar", "cohomogeneity": 1}
        }"#,
    )
    .unwrap();
    let out = polarcheck(&["--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["status"], "ok");
}

#[test]
fn expectation_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{
            "space": {"family": "sphere", "n": 4},
            "subgroup": "so(4)",
            "checks": ["polar"],
            "expected": {"verdict": "not_polar"}
        }"#,
    )
    .unwrap();
    let out = polarcheck(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "mismatch");
}

#[test]
fn missing_checks_in_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"space": {"family": "sphere", "n": 4}, "subgroup": "so(4)"}"#)
        .unwrap();
    let out = polarcheck(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("checks"), "stderr should name the missing field: {err}");
}

#[test]
fn inline_generators_are_closure_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    // One skew matrix on R^2: a valid 1-dim abelian subalgebra of so(2).
    std::fs::write(
        &path,
        r#"{
            "space": {"family": "euclidean", "n": 2},
            "subgroup": {"generators": [[[0.0, -1.0], [1.0, 0.0]]]},
            "checks": ["polar"]
        }"#,
    )
    .unwrap();
    let out = polarcheck(&["--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["subalgebra"]["dim"], 1);
    assert_eq!(v["polar"]["verdict"], "polar");
}

#[test]
fn inline_generators_of_wrong_size_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{
            "space": {"family": "euclidean", "n": 3},
            "subgroup": {"generators": [[[0.0, -1.0], [1.0, 0.0]]]},
            "checks": ["polar"]
        }"#,
    )
    .unwrap();
    let out = polarcheck(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_space_string_exits_3() {
    let out = polarcheck(&["--space", "klein_bottle", "--subgroup", "full"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = polarcheck(&[
        "--space",
        "sphere(3)",
        "--subgroup",
        "so(3)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["polar"]["verdict"], "polar");
}

#[test]
fn catalog_run_reports_no_mismatches() {
    let out = polarcheck(&["--catalog", "--seed", "42"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["entries"].as_array().unwrap().len(), 28);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["matched"] == true));
}

#[test]
fn product_split_check_via_cli() {
    let out = polarcheck(&[
        "--space",
        "product(sphere(3),sphere(4))",
        "--subgroup",
        "factors(full|full)",
        "--checks",
        "polar,product_split",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["product_split"]["section_splits"], true);
}

#[test]
fn compare_check_full_vs_full_is_equivalent() {
    let out = polarcheck(&["--space", "sphere(4)", "--subgroup", "so(4)", "--checks", "compare"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["compare"]["outcome"], "equivalent");
}
