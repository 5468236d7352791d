use std::path::PathBuf;

use suspensia_cli::{run_with, EXIT_CHECK_FAILED, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("suspensia").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_and_groebner() {
    assert_eq!(run(&["validate", &fixture("yp3.json")]).0, EXIT_OK);
    let (code, out, _) = run(&["groebner", &fixture("torus_line.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("y*w - 1"));
}

#[test]
fn malformed_json_reports_position() {
    let (code, _, err) = run(&["validate", &fixture("broken.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("4:3"), "{err}");
}

#[test]
fn ill_defined_derivation_fails_check() {
    let (code, _, err) = run(&["certify-derivation", &fixture("torus_line_bad.json")]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn certify_embedded_derivations() {
    let (code, out, _) = run(&["certify-derivation", &fixture("y3_graded.json"), "--name", "vandermonde", "--grading", "deg"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("nu(z) = 1") && out.contains("degree [1]"), "{out}");
    let (code, _, _) = run(&["certify-derivation", &fixture("line.json"), "--name", "riccati", "--cap", "8"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
}

#[test]
fn homogenize_requires_lnd() {
    let (code, _, _) = run(&["homogenize", &fixture("plane.json"), "--name", "hyperbolic", "--grading", "std"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    let (code, _, _) = run(&["homogenize", &fixture("plane.json"), "--name", "triangular", "--grading", "std"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn suspension_commands() {
    let (code, out, _) = run(&["torus", &fixture("plane.json"), "--f", "x*y", "--k", "2,3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("weights"), "{out}");
    let (code, _, _) = run(&["torus", &fixture("plane.json"), "--f", "x*y", "--k", "2"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = run(&["lift", &fixture("plane.json"), "--name", "triangular", "--f", "y", "--k", "2,2", "--names", "u,v"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn build_yp_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    assert_eq!(run(&["build-yp", "--p", "4", "--n", "8", "--out", &out]).0, EXIT_INPUT);
    assert_eq!(run(&["build-yp", "--p", "3", "--n", "4", "--out", &out]).0, EXIT_INPUT);
    assert_eq!(run(&["build-yp", "--p", "3", "--n", "6", "--cap", "0", "--out", &out]).0, EXIT_INPUT);
    assert_eq!(run(&["build-yp", "--p", "3", "--n", "6", "--out", &out]).0, EXIT_OK);
    assert!(dir.path().join("certificate.json").exists());
}

#[test]
fn exp_group_law_from_cli() {
    let (code, _, _) = run(&["exp", &fixture("plane.json"), "--name", "triangular", "--t", "-2/3", "--s", "5"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn usage_errors_are_input_errors() {
    assert_eq!(run(&["no-such-command"]).0, EXIT_INPUT);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}
