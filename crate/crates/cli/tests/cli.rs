use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_finclass")).args(args).output().expect("spawn finclass");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), report, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn enumerate_circle_file_with_oracle() {
    let (code, r, _) = run(&["enumerate", "--complex", &fixture("circle.json"), "--group", "Z2", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["class_count"], 2);
    assert_eq!(r["result"]["oracle_agrees"], true);
    assert_eq!(r["config"]["command"]["subcommand"], "enumerate");
    assert_eq!(r["seed"], 0);
}

#[test]
fn group_from_table() {
    let (code, r, _) = run(&["enumerate", "--complex", "circle", "--group", &fixture("z3.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["class_count"], 3);
}

#[test]
fn malformed_group_reports_the_axiom() {
    let (code, r, err) = run(&["build-classifying", "--group", &fixture("bad_group.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("(a*b)*c"), "{err}");
    assert_eq!(r["ok"], false);
}

#[test]
fn unknown_inputs_are_input_errors() {
    assert_eq!(run(&["enumerate", "--complex", "torus", "--group", "Z2"]).0, 1);
    assert_eq!(run(&["enumerate", "--complex", "circle", "--group", "Z0"]).0, 1);
    assert_eq!(run(&["verify", "--thm", "9.9"]).0, 1);
    assert_eq!(run(&["enumerate", "--complex", "circle", "--group", "Z2", "--budget-maps", "5"]).0, 1);
    assert_ne!(run(&["no-such-command"]).0, 0);
}

#[test]
fn build_classifying_space() {
    let (code, r, _) = run(&["build-classifying", "--group", "S3", "--family", "representatives", "--kappa", "2"]);
    assert_eq!(code, 0);
    // 12 coset points, so 13² − 1 points
    assert_eq!(r["result"]["points"], 168);
    let (code, _, _) = run(&["build-classifying", "--group", "S3", "--kappa", "5", "--budget-points", "1000"]);
    assert_eq!(code, 1);
    let (code, r, _) = run(&["build-classifying", "--group", "Z2", "--family", "all-subgroups", "--emit-space"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["space"]["act"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_and_pull_back() {
    let (code, r, _) = run(&["classify", "--gspace", &fixture("z2_cylinder.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cover_kind"], "isovariant");
    assert_eq!(r["result"]["psi"]["bijective"], true);
    let (code, r, _) = run(&["pullback", "--map", &fixture("interval_map.json"), "--classifying", &fixture("e_z2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["free"], true);
    assert_eq!(r["result"]["bundle"]["proj"].as_array().unwrap().len(), 6);
}

#[test]
fn reduce_cover_reports() {
    let (code, r, _) = run(&["reduce-cover", "--partition", &fixture("tents.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["levels"][0], "[0,3/8) ∪ (3/8,5/8) ∪ (5/8,1]");
    assert_eq!(r["result"]["levels"][1], "(1/4,1/2) ∪ (1/2,3/4)");
    let (code, _, err) = run(&["reduce-cover", "--partition", &fixture("not_a_partition.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("sum to 1"));
}

#[test]
fn verify_instances() {
    for thm in ["2.7", "1.4"] {
        let (code, r, _) = run(&["verify", "--thm", thm]);
        assert_eq!(code, 0, "{thm}");
        assert_eq!(r["ok"], true);
    }
    let (code, _, _) = run(&["verify", "--thm", "1.4", "--group", "V4", "--kappa", "2"]);
    assert_eq!(code, 0);
    let (code, r, _) = run(&["verify", "--thm", "3.7", "--gspace", &fixture("z2_cylinder.json"), "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["seed"], 3);
    assert_eq!(r["result"]["phi"]["continuous"], true);
}

#[test]
fn reports_are_reproducible() {
    let args = ["enumerate", "--complex", "interval", "--group", "S3", "--emit-bundles", "--seed", "9"];
    let a = Command::new(env!("CARGO_BIN_EXE_finclass")).args(args).args(["--workers", "1"]).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_finclass")).args(args).args(["--workers", "3"]).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
