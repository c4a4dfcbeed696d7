//! End-to-end tests of the `spinorlab` binary: exit codes, output routing,
//! document shape, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spinorlab"));
    // Keep the ambient environment from redirecting output mid-test.
    c.env_remove("SPINORLAB_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spinorlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn verify_passes_and_exits_zero() {
    let o = run(&["verify", "--suite", "clifford", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS  clifford_relations"));
    assert!(text.contains("overall: PASS"));
    assert!(!text.contains("FAIL "));
}

#[test]
fn out_of_range_n_is_a_usage_error() {
    let o = run(&["verify", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = run(&["verify", "--suite", "spectral"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("spectral"),
        "stderr should name the bad value: {}",
        stderr(&o)
    );
}

#[test]
fn identical_seeds_give_byte_identical_json() {
    let args = [
        "verify", "--suite", "killing", "--n", "2", "--samples", "4", "--seed", "11", "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce the same bytes");
    assert!(!a.stdout.is_empty());
}

#[test]
fn spectrum_text_table_lists_eigenvalues_and_truncation() {
    let o = run(&["spectrum", "--n", "2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("basis_dim=8"));
    assert!(text.contains("-1.000000"));
    assert!(text.contains("truncated"));
}

#[test]
fn spectrum_json_parses_with_expected_fields() {
    let o = run(&["spectrum", "--n", "2", "--m", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    assert_eq!(v["n"], 2);
    assert_eq!(v["selector"], "sphere");
    assert_eq!(v["basis_dim"], 8);
    assert!(v["entries"].as_array().map_or(0, |a| a.len()) >= 3);
}

#[test]
fn report_refuses_to_run_without_recompute_or_all() {
    let o = run(&["report", "--n", "2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("--recompute"),
        "stderr should point at the missing flag: {}",
        stderr(&o)
    );
}

#[test]
fn full_report_bundles_all_sections() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("full.json");
    let o = run(&[
        "report",
        "--all",
        "--n",
        "2",
        "--m",
        "1",
        "--samples",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("report file"))
            .expect("valid json");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["verification"]["pass"], true);
    assert_eq!(v["spectra"].as_array().unwrap().len(), 3);
    assert_eq!(v["killing"].as_array().unwrap().len(), 2);
    assert_eq!(v["killing"][0]["lambda"], -0.5);
}

#[test]
fn unwritable_out_path_exits_two_and_names_the_path() {
    let o = run(&[
        "spectrum",
        "--n",
        "2",
        "--m",
        "1",
        "--out",
        "/no-such-dir/deeper/table.json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("/no-such-dir/deeper/table.json"),
        "stderr should carry the path: {}",
        stderr(&o)
    );
}

#[test]
fn out_dir_env_var_supplies_a_default_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let o = bin()
        .args(["spectrum", "--n", "2", "--m", "1", "--format", "json"])
        .env("SPINORLAB_OUT_DIR", dir.path())
        .output()
        .expect("spawn spinorlab");
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    assert!(stdout(&o).is_empty(), "file output should leave stdout empty");
    let file = dir.path().join("spectrum.json");
    assert!(Path::new(&file).is_file());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&file).expect("default file"))
            .expect("valid json");
    assert_eq!(v["m"], 1);
}
