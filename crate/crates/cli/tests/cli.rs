//! End-to-end runs of the binary: exit codes, verdict strings, and the
//! JSON round trip between `demo` output and the file-reading commands.

use std::io::Write;
use std::process::{Command, Output};

fn dgsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn separable_dual_numbers_is_not_separable_with_exit_zero() {
    let out = dgsep(&["separable", "--demo", "dual-numbers-over-Q"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("NOT_SEPARABLE"));
}

#[test]
fn separable_laurent_coprime_index_is_separable() {
    let out = dgsep(&["separable", "--demo", "laurent", "F2", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("SEPARABLE"));
    assert!(!text.contains("NOT_SEPARABLE"));
}

#[test]
fn demo_document_round_trips_through_validate() {
    let out = dgsep(&["demo", "laurent", "F2", "3"]);
    assert_eq!(code(&out), 0);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(out.stdout.as_slice()).unwrap();

    let validated = dgsep(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(code(&validated), 0, "{}", stderr(&validated));

    // and the decision read from the file matches the catalog run
    let from_file = dgsep(&["separable", file.path().to_str().unwrap()]);
    let from_name = dgsep(&["separable", "--demo", "laurent", "F2", "3"]);
    assert_eq!(stdout(&from_file), stdout(&from_name));
}

#[test]
fn inhomogeneous_product_fails_validation_with_exit_three() {
    let doc = r#"{
        "field": "Q",
        "basis": [{"label": "1", "degree": 0}, {"label": "X", "degree": 1}],
        "products": {
            "0,0": [[0, 0, 1, 1]],
            "0,1": [[1, 0, 1, 1]],
            "1,0": [[1, 0, 1, 1]],
            "1,1": [[0, 0, 1, 1]]
        },
        "unit": [[0, 0, 1, 1]]
    }"#;
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(doc.as_bytes()).unwrap();
    let out = dgsep(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("degree"), "{}", stdout(&out));
}

#[test]
fn unknown_demo_name_is_a_format_error() {
    let out = dgsep(&["separable", "--demo", "no-such-thing"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn not_json_file_is_a_format_error() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"this is not json").unwrap();
    let out = dgsep(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn file_and_demo_together_are_refused() {
    let out = dgsep(&["validate", "whatever.json", "--demo", "laurent", "F2", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_input_is_a_format_error() {
    let out = dgsep(&["separable"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn too_small_window_exits_four() {
    let out = dgsep(&[
        "grdiv-classify",
        "--demo",
        "laurent",
        "F2",
        "3",
        "--window",
        "0",
        "1",
    ]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn main_theorem_stays_silent_in_characteristic_two() {
    let out = dgsep(&["main-theorem", "--demo", "cycles-into-acyclic", "F2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("THEOREM_SILENT"));
}

#[test]
fn ses_split_interval_is_not_split_over_either_base() {
    let out = dgsep(&["ses-split", "--demo", "ses", "field-ext-F2-F4", "interval"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("NOT_SPLIT"));

    let out = dgsep(&[
        "ses-split",
        "--demo",
        "ses",
        "field-ext-F2-F4",
        "interval",
        "--base",
        "source",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("NOT_SPLIT"));
}

#[test]
fn lift_split_produces_a_section_over_the_laurent_pair() {
    let out = dgsep(&["lift-split", "--demo", "ses", "laurent-F2-3", "mixed-split"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("SPLIT"));
    assert!(text.contains("tau("));
}

#[test]
fn equivalence_check_round_trips_random_modules() {
    let out = dgsep(&[
        "equivalence-check",
        "--demo",
        "acyclic-division",
        "F5",
        "w=0",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("all 5 round trips verified"));
}

#[test]
fn json_format_output_parses_and_names_the_verdict() {
    let out = dgsep(&[
        "separable",
        "--demo",
        "laurent",
        "F3",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["verdict"], "NOT_SEPARABLE");
    assert!(value["infeasibility"]["witness_rows"].is_array());
}

#[test]
fn demo_catalog_lists_required_names() {
    let out = dgsep(&["demo"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in [
        "dual-numbers-over-Q",
        "laurent F2 3",
        "acyclic-division F5 w=Xinv",
    ] {
        assert!(text.contains(name), "catalog is missing {}", name);
    }
}

#[test]
fn cycles_report_can_be_fed_back_in() {
    let out = dgsep(&[
        "cycles",
        "--demo",
        "acyclic-division",
        "F5",
        "w=Xinv",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(out.stdout.as_slice()).unwrap();
    let validated = dgsep(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(code(&validated), 0, "{}", stderr(&validated));
    let classified = dgsep(&["grdiv-classify", file.path().to_str().unwrap()]);
    assert_eq!(code(&classified), 0, "{}", stderr(&classified));
    assert!(stdout(&classified).contains("laurent-over-field"));
}

#[test]
fn homology_honors_an_explicit_window() {
    let out = dgsep(&[
        "homology",
        "--demo",
        "acyclic-division",
        "F5",
        "w=Xinv",
        "--window",
        "-2",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("acyclic on window: true"));
    assert!(text.contains("H^-2: 0"));
}

#[test]
fn backwards_window_is_a_format_error() {
    let out = dgsep(&[
        "homology",
        "--demo",
        "laurent",
        "F2",
        "3",
        "--window",
        "3",
        "-2",
    ]);
    assert_eq!(code(&out), 2);
}
