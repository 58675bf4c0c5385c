//! End-to-end checks of the `agc` binary: exit codes, stream discipline,
//! output files, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn agc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_agc"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = agc();
    for a in args {
        cmd.arg(a.as_ref());
    }
    cmd.output().expect("binary runs")
}

fn compose(paths: &[&Path]) -> Output {
    let mut cmd = agc();
    cmd.arg("compose");
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn compose_writes_expected_document_to_stdout() {
    let out = compose(&[&fixture("ex1_buffer1.json"), &fixture("ex1_buffer2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"i <= 1\""), "stdout: {text}");
    assert!(text.contains("\"-1*i + o' <= 0\""), "stdout: {text}");
    assert!(text.ends_with('\n'));
}

#[test]
fn stdout_is_byte_identical_across_runs() {
    let a = compose(&[&fixture("ex1_buffer1.json"), &fixture("ex1_buffer2.json")]);
    let b = compose(&[&fixture("ex1_buffer1.json"), &fixture("ex1_buffer2.json")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn output_flag_writes_file_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let out = run(&[
        &"compose",
        &fixture("ex1_buffer1.json"),
        &fixture("ex1_buffer2.json"),
        &"--output",
        &path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "results went to the file");
    // the produced document is itself a valid input
    let validate = run(&[&"validate", &path]);
    assert_eq!(validate.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
}

#[test]
fn refines_prints_verdict_and_exit_code() {
    let yes = run(&[
        &"refines",
        &fixture("ex1_buffer1.json"),
        &fixture("ex1_buffer1.json"),
    ]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(String::from_utf8(yes.stdout).unwrap(), "true\n");

    // stronger-assumption direction does not refine
    let dir = tempfile::tempdir().unwrap();
    let weaker = dir.path().join("weaker.json");
    std::fs::write(
        &weaker,
        r#"{"input_vars":["i"],"output_vars":["o"],"assumptions":["i <= 1"],"guarantees":["o <= i"]}"#,
    )
    .unwrap();
    let no = run(&[&"refines", &weaker, &fixture("ex1_buffer1.json")]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(String::from_utf8(no.stdout).unwrap(), "false\n");
}

#[test]
fn algebra_errors_exit_2_with_verbatim_kind() {
    // shared outputs are not composable
    let out = compose(&[&fixture("ex1_buffer1.json"), &fixture("ex1_buffer1.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("Contracts are not composable"),
        "stderr: {err}"
    );
    assert!(out.stdout.is_empty(), "stdout stays clean on errors");

    // unsatisfiable elimination in the unbounded adder chain
    let out = compose(&[
        &fixture("dsp_input_x1_unbounded.json"),
        &fixture("dsp_input_x2_unbounded.json"),
        &fixture("dsp_input_x4_unbounded.json"),
        &fixture("dsp_adder1.json"),
        &fixture("dsp_adder2.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("unsatisfiable in the given context"),
        "stderr: {err}"
    );
}

#[test]
fn infeasible_composite_assumptions_warn_but_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    // independent contracts over a shared input with contradictory
    // assumption windows: the composite assumptions admit no environment
    std::fs::write(
        &a,
        r#"{"input_vars":["x"],"output_vars":["y"],"assumptions":["x <= 0"],"guarantees":["y <= x"]}"#,
    )
    .unwrap();
    std::fs::write(
        &b,
        r#"{"input_vars":["x"],"output_vars":["w"],"assumptions":["x >= 1"],"guarantees":["w <= x"]}"#,
    )
    .unwrap();
    let out = compose(&[&a, &b]);
    assert_eq!(out.status.code(), Some(0), "infeasibility is not an error");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("warning") && stderr.contains("infeasible"),
        "stderr: {stderr}"
    );
}

#[test]
fn parse_and_schema_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    assert_eq!(run(&[&"validate", &bad_json]).status.code(), Some(3));

    let bad_term = dir.path().join("badterm.json");
    std::fs::write(
        &bad_term,
        r#"{"input_vars":["x"],"output_vars":[],"assumptions":["x < 1"],"guarantees":[]}"#,
    )
    .unwrap();
    assert_eq!(run(&[&"validate", &bad_term]).status.code(), Some(3));

    let unknown_key = dir.path().join("unknown.json");
    std::fs::write(
        &unknown_key,
        r#"{"input_vars":[],"output_vars":[],"assumptions":[],"guarantees":[],"notes":"x"}"#,
    )
    .unwrap();
    assert_eq!(run(&[&"validate", &unknown_key]).status.code(), Some(3));
}

#[test]
fn invalid_contract_exits_2_and_missing_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"input_vars":["i"],"output_vars":["o"],"assumptions":["o <= 1"],"guarantees":[]}"#,
    )
    .unwrap();
    assert_eq!(run(&[&"validate", &invalid]).status.code(), Some(2));

    assert_eq!(
        run(&[&"validate", &dir.path().join("nope.json")])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn quotient_binary_and_trace_on_stderr() {
    let out = run(&[
        &"quotient",
        &fixture("ex2_system.json"),
        &fixture("ex2_subsystem.json"),
        &"--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("quotient assumptions"), "stderr: {stderr}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"o <= 2\""), "stdout: {stdout}");
    assert!(
        !stdout.contains("quotient assumptions"),
        "trace leaked to stdout"
    );
}

#[test]
fn nary_compose_folds_left_to_right() {
    // ((x1 || x2) || x4) succeeds and exposes all six signal variables
    let out = compose(&[
        &fixture("dsp_input_x1.json"),
        &fixture("dsp_input_x2.json"),
        &fixture("dsp_input_x4.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for v in ["x1_a", "x2_a", "x4_a"] {
        assert!(text.contains(v), "missing {v} in {text}");
    }
}

#[test]
fn merge_requires_matching_interfaces() {
    let out = run(&[
        &"merge",
        &fixture("autonomy_controller_ped.json"),
        &fixture("autonomy_controller_obj.json"),
        &fixture("autonomy_controller_emp.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let mismatch = run(&[
        &"merge",
        &fixture("ex1_buffer1.json"),
        &fixture("ex1_buffer2.json"),
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(String::from_utf8(mismatch.stderr)
        .unwrap()
        .contains("Merging is not defined"));
}

#[test]
fn text_format_renders_contract() {
    let out = run(&[
        &"compose",
        &fixture("ex1_buffer1.json"),
        &fixture("ex1_buffer2.json"),
        &"--format",
        &"text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inputs: [i]"), "stdout: {text}");
    assert!(text.contains("assumptions: [i <= 1]"), "stdout: {text}");
}

#[test]
fn every_fixture_loads_validates_and_round_trips() {
    use agc_cli::document::ContractDocument;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        checked += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = ContractDocument::from_json(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
        let contract = doc
            .to_contract()
            .unwrap_or_else(|e| panic!("{path:?}: {e}"));
        assert!(contract.validate().is_ok(), "{path:?} does not validate");

        // save → load → save is a byte-level fixed point by the second pass
        let first = ContractDocument::from_contract(&contract, doc.name.as_deref()).to_json();
        let reloaded = ContractDocument::from_json(&first)
            .unwrap()
            .to_contract()
            .unwrap();
        assert_eq!(reloaded, contract, "{path:?} changed across save/load");
        let second = ContractDocument::from_contract(&reloaded, doc.name.as_deref()).to_json();
        assert_eq!(first, second, "{path:?} save not idempotent");
    }
    assert!(checked >= 20, "only {checked} fixtures found");
}

#[test]
fn study_multiagent_reports_pass() {
    let out = run(&[&"study", &"multiagent"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .all(|l| l.starts_with("PASS") || l.starts_with("note")));
}
