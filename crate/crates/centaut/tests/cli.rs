use std::process::{Command, Output, Stdio};

fn centaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centaut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn construct_prints_the_default_instance() {
    let out = centaut(&["construct"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("m = x^3 + x + 1"));
    assert!(text.contains("[1 0 0 1 0 0]"));
}

#[test]
fn construct_json_exposes_the_blocks() {
    let out = centaut(&["construct", "--output", "json", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["p"], 3);
    assert_eq!(value["poly"], serde_json::json!([1, 2, 0, 1]));
    assert_eq!(value["f"][0], serde_json::json!([1, 0, 0, 1, 0, 0]));
}

#[test]
fn composite_characteristic_is_a_usage_error() {
    let out = centaut(&["construct", "--p", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn zero_b_vector_is_a_usage_error() {
    let out = centaut(&["construct", "--b", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must be nonzero"));
}

#[test]
fn oversized_scan_is_a_guard_error() {
    let out = centaut(&["stabilize", "--mode", "brute", "--p", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the scan guard"));
}

#[test]
fn brute_force_scan_passes_for_p2() {
    let out = centaut(&["stabilize", "--mode", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("tested: 20160"));
    assert!(text.contains("found 1 compatible map(s)"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["stabilize", "--mode", "structured", "--p", "3", "--output", "json"];
    let first = centaut(&args);
    let second = centaut(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!stdout(&first).contains("wall_ms"));
}

#[test]
fn timings_flag_adds_wall_clock_output() {
    let out = centaut(&["stabilize", "--output", "json", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("wall_ms"));
}

#[test]
fn worker_count_does_not_change_the_output() {
    let one = centaut(&["stabilize", "--mode", "brute", "--workers", "1", "--output", "json"]);
    let three = centaut(&["stabilize", "--mode", "brute", "--workers", "3", "--output", "json"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn odd_only_group_check_rejects_p2() {
    let out = centaut(&["group", "--check-inverse-free", "5", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd p"));
}

#[test]
fn all_command_passes_for_both_default_fields() {
    for p in ["2", "3"] {
        let out = centaut(&["all", "--p", p]);
        assert_eq!(out.status.code(), Some(0), "p = {p}");
        assert!(stdout(&out).ends_with("overall: PASS\n"));
    }
}

#[test]
fn closed_stdout_pipe_exits_without_panicking() {
    // The brute-force scan computes for a while before its first line of
    // output, so closing the read end right after spawning reliably makes
    // the first write hit a dead pipe.
    let mut child = Command::new(env!("CARGO_BIN_EXE_centaut"))
        .args(["stabilize", "--mode", "brute"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    drop(child.stdout.take());
    let out = child.wait_with_output().expect("child reaped");
    assert_eq!(out.status.code(), Some(141));
    assert!(out.stderr.is_empty(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn custom_polynomial_must_be_primitive() {
    // x^4 + x^3 + x^2 + x + 1 is irreducible but has order 5, not 15.
    let out = centaut(&["construct", "--p", "2", "--n", "4", "--poly", "1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not primitive"));
}

#[test]
fn custom_primitive_polynomial_is_accepted() {
    let out = centaut(&["construct", "--poly", "1,0,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("m = x^3 + x^2 + 1"));
}
