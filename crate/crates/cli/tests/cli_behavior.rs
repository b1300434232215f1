//! Exit codes, formats and determinism of the command-line surface.

use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_sqdx"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn example_states_round_trip_through_the_state_format() {
    for (name, want) in [
        ("ex2", sqdx::xstate::example_two()),
        ("ex3", sqdx::xstate::example_three()),
        ("mixed", sqdx::xstate::maximally_mixed()),
    ] {
        let (stdout, _, code) = run(&["example", name]);
        assert_eq!(code, 0);
        assert!(stdout.contains("xstate-v1"));
        let parsed = sqdx::format::parse_state(&stdout).unwrap();
        assert!(parsed.to_matrix().max_abs_diff(&want.to_matrix()) < 1e-15, "{name}");
    }
}

#[test]
fn parametrized_examples_build_the_right_states() {
    let (stdout, _, code) = run(&["example", "werner:0.5"]);
    assert_eq!(code, 0);
    let dm = sqdx::format::parse_state(&stdout).unwrap();
    let p = dm.bloch();
    assert!((p.c3 + 0.5).abs() < 1e-15);
    assert!((p.c1.re + 0.5).abs() < 1e-15);

    let (stdout, _, code) = run(&["example", "bell-diag:0.3,-0.2,0.1"]);
    assert_eq!(code, 0);
    let p = sqdx::format::parse_state(&stdout).unwrap().bloch();
    assert!((p.c1.re - 0.3).abs() < 1e-15);
    assert!((p.c2.re + 0.2).abs() < 1e-15);
    assert!((p.c3 - 0.1).abs() < 1e-15);
}

#[test]
fn unknown_example_exits_2_with_the_valid_names() {
    let (_, stderr, code) = run(&["example", "nonsense"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "unknown-example");
    let msg = err["error"]["message"].as_str().unwrap();
    for name in ["ex2", "ex3", "werner:a", "bell-diag:c1,c2,c3", "mixed"] {
        assert!(msg.contains(name), "{msg}");
    }
}

#[test]
fn invalid_werner_parameter_exits_2() {
    let (_, stderr, code) = run(&["example", "werner:1.4"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "not-a-state");
}

#[test]
fn missing_state_file_exits_3() {
    let (_, stderr, code) = run(&["compute", "--state", "/nonexistent/state.json", "--x", "1"]);
    assert_eq!(code, 3);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "io-error");
}

#[test]
fn invalid_state_file_exits_2_naming_the_invariant() {
    let dir = std::env::temp_dir().join("sqdx-cli-test-invalid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"format":"xstate-v1","rho":{"d":[0.437,0.154,0.037,0.372],"rho14":[0.5,0.0],"rho23":[0.0,0.0]}}"#,
    )
    .unwrap();
    let (_, stderr, code) = run(&["compute", "--state", path.to_str().unwrap(), "--x", "1"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "invalid-state");
    assert!(err["error"]["message"].as_str().unwrap().contains("positive"));
}

#[test]
fn compute_reads_state_files_and_matches_the_builtin() {
    let dir = std::env::temp_dir().join("sqdx-cli-test-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ex2.json");
    let (state_json, _, _) = run(&["example", "ex2"]);
    std::fs::write(&path, &state_json).unwrap();
    let (from_file, _, code_a) =
        run(&["compute", "--state", path.to_str().unwrap(), "--x", "2"]);
    let (from_builtin, _, code_b) = run(&["compute", "--example", "ex2", "--x", "2"]);
    assert_eq!((code_a, code_b), (0, 0));
    assert_eq!(from_file, from_builtin);
}

#[test]
fn negative_strength_exits_2() {
    let (_, stderr, code) = run(&["compute", "--example", "ex2", "--x", "-1"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "invalid-strength");
}

#[test]
fn sweep_outputs_are_deterministic_and_carry_fixed_headers() {
    let args = ["sweep-x", "--example", "ex2", "--x-range", "0.25:5:0.25"];
    let (first, _, code) = run(&args);
    let (second, _, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(first, second, "sweep output must be bit-identical");
    let mut lines = first.lines();
    assert_eq!(lines.next().unwrap(), "x,z_hat,f_min,sqd,case");
    assert_eq!(first.lines().count(), 21);

    let (gamma_out, _, code) = run(&[
        "sweep-gamma",
        "--example",
        "werner:0.6",
        "--x",
        "2",
        "--gamma-range",
        "0:1:0.25",
    ]);
    assert_eq!(code, 0);
    assert_eq!(gamma_out.lines().next().unwrap(), "gamma,z_hat,sqd,sqd_undamped,delta");
    assert_eq!(gamma_out.lines().count(), 6);
}

#[test]
fn sweep_x_discord_is_monotone_for_example_two() {
    let (stdout, _, _) = run(&["sweep-x", "--example", "ex2", "--x-range", "0.25:5:0.25"]);
    let mut last = f64::INFINITY;
    for line in stdout.lines().skip(1) {
        let sqd: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(sqd <= last + 1e-9, "sqd column not non-increasing");
        last = sqd;
    }
}

#[test]
fn sweep_gamma_werner_delta_is_nonpositive() {
    let (stdout, _, _) = run(&[
        "sweep-gamma",
        "--example",
        "werner:0.6",
        "--x",
        "2",
        "--gamma-range",
        "0:1:0.1",
    ]);
    for line in stdout.lines().skip(1) {
        let delta: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(delta <= 1e-9, "damping increased the Werner discord: {line}");
    }
}

#[test]
fn mixed_state_sweep_is_identically_zero() {
    let (stdout, _, _) = run(&["sweep-x", "--example", "mixed", "--x-range", "0.5:3:0.5"]);
    for line in stdout.lines().skip(1) {
        let sqd: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(sqd, 0.0);
    }
}

#[test]
fn compute_json_report_matches_the_library() {
    let (stdout, _, code) = run(&["compute", "--example", "ex3", "--x", "3"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["report"], "sqd-v1");
    let ctx = sqdx::FContext::new(sqdx::xstate::example_three().bloch(), 3.0).unwrap();
    let lib = sqdx::sqd::super_quantum_discord(&ctx).unwrap();
    // 17-significant-digit serialization round-trips the doubles exactly
    assert_eq!(report["sqd"].as_f64().unwrap(), lib.sqd);
    assert_eq!(report["z_hat"].as_f64().unwrap(), lib.opt.z_hat);
    assert_eq!(report["case"], "general");
    assert_eq!(report["method"], "newton-interior");
    assert!(report["iterations"].as_array().unwrap().len() >= 2);
}

#[test]
fn compute_csv_format_emits_one_row() {
    let (stdout, _, code) = run(&["compute", "--example", "mixed", "--x", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "x,z_hat,f_min,sqd,case");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].ends_with(",A"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join("sqdx-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (stdout, _, code) = run(&[
        "compute",
        "--example",
        "ex2",
        "--x",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["report"], "sqd-v1");
}

#[test]
fn validate_reports_bloch_and_spectrum() {
    let (stdout, _, code) = run(&["validate", "--example", "ex2"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["valid"], true);
    assert!((report["bloch"]["r"].as_f64().unwrap() - 0.182).abs() < 1e-12);
    assert_eq!(report["spectrum"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_check_passes_on_the_examples() {
    for (name, x) in [("ex3", "3"), ("ex2", "1"), ("mixed", "1")] {
        let (stdout, _, code) =
            run(&["oracle-check", "--example", name, "--x", x, "--resolution", "100"]);
        assert_eq!(code, 0, "oracle-check failed for {name}");
        let report: Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(report["pass"], true);
        assert!(report["gap"].as_f64().unwrap() <= report["bound"].as_f64().unwrap());
    }
}

#[test]
fn bad_range_exits_2_with_a_json_usage_error() {
    for range in ["1:2", "2:1:0.5", "1:2:-0.5", "1:2:zero"] {
        let (_, stderr, code) = run(&["sweep-x", "--example", "ex2", "--x-range", range]);
        assert_eq!(code, 2, "range {range}");
        let err: Value = serde_json::from_str(stderr.trim()).unwrap();
        assert_eq!(err["error"]["code"], "usage");
    }
}

#[test]
fn missing_input_exits_2() {
    let (_, stderr, code) = run(&["compute", "--x", "1"]);
    assert_eq!(code, 2);
    let err: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"]["code"], "missing-input");
}
