//! End-to-end checks of the command-line surface: golden outputs, exit
//! codes, format round trips.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringspaces"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn defect_golden_examples() {
    let out = run(&["defect", "--d", "-3", "--p", "3", "--c", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("delta_3(3) = 1"));

    let out = run(&["defect", "--d", "-4027", "--p", "3", "--c", "90"]);
    assert!(stdout(&out).contains("delta_3(90) = 2"));

    let out = run(&["defect", "--d", "-307", "--p", "3", "--c", "2"]);
    assert!(stdout(&out).contains("delta_3(2) = 0"));
}

#[test]
fn multiplicity_golden_examples() {
    let out = run(&[
        "multiplicity",
        "--d",
        "-3",
        "--p",
        "3",
        "--c",
        "2310",
        "--verify",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m_3(-3, 2310) = 5"));

    let out = run(&["multiplicity", "--d", "-291", "--p", "3", "--c", "18"]);
    assert!(stdout(&out).contains("m_3(-291, 18) = 6"));

    let out = run(&["multiplicity", "--d", "-103627", "--p", "3", "--c", "2"]);
    assert!(stdout(&out).contains("m_3(-103627, 2) = 9"));
}

#[test]
fn exit_codes() {
    // invalid input: non-fundamental discriminant
    let out = run(&["multiplicity", "--d", "-12", "--p", "3", "--c", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // invalid input: even p
    let out = run(&["defect", "--d", "-3", "--p", "4", "--c", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // unsupported field: real with positive 3-class rank (d = 229)
    let out = run(&["defect", "--d", "229", "--p", "3", "--c", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // bad flags
    let out = run(&["defect", "--d", "abc"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_round_trips() {
    let out = run(&[
        "census",
        "irregular",
        "--input",
        "/dev/null",
        "--format",
        "json",
    ]);
    // empty input: empty report, still valid JSON
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let re = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(
        text.trim_end(),
        re,
        "JSON must re-serialize byte-identically"
    );

    let out = run(&[
        "multiplicity",
        "--d",
        "-4027",
        "--p",
        "3",
        "--c",
        "990",
        "--format",
        "json",
    ]);
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["m"], 9);
    assert_eq!(parsed["d_L"], "-3946862700");
    let re = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(text.trim_end(), re);
}

#[test]
fn census_scaled_runs() {
    let out = run(&[
        "census",
        "rank-frequencies",
        "--p",
        "3",
        "--min",
        "-2000",
        "--max",
        "-1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("rho_p,m_p_d_1,count"));

    // guard: the full bound requires --full
    let out = run(&[
        "census",
        "rank-frequencies",
        "--p",
        "3",
        "--min",
        "-1000000",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["census", "minimal", "--p", "3", "--rho", "1"]);
    assert!(stdout(&out).contains("d = -23"));

    let out = run(&["census", "irregular", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.contains("-2069688,2,2,0,0,-167644728,27"));
    assert!(text.contains("717,0,1,0,0,58077,3"));
}

#[test]
fn cache_env_var_is_honored() {
    let path = std::env::temp_dir().join(format!("ringspaces-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let out = Command::new(env!("CARGO_BIN_EXE_ringspaces"))
        .args([
            "census",
            "rank-frequencies",
            "--p",
            "3",
            "--min",
            "-500",
            "--max",
            "-1",
        ])
        .env("RINGSPACES_CACHE", &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.lines().count() > 100);
    // warm run produces the identical report
    let out2 = Command::new(env!("CARGO_BIN_EXE_ringspaces"))
        .args([
            "census",
            "rank-frequencies",
            "--p",
            "3",
            "--min",
            "-500",
            "--max",
            "-1",
        ])
        .env("RINGSPACES_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(out.stdout, out2.stdout);
    let _ = std::fs::remove_file(&path);
}
