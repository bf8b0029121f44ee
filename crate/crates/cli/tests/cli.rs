//! End-to-end tests against the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_baskakov-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("baskakov-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn evaluate_reports_second_moment_value() {
    let out = run(&[
        "evaluate",
        "--family",
        "rho-baskakov",
        "--rho",
        "identity",
        "--n",
        "10",
        "-f",
        "rho2",
        "-x",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("4.59999999"), "{text}");
}

#[test]
fn evaluate_at_origin_returns_f_of_zero() {
    let out = run(&[
        "evaluate", "--rho", "quadratic", "--n", "7", "-f", "exp-neg-rho", "-x", "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    // f(0) = e^0 = 1 exactly
    assert!(text.lines().any(|l| l.starts_with("exp-neg-rho") && l.trim_end().ends_with(" 1")),
        "{text}");
}

#[test]
fn classical_and_rho_identity_emit_identical_columns() {
    let base = [
        "--rho", "identity", "--n", "12", "-f", "sin-rho", "-x", "0.5", "-x", "1.5", "-x", "3.0",
    ];
    let classical = run(&[&["evaluate", "--family", "classical-baskakov"], &base[..]].concat());
    let rho_form = run(&[&["evaluate", "--family", "rho-baskakov"], &base[..]].concat());
    assert!(classical.status.success() && rho_form.status.success());
    let strip = |s: String| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    };
    assert_eq!(strip(stdout(&classical)), strip(stdout(&rho_form)));
}

#[test]
fn unknown_rho_exits_with_usage_code() {
    let out = run(&["evaluate", "--rho", "cubic", "--n", "3", "-x", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_function_exits_with_usage_code() {
    let out = run(&["evaluate", "--rho", "identity", "--n", "3", "-f", "nope", "-x", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_are_deterministic_modulo_runtime() {
    let a = tmp("det-a.json");
    let b = tmp("det-b.json");
    for path in [&a, &b] {
        let out = run(&[
            "moments",
            "--rho",
            "sinh",
            "--order",
            "2",
            "--n-list",
            "1,5,10",
            "-x",
            "1.25",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let mut va: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mut vb: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    va["runtime_ms"] = 0.into();
    vb["runtime_ms"] = 0.into();
    assert_eq!(va, vb);
}

#[test]
fn csv_output_is_long_format() {
    let path = tmp("density.csv");
    let out = run(&[
        "astat",
        "--task",
        "density",
        "--set",
        "squares",
        "--j-list",
        "100,10000",
        "--horizon",
        "10000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,x,y"));
    assert!(text.contains("density,10000,0.01"), "{text}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let cfg = tmp("config.txt");
    std::fs::write(&cfg, "rho = quadratic\nn-list = 2,4\norder = 1\n").unwrap();
    let out = run(&[
        "moments",
        "--config",
        cfg.to_str().unwrap(),
        "--order",
        "2",
        "-x",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rho = quadratic"), "{text}");
    // flag overrides config: order 2, closed form = r^2 + (r^2+r)/n at r=2
    assert!(text.contains("order = 2"), "{text}");
    // n-list from config: rows at n=2 and n=4
    assert!(text.contains("closed                       2"), "{text}");
    assert!(text.contains("closed                       4"), "{text}");
}

#[test]
fn order_check_runs_from_cli() {
    let out = run(&[
        "moments",
        "--order-check",
        "--n-list",
        "50,100,200,400",
        "-x",
        "1",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[PASS] fourth-moment-order"));
}

#[test]
fn astat_demo_identity_expects_divergence() {
    let out = run(&[
        "astat",
        "--task",
        "demo",
        "--matrix",
        "identity",
        "--j-list",
        "16,64,256,1024,4096,9409,10000",
        "--n-max",
        "10000",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("[PASS] korovkin-demo"));
}

#[test]
fn suite_subset_passes() {
    let out = run(&["suite", "--only", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("criterion 4 PASS"));
}

#[test]
fn rho_szasz_family_evaluates() {
    let out = run(&[
        "evaluate", "--family", "rho-szasz", "--rho", "identity", "--n", "20", "-f", "e0", "-x",
        "1.0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value_line = text
        .lines()
        .find(|l| l.starts_with("e0"))
        .expect("value row");
    let y: f64 = value_line.split_whitespace().last().unwrap().parse().unwrap();
    assert!((y - 1.0).abs() < 1e-9, "{y}");
}
