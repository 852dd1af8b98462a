//! End-to-end runs of the `letf` binary: golden outputs, config round trips,
//! flag precedence and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use letf_cli::RunConfig;

const GOLDEN: [(&str, &str, &str); 4] = [
    ("optimize", "heston_optimize.toml", "heston_optimize.csv"),
    ("rate", "cir_rate.toml", "cir_rate.json"),
    ("sweep", "heston_scan_sigma.toml", "heston_scan_sigma.csv"),
    ("verify", "gbm_verify.toml", "gbm_verify.csv"),
];

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn letf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_letf"))
        .args(args)
        .env_remove("LETF_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn outputs_match_golden_files() {
    for (cmd, cfg, expected) in GOLDEN {
        let cfg = golden(cfg);
        let o = letf(&[cmd, "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let want = std::fs::read_to_string(golden(expected)).unwrap();
        assert_eq!(stdout(&o), want, "{cmd} output drifted from {expected}");
    }
}

#[test]
fn printed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg, expected) in GOLDEN {
        let cfg = golden(cfg);
        let printed = letf(&[cmd, "--config", cfg.to_str().unwrap(), "--print-config"]);
        assert_eq!(printed.status.code(), Some(0));
        let text = stdout(&printed);
        let original = RunConfig::from_toml(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), original);

        let copy = dir.path().join("copy.toml");
        std::fs::write(&copy, &text).unwrap();
        let o = letf(&[cmd, "--config", copy.to_str().unwrap()]);
        assert_eq!(stdout(&o), std::fs::read_to_string(golden(expected)).unwrap());
    }
}

#[test]
fn output_file_and_format_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rate.json");
    let cfg = golden("heston_optimize.toml");
    let o = letf(&[
        "rate",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v[0]["rate"], serde_json::json!(0.0075));
    assert_eq!(v[0]["schema_version"], serde_json::json!(1));
}

#[test]
fn flags_override_set_which_overrides_the_file() {
    let cfg = golden("cir_rate.toml");
    let cfg = cfg.to_str().unwrap();
    let rate_at = |extra: &[&str]| {
        let mut args = vec!["rate", "--config", cfg, "--format", "csv"];
        args.extend_from_slice(extra);
        let o = letf(&args);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o).lines().nth(1).unwrap().split(',').nth(2).unwrap().to_string()
    };
    assert_eq!(rate_at(&[]), "2");
    assert_eq!(rate_at(&["--set", "command.beta=0"]), "0");
    assert_eq!(rate_at(&["--set", "command.beta=0", "--beta", "-1"]), "-1");
}

#[test]
fn exit_codes_follow_the_contract() {
    let heston = golden("heston_optimize.toml");
    let heston = heston.to_str().unwrap();

    // Validation: reversed interval, unknown key, missing file.
    assert_eq!(letf(&["optimize", "--config", heston, "--set", "model.a=10,3"]).status.code(), Some(1));
    assert_eq!(letf(&["optimize", "--config", heston, "--set", "command.epsilom=1"]).status.code(), Some(1));
    assert_eq!(letf(&["optimize", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(letf(&["optimize", "--config", heston, "--set", "problem.p=1.5"]).status.code(), Some(1));

    // Infeasible leverage: a.lo − p|β|σ̄ < 0.
    let o = letf(&["rate", "--config", heston, "--set", "model.a=1,10", "--beta", "-5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("false"));

    // A verification check that cannot pass: too few steps for a stiff factor.
    let cir = golden("cir_rate.toml");
    let o = letf(&[
        "verify",
        "--config",
        cir.to_str().unwrap(),
        "--horizon",
        "2",
        "--dt",
        "1",
        "--paths",
        "2000",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn thread_env_is_validated_and_does_not_change_results() {
    let cfg = golden("gbm_verify.toml");
    let cfg = cfg.to_str().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_letf"))
            .args(["verify", "--config", cfg])
            .env("LETF_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let auto = run("0");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    assert_eq!(run("many").status.code(), Some(1));
}
