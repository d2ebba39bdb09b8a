//! End-to-end tests of the `rmq-stream` binary.

mod common;

use std::io::Write;
use std::process::{Command as Process, Stdio};

use common::EXAMPLE;

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_rmq-stream"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> std::process::Output {
    let mut child = binary()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn run_prints_the_example_answer() {
    let out = run_with_stdin(&["run", "--engine", "vanilla", "--in", "-"], EXAMPLE);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "27");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("engine=vanilla"));
    assert!(stderr.contains("queries=1"));
    assert!(stderr.contains("digest="));
}

#[test]
fn all_engine_flags_answer_identically() {
    let mut digests = Vec::new();
    for engine in ["vanilla", "compact", "realtime", "oracle"] {
        let out = run_with_stdin(&["run", "--engine", engine, "--in", "-"], EXAMPLE);
        assert!(out.status.success(), "{engine}");
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "27", "{engine}");
        let stderr = String::from_utf8_lossy(&out.stderr).to_string();
        let digest = stderr
            .lines()
            .find(|l| l.starts_with("digest="))
            .expect("digest line")
            .to_string();
        digests.push(digest);
    }
    assert!(digests.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn invalid_streams_are_rejected_with_the_offending_command() {
    let out = run_with_stdin(&["run", "--engine", "vanilla", "--in", "-"], "V 1 Q 5");
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("invalid stream"), "stderr: {stderr}");
    // --lenient accepts the same stream and skips the bad query.
    let out = run_with_stdin(
        &["run", "--engine", "vanilla", "--in", "-", "--lenient"],
        "V 1 Q 5",
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "");
}

#[test]
fn generate_then_verify_round_trips() {
    let dir = std::env::temp_dir();
    for name in ["cli_roundtrip.cmds", "cli_roundtrip.cmds.gz"] {
        let path = dir.join(name);
        let out = binary()
            .args([
                "generate", "--n", "2000", "--q", "100", "--ell", "4", "--seed", "9",
                "--out", path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

        let out = binary()
            .args(["verify", "--in", path.to_str().unwrap(), "--a0", "2"])
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("all engines agree"), "stderr: {stderr}");
        std::fs::remove_file(&path).ok();
    }
}

#[test]
fn generate_to_stdout_is_deterministic() {
    let args = ["generate", "--n", "100", "--q", "10", "--ell", "2", "--seed", "3", "--out", "-"];
    let first = binary().args(args).output().unwrap();
    let second = binary().args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&first.stdout).starts_with("V "));
}

#[test]
fn bench_emits_csv_rows() {
    let out = binary()
        .args([
            "bench", "--engine", "compact", "--n", "5000", "--q", "200", "--ell", "4",
            "--repeat", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.trim().lines().collect();
    assert_eq!(lines[0], "engine,n,q,ell,ns_per_command,peak_capacity");
    assert_eq!(lines.len(), 3);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], "compact");
        assert_eq!(fields[1], "5000");
        assert_eq!(fields[2], "200");
        assert!(fields[4].parse::<f64>().is_ok());
        assert!(fields[5].parse::<u64>().is_ok());
    }
}

#[test]
fn bench_without_inputs_fails() {
    let out = binary().args(["bench", "--engine", "vanilla"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bench needs"));
}
