//! CLI acceptance: determinism of `selftest` (criterion 11), exit-code
//! semantics, and end-to-end runs of the subcommands over files.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopfbrauer"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("HOPFBRAUER_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_11_selftest_determinism() {
    let a = run(&["selftest", "--format", "json", "--seed", "42"]);
    let b = run(&["selftest", "--format", "json", "--seed", "42"]);
    let passed =
        a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    println!(
        "ACCEPTANCE 11 (selftest determinism): {}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(a.status.success());
    assert!(b.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(
        a.stdout, b.stdout,
        "same seed must give byte-identical reports"
    );
}

#[test]
fn selftest_env_seed_override() {
    let flag = run(&["selftest", "--format", "json", "--seed", "7"]);
    let env = bin()
        .args(["selftest", "--format", "json", "--seed", "9"])
        .env("HOPFBRAUER_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn exit_codes() {
    // success
    assert_eq!(run(&["group", "--sn", "3"]).status.code(), Some(0));
    // usage errors
    assert_eq!(run(&["group"]).status.code(), Some(2));
    assert_eq!(
        run(&["decomp", "--sn", "4", "--p", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["decomp", "--sn", "4", "--p", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // thompson over the default corpus succeeds
    assert_eq!(run(&["thompson", "--p", "3"]).status.code(), Some(0));
}

#[test]
fn group_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.grp");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# Q = S3").unwrap();
    writeln!(f, "(1 2)").unwrap();
    writeln!(f, "(1 2 3)").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "(1 2)").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "(1 2 3)").unwrap();
    drop(f);
    let out = run(&[
        "group",
        "--group",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["order_q"], 6);
    assert_eq!(json["report"]["order_f"], 2);
    assert_eq!(json["report"]["order_g"], 3);
    assert_eq!(json["meta"]["schema"], 1);
    assert_eq!(json["meta"]["composition"], "right-to-left");
    assert_eq!(json["meta"]["coproduct"], "standard");

    // the same file drives the whole pipeline
    let out = run(&["hdecomp", "--group", path.to_str().unwrap(), "--p", "3"]);
    assert!(out.status.success());
}

#[test]
fn indicator_records_for_h4() {
    let out = run(&["indicators", "--sn", "4", "--char", "0", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = json["report"].as_array().unwrap();
    // 3 simples from the fixed point plus 2 from the 3-element orbit
    assert_eq!(records.len(), 5);
    for r in records {
        assert_eq!(r["indicator"], 1);
        assert_eq!(r["self_dual"], true);
    }
    let dims: Vec<u64> = records.iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    let total: u64 = dims.iter().map(|d| d * d).sum();
    assert_eq!(total, 24);
}

#[test]
fn hdecomp_det_certificate_for_h5() {
    let out = run(&["hdecomp", "--sn", "5", "--p", "3", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["cartan"]["det"], "9");
    assert_eq!(json["report"]["cartan"]["p_power_exponent"], 2);
}

#[test]
fn chartable_csv_shape() {
    let out = run(&["chartable", "--sn", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header plus five character rows");
    assert!(lines[0].starts_with("degree,"));
}

#[test]
fn decomp_csv_sections() {
    let out = run(&["decomp", "--sn", "4", "--p", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# decomposition (5x4)"));
    assert!(text.contains("# cartan (4x4)"));
    assert!(text.contains("# det = 3"));
}

#[test]
fn corpus_file_is_consumed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    let corpus = serde_json::json!({
        "primes": [3],
        "entries": [
            {"name": "H3", "sn": 3},
            {"name": "S3-inline", "group_text": "(1 2)\n(1 2 3)\n\n(1 2)\n\n(1 2 3)\n"}
        ]
    });
    std::fs::write(&path, serde_json::to_string(&corpus).unwrap()).unwrap();
    let out = run(&[
        "thompson",
        "--corpus",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = json["report"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["pass"] == true));
}
