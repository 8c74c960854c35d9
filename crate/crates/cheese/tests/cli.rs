//! End-to-end checks of the command-line interface: the documented example
//! invocations, exit codes, and machine-readable outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cheese"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("cheese-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_then_verify_exits_zero() {
    let path = tmp("build.json");
    let out = bin()
        .args(["build", "--stages", "1", "--systems", "2", "--discs", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(path.exists());

    let json_path = tmp("verify.json");
    let out = bin()
        .args(["verify", "--input"])
        .arg(&path)
        .arg("--json-out")
        .arg(&json_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("[PASS]"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert!(report["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn bounds_on_empty_cheese_prints_one() {
    let out = bin()
        .args(["bounds", "--z", "0,0", "--k", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1 "));
}

#[test]
fn certify_example_succeeds() {
    let out = bin()
        .args(["certify", "--z", "0,1/2", "--w", "0,-1/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("stage 1"));
    assert!(text.contains("[PASS]"));
}

#[test]
fn render_and_star_check() {
    let path = tmp("render-src.json");
    bin()
        .args(["build", "--stages", "1", "--systems", "2", "--discs", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();

    let svg_path = tmp("out.svg");
    let out = bin()
        .args(["render", "--input"])
        .arg(&path)
        .arg("--out")
        .arg(&svg_path)
        .args(["--capsule", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("</svg>"));

    let out = bin().args(["star-check", "--input"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn probe_jensen_on_undeleted_disc() {
    let out = bin()
        .args([
            "probe-jensen",
            "--x",
            "0,0",
            "--grid-size",
            "9",
            "--family-size",
            "8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("max off-base mass"));
}

#[test]
fn usage_errors_exit_two() {
    // malformed rational point
    let out = bin().args(["bounds", "--z", "0.5e3,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"], "usage");

    // coincident certificate points
    let out = bin()
        .args(["certify", "--z", "0,1/2", "--w", "0,1/2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_document_fails_verification() {
    let path = tmp("good.json");
    bin()
        .args(["build", "--stages", "1", "--systems", "2", "--discs", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["deletions"][0]["radius"]["num"] = serde_json::Value::String("1".into());
    doc["deletions"][0]["radius"]["den"] = serde_json::Value::String("2".into());
    let bad_path = tmp("bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = bin().args(["verify", "--input"]).arg(&bad_path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"], "invariant-violation");
}

#[test]
fn builds_are_deterministic() {
    let p1 = tmp("det1.json");
    let p2 = tmp("det2.json");
    for p in [&p1, &p2] {
        bin()
            .args(["build", "--stages", "2", "--systems", "2", "--discs", "3", "--out"])
            .arg(p)
            .output()
            .unwrap();
    }
    assert_eq!(
        std::fs::read(&p1).unwrap(),
        std::fs::read(&p2).unwrap(),
        "identical configs must emit identical bytes"
    );
}
