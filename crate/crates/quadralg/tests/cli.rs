//! Black-box tests of the command-line binary: exit codes, output shapes,
//! and the metadata sidecar.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadralg"))
}

#[test]
fn verify_paper_passes() {
    let out = bin().arg("verify-paper").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{}", text);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 13);
    assert_eq!(text.lines().filter(|l| l.starts_with("WARN")).count(), 4);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_paper_strict_mode_flags_the_diffs() {
    let out = bin().args(["verify-paper", "--strict-paper"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(text.lines().filter(|l| l.starts_with("DIFF")).count(), 4);
}

#[test]
fn bad_source_is_an_input_error() {
    let out = bin().args(["present", "--source", "/no/such/file"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hilbert_emits_counts_and_fit() {
    let out = bin()
        .args(["hilbert", "--source", "k3", "--order", "c,b,e,f,a,d", "--nmax", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counts"][4], "793");
    assert_eq!(v["denominator"], serde_json::json!(["1", "-6", "5", "-1"]));
    assert_eq!(v["recurrence"], serde_json::json!(["6", "-5", "1"]));
    assert!(v["warnings"][0].as_str().unwrap().contains("denominator"));
}

#[test]
fn present_roundtrips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pres.txt");
    let out = bin()
        .args(["present", "--source", "gr-k3", "--output", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(path.with_extension("txt.meta.json").exists());
    // the written presentation loads back as a source
    let out2 = bin()
        .args(["hilbert", "--source", path.to_str().unwrap(), "--order", "f,e,d,c,b,a", "--cap", "8", "--nmax", "6"])
        .output()
        .unwrap();
    assert!(out2.status.success(), "{}", String::from_utf8_lossy(&out2.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out2.stdout).unwrap();
    assert_eq!(v["counts"][5], "4004");
}

#[test]
fn koszul_reports_all_pass_for_the_graded_fixture() {
    let out = bin().args(["koszul", "--source", "gr-k3", "--nmax", "4"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_pass"], serde_json::json!(true));
    assert_eq!(v["duality_pass"], serde_json::json!(true));
    assert_eq!(v["reduced_weight_enumeration"], serde_json::json!(true));
}

#[test]
fn complete_lists_the_rules() {
    let out = bin()
        .args(["complete", "--source", "gr-k3", "--order", "f,e,d,c,b,a", "--cap", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rule d*b -> d*a"));
    assert!(text.contains("rule e*f*b ->"));
}

#[test]
fn graph_source_builds_the_triangle_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.json");
    std::fs::write(&path, r#"{"n": 3, "edges": [[1,2],[1,3],[2,3]]}"#).unwrap();
    let src = format!("qn-graph:{}", path.display());
    let out = bin()
        .args(["hilbert", "--source", &src, "--order", "u(3),u(2),u(23),u(13),u(1),u(12)", "--nmax", "8"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counts"][4], "793");
}
