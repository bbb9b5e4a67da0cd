use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn data(name: &str) -> String {
    dir().join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphertwist"))
        .args(args)
        .env("SPHERTWIST_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden(name: &str, args: &[&str]) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let expected = std::fs::read_to_string(dir().join("golden").join(name)).unwrap();
    assert_eq!(stdout(&o), expected, "golden file {name} differs");
}

#[test]
fn decompose_reports_summands() {
    let o = run(&["decompose", &data("b2_b0.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(2,0)×1, (0,-1)×1; compact: false");
    let o = run(&["decompose", &data("zero.json")]);
    assert_eq!(stdout(&o).trim(), "(empty); compact: true");
}

#[test]
fn decompose_error_codes() {
    let o = run(&["decompose", &data("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["decompose", &data("bad_square.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("degree 0"), "{}", stderr(&o));
}

#[test]
fn decompose_over_rationals() {
    let o = run(&["decompose", &data("b2_b0.json"), "--field", "Q"]);
    assert_eq!(stdout(&o).trim(), "(2,0)×1, (0,-1)×1; compact: false");
    let o = run(&["decompose", &data("b2_b0.json"), "--field", "GF:4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn twist_of_itself_reports_shift() {
    for g in ["single_edge.json", "double_edge.json", "disjoint.json"] {
        let o = run(&["twist", &data(g), "--vertex", "1", "--target", "P1"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("shift: target[-1]"), "{}", stdout(&o));
    }
}

#[test]
fn twist_usage_errors() {
    let o = run(&["twist", &data("single_edge.json"), "--vertex", "1", "--power", "0", "--target", "P2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["twist", &data("single_edge.json"), "--vertex", "7", "--target", "P2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown vertex 7"));
}

#[test]
fn twist_accepts_object_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t.json");
    let o = run(&[
        "twist",
        &data("double_edge.json"),
        "--vertex",
        "1",
        "--target",
        "P2[2]",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let obj = tmp.path().join("obj.json");
    std::fs::write(&obj, report["object"].to_string()).unwrap();
    let o = run(&["twist", &data("double_edge.json"), "--vertex", "1", "--power", "-1", "--target", obj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("= P2[2] (0 differential entries)"), "{}", stdout(&o));
}

#[test]
fn classify_trichotomy() {
    let o = run(&["classify", &data("single_edge.json"), "1", "2"]);
    assert!(stdout(&o).starts_with("Braid(B3), l="), "{}", stdout(&o));
    let o = run(&["classify", &data("disjoint.json"), "1", "2"]);
    assert!(stdout(&o).starts_with("Commuting(ZxZ)"));
    let o = run(&["classify", &data("double_edge.json"), "1", "2", "--max-word-len", "3"]);
    assert_eq!(stdout(&o).trim(), "Free(F2), certificate: OK@len3");
    let o = run(&["classify", &data("single_edge.json"), "1", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn pingpong_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("cert.json");
    let o = run(&["pingpong", &data("double_edge.json"), "1", "2", "--max-word-len", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["certified"], true);
    assert_eq!(cert["words"].as_array().unwrap().len(), 4 + 12 + 36);
    let o = run(&["pingpong", &data("single_edge.json"), "1", "2"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("i=1: braid case"));
    let o = run(&["pingpong", &data("double_edge.json"), "1", "2", "--max-word-len", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_is_deterministic() {
    let a = run(&["fuzz-inequality", "--seed", "3"]);
    let b = run(&["fuzz-inequality", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with(" checks, 0 violations\n"));
}

#[test]
fn golden_outputs() {
    golden("decompose_b2_b0.json", &["decompose", &data("b2_b0.json"), "--format", "json"]);
    golden("decompose_zero.json", &["decompose", &data("zero.json"), "--format", "json"]);
    golden("classify_single_edge.json", &["classify", &data("single_edge.json"), "1", "2", "--format", "json"]);
    golden("classify_disjoint.json", &["classify", &data("disjoint.json"), "1", "2", "--format", "json"]);
    golden(
        "twist_single_edge.json",
        &["twist", &data("single_edge.json"), "--vertex", "1", "--target", "P2", "--format", "json"],
    );
    golden(
        "pingpong_double_edge_len2.json",
        &["pingpong", &data("double_edge.json"), "1", "2", "--max-word-len", "2", "--format", "json"],
    );
    golden("fuzz_seed0.json", &["fuzz-inequality", "--format", "json"]);
}
