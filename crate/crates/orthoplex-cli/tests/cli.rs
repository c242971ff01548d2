use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthoplex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn build(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).display().to_string();
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend(["--out", &path]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn params(path: &str) -> String {
    String::from_utf8(run(&["params", path]).stdout).unwrap().trim().to_string()
}

#[test]
fn built_in_models_have_expected_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(params(&build(d, "a.json", &["--model", "orthoplex3d", "--size", "4,4,4"])), "256 16");
    assert_eq!(params(&build(d, "b.json", &["--model", "toric-hgp", "--size", "3,3"])), "18 2");
    assert_eq!(params(&build(d, "c.json", &["--model", "orthoplex4d", "--size", "2,2,2,2"])).split(' ').next(), Some("128"));
    let open = build(d, "d.json", &["--model", "orthoplex-pd", "--size", "3,3,3", "--open", "z"]);
    assert!(run(&["check", &open]).status.success());
}

#[test]
fn check_rejects_a_flipped_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "m.json", &["--model", "orthoplex3d", "--size", "2,2,2"]);
    assert!(run(&["check", &path]).status.success());
    let mut m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row = m["hx"]["rows"][0].as_array_mut().unwrap();
    let first = row[0].as_u64().unwrap();
    if first == 0 {
        row.remove(0);
    } else {
        row.insert(0, 0.into());
    }
    std::fs::write(&path, m.to_string()).unwrap();
    let out = run(&["check", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["check"]["pass"], false);
}

#[test]
fn gsd_scan_grid() {
    let out = run(&["gsd-scan", "--lx", "2..6", "--ly", "2..6", "--lz", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn fragmented_loop_projects_to_one_loop() {
    let dir = tempfile::tempdir().unwrap();
    let code = build(dir.path(), "f.json", &["--model", "orthoplex4d", "--size", "4,4,4,4"]);
    let script = dir.path().join("frag.json");
    std::fs::write(
        &script,
        r#"[{"fragment": {"plane": "x+y", "offset": 1,
             "region": {"rectangle": {"v0": 0, "lv": 1, "t0": 0, "lt": 1}}}}]"#,
    )
    .unwrap();
    let script = script.display().to_string();
    let args = ["excite", &code, "--script", &script, "--project", "w", "--seed", "9"];
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = &stdout_json(&out)["trace"][0]["projection"];
    assert_eq!(report["components"], 1);
    assert_eq!(report["all_degree_two"], true);
    assert_eq!(run(&args).stdout, out.stdout);
}

#[test]
fn logicals_are_certified() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "m.json", &["--model", "orthoplex3d", "--size", "3,3,2"]);
    let v = stdout_json(&run(&["logicals", &path]));
    let l = &v["logicals"];
    assert_eq!(l["k"], 12);
    assert_eq!(l["pairing_full_rank"], true);
    assert!(l["x"].as_array().unwrap().iter().all(|e| e["commutes_with_z_checks"] == true));
}

#[test]
fn defect_report() {
    let out = run(&["defect", "--size", "6", "--zero-modes"]);
    assert!(out.status.success());
    let d = &stdout_json(&out)["defect"];
    assert_eq!(d["commutation"]["pass"], true);
    assert_eq!(d["zero_modes"]["zero_modes"], 13);
}

#[test]
fn errors_are_json_with_exit_codes() {
    let out = run(&["build", "--model", "orthoplex3d", "--size", "4,4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "Usage");
    assert_eq!(run(&["build", "--model", "nope", "--size", "4"]).status.code(), Some(2));
    assert_eq!(run(&["defect", "--size", "5"]).status.code(), Some(2));
    let missing = run(&["params", "/nonexistent/manifest.json"]);
    assert_eq!(missing.status.code(), Some(4));
    assert!(serde_json::from_slice::<Value>(&missing.stderr).is_ok());
}
