use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpair")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = qpair(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn factors(path: &Path) -> Value {
    stdout_json(&qpair(&["classify", path.to_str().unwrap(), "--json"]))["factors"].clone()
}

#[test]
fn classify_u1() {
    let dir = TempDir::new().unwrap();
    let u = generate(dir.path(), "u.json", &["--type", "U", "--k", "1"]);
    let report = stdout_json(&qpair(&["classify", u.to_str().unwrap(), "--json"]));
    assert_eq!(report["format_version"], 1);
    assert_eq!(report["factors"], serde_json::json!([{"type": "U", "k": 1, "mult": 1}]));
    assert_eq!(report["sheaf"]["cokernel_degrees"], serde_json::json!([4]));
    assert_eq!(report["orientation_anchor"], "O(2) for (R,H)");
}

#[test]
fn span_of_one_and_j_is_w1_at_j() {
    let dir = TempDir::new().unwrap();
    let hand = dir.path().join("hand.json");
    std::fs::write(
        &hand,
        r#"{"quaternionic_dimension": 1, "subspace_basis": [
            [{"r": "1", "i": "0", "j": "0", "k": "0"}],
            [{"r": "0", "i": "0", "j": "1", "k": "0"}]]}"#,
    )
    .unwrap();
    let w = generate(dir.path(), "w.json", &["--type", "W", "--k", "1", "--support", "1"]);
    let f = factors(&hand);
    assert_eq!(f.as_array().unwrap().len(), 1);
    assert_eq!(f[0]["type"], "W");
    assert_eq!(f[0]["k"], 1);
    assert_eq!(f, factors(&w));
    let generated: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let hand_input = stdout_json(&qpair(&["classify", hand.to_str().unwrap(), "--json"]))["input"].clone();
    assert_eq!(hand_input["subspace_basis"], generated["subspace_basis"]);
}

#[test]
fn generate_shapes() {
    let dir = TempDir::new().unwrap();
    let v = generate(dir.path(), "v.json", &["--type", "V", "--k", "2"]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&v).unwrap()).unwrap();
    assert_eq!(doc["quaternionic_dimension"], 5);
    assert_eq!(doc["subspace_basis"].as_array().unwrap().len(), 8);
    assert_eq!(doc["format_version"], 1);

    let u0 = generate(dir.path(), "u0.json", &["--type", "U", "--k", "0"]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&u0).unwrap()).unwrap();
    assert_eq!(doc["quaternionic_dimension"], 1);
    assert_eq!(doc["subspace_basis"].as_array().unwrap().len(), 1);

    for (kind, k) in [("U", "2"), ("Ustar", "1"), ("V", "1"), ("Vstar", "0")] {
        let p = generate(dir.path(), &format!("{kind}.json"), &["--type", kind, "--k", k]);
        let name = if kind.ends_with("star") { format!("{}*", &kind[..1]) } else { kind.to_string() };
        assert_eq!(factors(&p), serde_json::json!([{"type": name, "k": k.parse::<u64>().unwrap(), "mult": 1}]));
    }
}

#[test]
fn generate_rejects_bad_parameters() {
    let out = qpair(&["generate", "--type", "W", "--k", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_json(&out)["error"].is_object());
    assert_eq!(code(&qpair(&["generate", "--type", "U"])), 1);
    assert_eq!(code(&qpair(&["generate", "--type", "W", "--k", "1", "--support", "1/0"])), 1);
    assert_eq!(code(&qpair(&["generate", "--type", "X", "--k", "1"])), 1);
}

#[test]
fn dual_of_u0_is_ustar0() {
    let dir = TempDir::new().unwrap();
    let u0 = generate(dir.path(), "u0.json", &["--type", "U", "--k", "0"]);
    let d = dir.path().join("d.json");
    assert_eq!(code(&qpair(&["dual", u0.to_str().unwrap(), "--out", d.to_str().unwrap()])), 0);
    assert_eq!(factors(&d), serde_json::json!([{"type": "U*", "k": 0, "mult": 1}]));
}

#[test]
fn product_with_rotation() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.json", &["--type", "W", "--k", "1", "--support", "0"]);
    let b = generate(dir.path(), "b.json", &["--type", "W", "--k", "2", "--support", "1"]);
    let p = dir.path().join("p.json");
    let out = qpair(&[
        "product",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--rotation",
        "1/2,1/2,1/2,1/2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let f = factors(&p);
    let mut ks: Vec<u64> = f.as_array().unwrap().iter().map(|x| x["k"].as_u64().unwrap()).collect();
    ks.sort();
    assert_eq!(ks, vec![1, 2]);
    assert_eq!(code(&qpair(&["product", a.to_str().unwrap(), b.to_str().unwrap(), "--rotation", "1,1,1,1"])), 1);
    assert_eq!(code(&qpair(&["product", a.to_str().unwrap()])), 1);
}

#[test]
fn transform_is_deterministic_and_invariant() {
    let dir = TempDir::new().unwrap();
    let v = generate(dir.path(), "v.json", &["--type", "V", "--k", "1"]);
    let first = qpair(&["transform", v.to_str().unwrap(), "--seed", "7"]);
    let second = qpair(&["transform", v.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let t = dir.path().join("t.json");
    std::fs::write(&t, &first.stdout).unwrap();
    assert_eq!(factors(&t), factors(&v));
}

#[test]
fn classify_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let w = generate(dir.path(), "w.json", &["--type", "W", "--k", "2", "--support", "1/2,1/2"]);
    let run = || qpair(&["classify", w.to_str().unwrap(), "--json", "--filtration"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn filtration_flag_adds_bases() {
    let dir = TempDir::new().unwrap();
    let a = generate(dir.path(), "a.json", &["--type", "U", "--k", "1"]);
    let b = generate(dir.path(), "b.json", &["--type", "Ustar", "--k", "0"]);
    let p = dir.path().join("p.json");
    qpair(&["product", a.to_str().unwrap(), b.to_str().unwrap(), "--out", p.to_str().unwrap()]);
    let report = stdout_json(&qpair(&["classify", p.to_str().unwrap(), "--json", "--filtration"]));
    let f = &report["filtration"];
    assert_eq!(f["dims"]["e_minus"], 1);
    assert_eq!(f["dims"]["u_minus"], 3);
    assert!(f["bases"].is_object());
}

#[test]
fn malformed_rational_exits_1_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"quaternionic_dimension": 1, "subspace_basis": [[{"r": "1/0", "i": "0", "j": "0", "k": "0"}]]}"#,
    )
    .unwrap();
    let out = qpair(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let msg = stderr_json(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("1/0") && msg.contains("line 1 column"), "{msg}");
}

#[test]
fn dependent_and_oversized_inputs_exit_1() {
    let dir = TempDir::new().unwrap();
    let dep = dir.path().join("dep.json");
    std::fs::write(
        &dep,
        r#"{"quaternionic_dimension": 1, "subspace_basis": [
            [{"r": "1", "i": "0", "j": "0", "k": "0"}], [{"r": "2", "i": "0", "j": "0", "k": "0"}]]}"#,
    )
    .unwrap();
    assert_eq!(code(&qpair(&["classify", dep.to_str().unwrap()])), 1);
    let v = generate(dir.path(), "v.json", &["--type", "V", "--k", "2"]);
    let out = Command::new(env!("CARGO_BIN_EXE_qpair"))
        .args(["classify", v.to_str().unwrap()])
        .env("QPAIR_MAX_K", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_json(&out)["error"]["kind"], "dimension_overflow");
}

#[test]
fn unknown_flags_are_rejected() {
    let out = qpair(&["classify", "x.json", "--frobnicate"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_json(&out)["error"]["message"].as_str().unwrap().contains("--frobnicate"));
}

#[test]
fn check_gen_w3_at_i() {
    let dir = TempDir::new().unwrap();
    let w = generate(dir.path(), "w.json", &["--type", "W", "--k", "3", "--support", "0"]);
    let out = stdout_json(&qpair(&["check", w.to_str().unwrap()]));
    assert_eq!(out["ok"], true);
    assert_eq!(out["torsion_length"], 6);
}

#[test]
fn sign_flipped_fixture_exits_2() {
    let dir = TempDir::new().unwrap();
    let u = generate(dir.path(), "u.json", &["--type", "U", "--k", "0"]);
    let out = qpair(&["--sign-flipped-fixture", "classify", u.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"]["kind"], "internal");
}

#[test]
fn corrupted_signature_fails_check() {
    let dir = TempDir::new().unwrap();
    let sig = dir.path().join("sig.json");
    std::fs::write(&sig, r#"{"kernel_degrees": [], "cokernel_degrees": [3], "torsion": []}"#).unwrap();
    let out = qpair(&["check", sig.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_json(&out)["error"]["kind"], "invariant");

    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"kernel_degrees": [], "cokernel_degrees": [3, 3], "torsion": []}"#).unwrap();
    assert_eq!(code(&qpair(&["check", good.to_str().unwrap()])), 0);
}

#[test]
fn corrupted_report_fails_check() {
    let dir = TempDir::new().unwrap();
    let u = generate(dir.path(), "u.json", &["--type", "U", "--k", "1"]);
    let mut report = stdout_json(&qpair(&["classify", u.to_str().unwrap(), "--json"]));
    let r = dir.path().join("r.json");
    std::fs::write(&r, report.to_string()).unwrap();
    assert_eq!(code(&qpair(&["check", r.to_str().unwrap()])), 0);
    report["factors"][0]["k"] = serde_json::json!(2);
    std::fs::write(&r, report.to_string()).unwrap();
    assert_eq!(code(&qpair(&["check", r.to_str().unwrap()])), 2);
}
