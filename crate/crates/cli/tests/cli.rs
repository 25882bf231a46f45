use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relequil"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_json(args: &[&str]) -> (i32, Value, String) {
    let out = bin().args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        v,
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_counterexample_file() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "b.json",
        r#"{"rows":6,"cols":6,"field":"rational","data":[
            ["-2",0,0,0,0,0],[0,"-1",0,0,0,0],[0,0,"1",0,0,0],
            [0,0,0,"-1",0,0],[0,0,0,0,"0",0],[0,0,0,0,0,"0"]]}"#,
    );
    let (code, v, _) = run_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        v["classification"]["verdict"],
        "spectrally_stable_not_linear"
    );
    assert_eq!(v["inertia"]["morse_index"], 3);
    assert_eq!(v["inertia"]["nullity"], 2);
    assert_eq!(v["theorem"]["predicts_instability"], true);
    assert_eq!(v["input"]["backend"], "exact");
}

#[test]
fn classify_identity_both_backends() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.json", r#"[[1,0],[0,1]]"#);
    let (code, v, _) = run_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"]["verdict"], "linearly_stable");
    let (code, v, _) = run_json(&["classify", "--backend", "float", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"]["verdict"], "linearly_stable");
    assert_eq!(v["input"]["backend"], "float");
}

#[test]
fn classify_odd_dimension_is_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "odd.json", r#"[[1,0,0],[0,1,0],[0,0,1]]"#);
    let (code, _, err) = run_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("odd"), "{err}");
}

#[test]
fn exact_backend_rejects_float_input() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        r#"{"field":"float64","data":[[1.0,0.0],[0.0,1.0]]}"#,
    );
    let (code, _, err) = run_json(&["classify", "--backend", "exact", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("rational"), "{err}");
}

#[test]
fn classify_with_omega() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.json", r#"[[1,0],[0,1]]"#);
    let om = write(&dir, "om.json", r#"[[0,2],[-2,0]]"#);
    let (code, v, _) = run_json(&[
        "classify",
        "--omega",
        om.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"]["verdict"], "linearly_stable");
    assert_eq!(v["classification"]["reduced_from_omega"], true);
}

#[test]
fn malformed_json_is_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{not json");
    let (code, _, _) = run_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn flow_krein_identity_crossing_at_one() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"type":"krein","B":[[1,0],[0,1]],"s_max":"3"}"#,
    );
    let (code, v, _) = run_json(&["flow", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let crossings = v["flow"]["crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 1);
    assert_eq!(crossings[0]["exact_location"], "1");
    assert_eq!(v["kappa_identity"]["holds"], true);
    let (code, v, _) = run_json(&["flow", "--backend", "float", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let loc = v["flow"]["crossings"][0]["location"].as_f64().unwrap();
    assert!((loc - 1.0).abs() < 1e-9);
}

#[test]
fn flow_linear_paths() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"type":"linear","A0":[[-1,0],[0,-1]],"A1":[[1,0],[0,1]]}"#,
    );
    let (code, v, _) = run_json(&["flow", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["flow"]["spectral_flow"], 2);
    assert_eq!(v["endpoints"]["index_difference"], 2);
    let c = write(
        &dir,
        "c.json",
        r#"{"type":"linear","A0":[[2,1],[1,3]],"A1":[[2,1],[1,3]]}"#,
    );
    let (code, v, _) = run_json(&["flow", c.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["flow"]["spectral_flow"], 0);
}

#[test]
fn flow_irregular_crossing_exit_three() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"type":"linear","A0":[[0,"-1/2"],["-1/2",1]],"A1":[[0,"1/2"],["1/2",1]]}"#,
    );
    let (code, _, err) = run_json(&["flow", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("0.5") || err.contains("5e-1"), "{err}");
}

#[test]
fn nbody_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"masses":[1,1,1],"alpha":1,"positions":[[0.01,0],[1,0.02],[0.5,0.85]],"settings":{"cc_tol":1e-10}}"#,
    );
    let (code, v, _) = run_json(&["nbody-find-cc", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["central_configuration"]["residual"].as_f64().unwrap() <= 1e-10);
    let (code, v, _) = run_json(&["nbody-stability", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["amended_hessian"]["inertia_shat"]["morse_index"], 0);
    assert_eq!(v["verdict"]["predicts_instability"], false);
    assert_eq!(v["e1"]["computed"].as_array().unwrap().len(), 4);
    let collide = write(
        &dir,
        "c.json",
        r#"{"masses":[1,1],"alpha":1,"positions":[[0,0],[0,0]]}"#,
    );
    let (code, _, _) = run_json(&["nbody-find-cc", collide.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.json", r#"[[1,0],[0,1]]"#);
    let out = dir.path().join("r.json");
    let status = bin()
        .args([
            "classify",
            "--out",
            out.to_str().unwrap(),
            f.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["classification"]["verdict"], "linearly_stable");
}

#[test]
fn worked_examples_all_pass() {
    let out = bin().arg("paper-examples").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.contains("e1_alpha_2_jordan"));
}
