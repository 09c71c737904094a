use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagsweep")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn pentagon_sweep_cd_index() {
    let v = run_json(&["cdindex", "--input", "polygon:5", "--method", "sweep"]);
    assert_eq!(v["cd"], json!({"cc": 1, "d": 3}));
    assert_eq!(v["per_vertex"].as_array().unwrap().len(), 5);
    assert_eq!(v["schema"], json!(1));
}

#[test]
fn symmetric_per_vertex_uses_fraction_strings() {
    let v = run_json(&["cdindex", "--input", "polygon:4", "--method", "symmetric", "--direction", "1,2"]);
    assert_eq!(v["cd"], json!({"cc": 1, "d": 2}));
    let first = &v["per_vertex"][0]["cd"];
    assert!(first.as_object().unwrap().values().all(Value::is_string), "{first}");
}

#[test]
fn cube_toric_every_method() {
    for m in ["def", "cd", "sweep", "symmetric"] {
        let v = run_json(&["toric", "--input", "cube:3", "--method", m]);
        assert_eq!(v["h"], json!([1, 5, 5, 1]), "method {m}");
    }
}

#[test]
fn verify_square_pyramid() {
    let out = run(&["verify", "--input", "pyramid:polygon:4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["schema"], json!(1));
}

#[test]
fn non_generic_direction_exits_2() {
    let out = run(&["cdindex", "--input", "cross:3", "--method", "sweep", "--direction", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_vertex_point_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(&path, r#"{"dim":2,"vertices":[[0,0],[2,0],[0,2],[2,2],[1,1]]}"#).unwrap();
    let out = run(&["describe", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_file_input_and_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tri.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, r#"{"dim":2,"vertices":[[0,0],["1/2",0],[0,1]]}"#).unwrap();
    let out = run(&["flag", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["f_vector"], json!([3, 3, 1]));
    assert_eq!(v["schema"], json!(1));
}

#[test]
fn partition_blocks_and_dimension_cap() {
    let v = run_json(&["partition", "--input", "polygon:5"]);
    let words: Vec<&str> = v["blocks"].as_array().unwrap().iter().map(|b| b["word"].as_str().unwrap()).collect();
    assert_eq!(words, ["cc", "d", "d", "d"]);
    let out = run(&["partition", "--input", "cube:4", "--max-dim", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_builtin_exits_2() {
    assert_eq!(run(&["describe", "--input", "dodecahedron:7"]).status.code(), Some(2));
}
