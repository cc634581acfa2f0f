use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy")).args(args).env_remove("HOLONOMY_MAX_CELLS").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stderr.is_empty(), "a summary goes to stderr");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "one JSON document");
    serde_json::from_str(&text).unwrap()
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    std::fs::write(f.path(), v.to_string()).unwrap();
    f
}

#[test]
fn holonomy_of_the_cube_skeleton() {
    let v = ok_json(&["holonomy", &data("cube32.json")]);
    assert_eq!(v["order"], 4);
    assert_eq!(v["element_orders"], json!([1, 2, 2, 2]));
    assert_eq!(v["abelian"], true);
    assert_eq!(v["even"], true);
}

#[test]
fn holonomy_at_a_chosen_base_and_skeleton() {
    let v = ok_json(&["holonomy", &data("c5.json"), "--base", "2,3"]);
    assert_eq!(v["base"], json!([2, 3]));
    assert_eq!(v["order"], 2);
    let v = ok_json(&["holonomy", &data("k4.json"), "--k", "1"]);
    assert_eq!(v["dim"], 1);
}

#[test]
fn invariant_of_ring5() {
    let v = ok_json(&["invariant", &data("ring5.json")]);
    assert_eq!(v["I"], 1);
    assert_eq!(v["Z_chain"], 5);
    assert_eq!(v["CC"], "1/5");
    let v = ok_json(&["invariant", &data("cube32.json")]);
    assert_eq!(v["I"], 0);
    assert_eq!(v["Z_chain"], "inf");
    assert_eq!(v["CC"], "0");
}

#[test]
fn embed_check_verdicts() {
    assert_eq!(ok_json(&["embed-check", &data("ring5.json"), &data("cube62.json")])["verdict"], "obstructed");
    assert_eq!(ok_json(&["embed-check", &data("cube32.json"), &data("cube42.json")])["verdict"], "inconclusive");
}

#[test]
fn hom_k2_k4_is_a_two_sphere() {
    let v = ok_json(&["hom", &data("k2.json"), &data("k4.json"), "--homology"]);
    assert_eq!(v["f_vector"], json!([12, 24, 14]));
    assert_eq!(v["reduced_betti"], json!([0, 0, 1]));
    assert_eq!(v["torsion"], json!([[], [], []]));
}

#[test]
fn hom_cell_listing() {
    let v = ok_json(&["hom", &data("k2.json"), &data("k3.json"), "--cells"]);
    let cells = v["cell_list"].as_array().unwrap();
    assert_eq!(cells.len(), 12);
    assert_eq!(cells[0], json!({"eta": {"0": [0], "1": [1]}, "dim": 0}));
}

#[test]
fn transport_around_c5() {
    let path = "0,1;1,2;2,3;3,4;0,4;0,1";
    let v = ok_json(&["transport", &data("c5.json"), &data("k4.json"), "--path", path, "--homology"]);
    assert_eq!(v["projectivity"]["map"], json!({"0": 1, "1": 0}));
    assert_eq!(v["identity"], false);
    assert_eq!(v["induced"], json!([{"q": 2, "matrix": [[-1]]}]));
    let v = ok_json(&["transport", &data("c5.json"), &data("k3.json"), "--path", path, "--homology"]);
    assert_eq!(v["induced"], json!([{"q": 1, "matrix": [[1]]}]));
}

#[test]
fn chi_of_c5() {
    let v = ok_json(&["chi", &data("c5.json")]);
    assert_eq!(v["chi"], 3);
    let colours: Vec<u64> = v["witness"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).collect();
    assert!(colours.iter().all(|&c| (1..=3).contains(&c)));
}

#[test]
fn phi_check_on_cycles() {
    let v = ok_json(&["phi-check", &data("c5.json"), "--involution", &data("reflect5.json"), "--sigma", "2,3"]);
    assert_eq!(v["is_phi"], true);
    assert_eq!(v["evidence"].as_array().unwrap().first(), v["evidence"].as_array().unwrap().last());
    let v = ok_json(&["phi-check", &data("c4.json"), "--involution", &data("reflect4.json"), "--sigma", "0,1"]);
    assert_eq!(v["is_phi"], false);
}

#[test]
fn collapse_check() {
    assert_eq!(ok_json(&["collapse-check", &data("caterpillar.json")])["tree_like"], true);
    assert_eq!(ok_json(&["collapse-check", &data("hollow_triangle.json")])["tree_like"], false);
}

#[test]
fn bubble_keeps_i() {
    let v = ok_json(&["bubble", &data("ring5.json"), "--move", "0,1,5,6"]);
    assert_eq!(v["cubes_before"], 5);
    assert_eq!(v["cubes_after"], 9);
    assert_eq!(v["I_before"], v["I_after"]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["invariant", &data("ring5.json"), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), o.stdout);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["holonomy", &data("cube32.json"), "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("self_check").is_some());
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(run(&["chi", &data("c5.json"), "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["chi", "/nonexistent/k.json"]).status.code(), Some(2));
    assert_eq!(run(&["holonomy", &data("c5.json"), "--base", "0,2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let bad = temp_json(&json!({"type": "simplicial", "facets": [[0, 1], [2, "x", 2]]}));
    let o = run(&["chi", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("{2,x,2}"), "the message names the facet");

    let bad_cube = temp_json(&json!({"type": "cubical", "dim": 2, "cubes": [[0, 1, 2]]}));
    let o = run(&["invariant", bad_cube.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[0,1,2]"), "the message names the cube");
}

#[test]
fn size_guard_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_holonomy"))
        .args(["hom", &data("k2.json"), &data("k5.json")])
        .env("HOLONOMY_MAX_CELLS", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(ok_json(&["hom", &data("k2.json"), &data("k5.json")])["cells"].as_u64().unwrap() > 20);
}
