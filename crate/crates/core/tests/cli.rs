use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semicyclic"))
}

fn job(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semicyclic-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invariant_of_unknot() {
    let p = job("unknot.json", r#"{"N": 4, "braid": [], "kappa_by_component": [[2, 0]]}"#);
    let out = run(&["invariant", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    // 2[alpha]/[2alpha] at kappa = 2
    assert!((v["normalized"][1].as_f64().unwrap() + 2.0f64.sqrt() * 2.0).abs() < 1e-9);
    assert!(v["normalized"][0].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn solve_and_compare_figure_eight() {
    let p = job(
        "f8.json",
        r#"{"N": 4, "braid": [-2, 1, -2, 1], "kappa_by_component": [[1.618033988749895, 0]], "epsilon": "solve"}"#,
    );
    let out = run(&["solve", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["nonabelian_dim"], 1);
    assert_eq!(v["strands"], 3);

    let out = run(&["compare", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
}

#[test]
fn compare_without_nonabelian_direction_fails_and_prints() {
    let p = job("tref-generic.json", r#"{"N": 4, "braid": [1, 1, 1], "kappa_by_component": [[1.3, 0.6]]}"#);
    let out = run(&["compare", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["ado"].is_array());
}

#[test]
fn rmatrix_prints_matrix() {
    let out = run(&["rmatrix", "--N", "4", "--color1", "1.5+0.2i,0.3", "--color2", "-0.7+0.4i,1-1i,1", "--flip"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let bad = job("bad.json", r#"{"N": 4, "braid": [1,"#);
    assert_eq!(run(&["invariant", bad.to_str().unwrap()]).status.code(), Some(2));
    let unknown = job("unknown.json", r#"{"N": 4, "kappa_by_component": [[2, 0]], "colour": 1}"#);
    assert_eq!(run(&["invariant", unknown.to_str().unwrap()]).status.code(), Some(2));
    let inadmissible = job("inad.json", r#"{"N": 4, "braid": [1, 1, 1], "kappa_by_component": [[1, 0]]}"#);
    assert_eq!(run(&["ado", inadmissible.to_str().unwrap()]).status.code(), Some(3));
    let not_fixed = job(
        "nf.json",
        r#"{"N": 4, "braid": [1], "strands": 2, "kappa_by_component": [[2, 0]], "epsilon": [[1, 0], [0, 0]]}"#,
    );
    assert_eq!(run(&["invariant", not_fixed.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["rmatrix", "--N", "1", "--color1", "2,0", "--color2", "2,0"]).status.code(), Some(3));
}

#[test]
fn verify_output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("semicyclic-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("golden.txt");
    let out = run(&["verify", "--suite", "golden4", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().last().unwrap().starts_with("SUMMARY passed=4 failed=0"));
    let again = run(&["verify", "--suite", "golden4", "--seed", "3"]);
    assert_eq!(again.stdout, text.as_bytes());
}
