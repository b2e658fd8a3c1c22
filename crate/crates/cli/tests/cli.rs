use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    crate_dir().join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solve"))
        .args(args)
        .env_remove("SOLVE_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn validate(schema: &str, v: &Value) {
    let path = crate_dir().join("schemas").join(schema);
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&raw).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    panic!("{schema}: {msgs:?}\n{v:#}");
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn mixed_volumes_of_shipped_systems() {
    for (file, mv) in [("pencil.json", 2), ("linear3.json", 1), ("mixed2.json", 2)] {
        let out = run(&["mv", &data(file)]);
        assert!(out.status.success());
        let v = json_of(&out);
        validate("mv.schema.json", &v);
        assert_eq!(v["mv"], mv, "{file}");
    }
    let out = run(&["bkk", &data("pencil.json"), "--verbose"]);
    let v = json_of(&out);
    validate("mv.schema.json", &v);
    assert_eq!(v["mixed_cells"]["total"], 2);
}

#[test]
fn pencil_solutions() {
    let out = run(&["solve", &data("pencil.json"), "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    validate("solutions.schema.json", &v);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    let mut ims: Vec<f64> = pts.iter().map(|p| complex(&p[0]).1).collect();
    ims.sort_by(f64::total_cmp);
    let s = 0.5f64.sqrt();
    assert!((ims[0] + s).abs() < 1e-8 && (ims[1] - s).abs() < 1e-8, "{ims:?}");
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-8));
    assert_eq!(v["seed"], 7);
}

#[test]
fn univariate_roots() {
    let v = json_of(&run(&["solve", &data("univar.json")]));
    let mut xs: Vec<f64> = v["points"].as_array().unwrap().iter().map(|p| complex(&p[0]).0).collect();
    xs.sort_by(f64::total_cmp);
    assert!((xs[0] - 1.0).abs() < 1e-10 && (xs[1] - 2.0).abs() < 1e-10, "{xs:?}");
}

#[test]
fn groebner_reports() {
    let v = json_of(&run(&["gb", &data("pencil.json"), "--stats"]));
    validate("gb.schema.json", &v);
    assert_eq!(v["lex"][0], "l^2 + 1/2");
    assert_eq!(v["quotient_dim"], 2);

    let v = json_of(&run(&["gb", &data("point.json")]));
    validate("gb.schema.json", &v);
    assert_eq!(v["lex"], serde_json::json!(["x - 1", "y - 2"]));

    let v = json_of(&run(&["gb", &data("sat.json"), "--order", "lex"]));
    validate("gb.schema.json", &v);
    assert_eq!(v["quotient_dim"], 2);
    assert_eq!(v["torus_dim"], 1);
    assert_eq!(v["lex"], serde_json::json!(["x - 1", "y - 1"]));
    let torus = json_of(&run(&["solve", &data("sat.json")]));
    assert_eq!(torus["points"].as_array().unwrap().len(), 1);
    assert!((complex(&torus["points"][0][0]).0 - 1.0).abs() < 1e-10);
}

#[test]
fn user_summands() {
    let dir = std::env::temp_dir().join(format!("solve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("square.json");
    std::fs::write(&file, r#"{"summands": [[[0,0],[1,0],[0,1],[1,1]]], "degrees": [[1],[1]]}"#).unwrap();
    let v = json_of(&run(&["gb", &data("pencil.json"), "--summands", file.to_str().unwrap()]));
    validate("gb.schema.json", &v);
    assert_eq!(v["lex"][0], "l^2 + 1/2");
    assert_eq!(v["b"], serde_json::json!([2]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn matrices() {
    let v = json_of(&run(&["ce-matrix", &data("ce3.json")]));
    validate("ce-matrix.schema.json", &v);
    assert_ne!(v["determinant"], "0");
    let v = json_of(&run(&["macaulay", &data("ce3.json")]));
    validate("macaulay.schema.json", &v);
    let v = json_of(&run(&["koszul", &data("koszul3.json")]));
    validate("koszul.schema.json", &v);

    let v = json_of(&run(&["koszul", &data("bilinear.json")]));
    validate("solutions.schema.json", &v);
    let mut xy: Vec<(i64, i64)> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (complex(&p[1]).0.round() as i64, complex(&p[3]).0.round() as i64))
        .collect();
    xy.sort();
    assert_eq!(xy, vec![(1, 1), (2, 3)]);
}

#[test]
fn matrix_dump_is_written() {
    let path = std::env::temp_dir().join(format!("solve-dump-{}.json", std::process::id()));
    let out = run(&["solve", &data("pencil.json"), "--matrix-dump", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["canny_emiris"]["provenance"], "canny-emiris");
    std::fs::remove_file(&path).ok();
}

#[test]
fn inline_and_text_inputs() {
    let out = run(&["--format", "text", "mv", "--inline", "vars: x, y; x + y - 1; x*y - 2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "mv = 2\n");
    let out = run(&["solve", "--format", "text", "--inline", "vars: x; x^2 - 3*x + 2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("2 points"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["mv", "--inline", "vars: x; x^^2"]), 2);
    assert_eq!(code(&["mv", "--inline", "vars: x; x + z"]), 2);
    assert_eq!(code(&["solve", &data("ce3.json")]), 3);
    assert_eq!(code(&["ce-matrix", &data("pencil.json")]), 3);
    assert_eq!(code(&["solve", "--inline", "vars: x, y; x + y - 1; 2*x + 2*y - 2"]), 4);
    assert_eq!(code(&["gb", "--inline", "vars: x, y; x + y - 1; x + y - 2"]), 6);
    assert_eq!(code(&["solve", "/nonexistent/system.json"]), 1);
    assert_eq!(code(&["solve", "--tol", "-1", &data("univar.json")]), 2);
}

#[test]
fn residual_failure_still_prints_points() {
    let out = run(&["solve", &data("pencil.json"), "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(5));
    let v = json_of(&out);
    validate("solutions.schema.json", &v);
    assert_eq!(v["points"].as_array().unwrap().len() + v["rejected"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_solve"))
        .args(["solve", &data("pencil.json")])
        .env("SOLVE_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["seed"], 99);
}

#[test]
fn runs_are_byte_identical() {
    let cases: Vec<Vec<String>> = vec![
        vec!["mv".into(), data("mixed2.json"), "--verbose".into()],
        vec!["macaulay".into(), data("ce3.json")],
        vec!["ce-matrix".into(), data("ce3.json"), "--verbose".into()],
        vec!["koszul".into(), data("bilinear.json")],
        vec!["solve".into(), data("pencil.json"), "--seed".into(), "3".into()],
        vec!["gb".into(), data("pencil.json"), "--stats".into()],
    ];
    for args in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (x, y) = (run(&a), run(&a));
        assert_eq!(x.stdout, y.stdout, "{args:?}");
        assert_eq!(x.status.code(), y.status.code());
    }
}

#[test]
fn text_output_matches_golden_files() {
    let cases: [(&str, &[&str]); 5] = [
        ("mv_mixed2.txt", &["mv", "mixed2.json", "--verbose"]),
        ("gb_pencil.txt", &["gb", "pencil.json", "--stats"]),
        ("gb_sat.txt", &["gb", "sat.json"]),
        ("koszul3.txt", &["koszul", "koszul3.json"]),
        ("macaulay_ce3.txt", &["macaulay", "ce3.json", "--verbose"]),
    ];
    for (golden, args) in cases {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        a[1] = data(&a[1]);
        a.extend(["--format".into(), "text".into()]);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        let out = run(&refs);
        let want = std::fs::read_to_string(crate_dir().join("tests/golden").join(golden)).unwrap();
        assert_eq!(String::from_utf8_lossy(&out.stdout), want, "{golden}");
    }
}
