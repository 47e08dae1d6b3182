use std::path::Path;
use std::process::{Command, Output};

fn epsclt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsclt"))
        .args(args)
        .env_remove("EPSCLT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn bundled_model() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../models/tensor_l2.json")
        .to_string_lossy()
        .into_owned()
}

const SEMICIRCLE_MODEL: &str = r#"{"L": 1, "g_L": {"n": 1}, "w": {"constant": 0},
    "law": {"standard": "semicircle"}, "p_max": 8, "g_prime": "edgeless"}"#;

#[test]
fn verify_passes_on_bundled_model() {
    let o = epsclt(&["verify", "--instances", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
    assert!(stderr(&o)
        .lines()
        .all(|l| l.starts_with("PASS") || l.starts_with("SKIP")));
}

#[test]
fn free_limit_has_catalan_even_moments() {
    let o = epsclt(&["limit-moments", "--model", SEMICIRCLE_MODEL]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let even: Vec<&str> = rows
        .iter()
        .filter(|r| r[0].parse::<usize>().unwrap() % 2 == 0)
        .map(|r| r[2])
        .collect();
    assert_eq!(even, ["1", "2", "5", "14"]);
}

#[test]
fn tensor_fourth_moment_from_file() {
    let model = bundled_model();
    let o = epsclt(&[
        "limit-moments",
        "--model",
        &model,
        "--p-max",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["moments"][3]["S_unit"], "20/9");
    assert_eq!(v["words"].as_array().unwrap().len(), 3);
}

#[test]
fn rho_of_edge_in_half_graphon() {
    let o = epsclt(&[
        "rho",
        "--f",
        r#"{"n": 2, "edges": [[1, 2]]}"#,
        "--w",
        r#"{"constant": "1/2"}"#,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "rho\n1/2\n");
}

#[test]
fn model_read_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, SEMICIRCLE_MODEL).unwrap();
    let o = epsclt(&[
        "converge",
        "--model",
        path.to_str().unwrap(),
        "--ns",
        "1,2",
        "--p-max",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("p,n,finite,limit,abs_diff\n"));
}

#[test]
fn schema_error_names_the_path() {
    let bad = r#"{"L": 2, "g_L": {"n": 2, "edges": [[1, 3]]}, "w": {"constant": 0},
        "law": {"lambda": 1, "sigma2": 1}, "p_max": 4}"#;
    let o = epsclt(&["limit-moments", "--model", bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("$.g_L.edges[0][1]"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_one() {
    let o = epsclt(&["limit-moments", "--model", "/nonexistent/model.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_overflow_exits_two() {
    let model = bundled_model();
    let o = epsclt(&[
        "finite-moments",
        "--model",
        &model,
        "--ns",
        "50",
        "--strategy",
        "brute",
        "--budget",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn usage_error_exits_one() {
    assert_eq!(epsclt(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(epsclt(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let model = bundled_model();
    let args = [
        "finite-moments",
        "--model",
        &model,
        "--ns",
        "1,2,3",
        "--p-max",
        "4",
    ];
    let a = epsclt(&args);
    let b = epsclt(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v1 = epsclt(&[
        "verify",
        "--instances",
        "5",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    let v2 = epsclt(&[
        "verify",
        "--instances",
        "5",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn float_mode_agrees_with_exact() {
    let model = bundled_model();
    let o = epsclt(&[
        "limit-moments",
        "--model",
        &model,
        "--p-max",
        "4",
        "--mode",
        "float",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = v["moments"][3]["S_unit"].as_f64().unwrap();
    assert!((s - 20.0 / 9.0).abs() < 1e-12);
}

#[test]
fn hl_graph_lists_subsets() {
    let o = epsclt(&[
        "hl-graph",
        "--g-l",
        r#"{"n": 2, "edges": [[1, 2]]}"#,
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 1);
}
