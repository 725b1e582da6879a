use std::fs;
use std::path::PathBuf;

use serde_json::Value;
use tscale::cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn lines(&self) -> Vec<Value> {
        self.stdout.lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
    }
}

fn tscale(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["tscale"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn config(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("tscale-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path: PathBuf = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const THREE: &str = r#"{"timescale":{"components":[{"point":0.0},{"point":1.0},{"point":2.0}]},"functions":{"f":"x^2"}}"#;

#[test]
fn integrate_diamond_on_three_points() {
    let c = config("three.json", THREE);
    let o = tscale(&["integrate", "--config", &c, "--kind", "diamond", "--alpha", "0.5"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let l = &o.lines()[0];
    assert_eq!(l["value"], 3.0);
    assert_eq!(l["point_masses"], 4);
    assert_eq!(l["intervals"], 0);
}

#[test]
fn integrate_delta_warns_about_alpha() {
    let c = config("three-delta.json", THREE);
    let o = tscale(&["integrate", "--config", &c, "--kind", "delta", "--alpha", "0.3"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains("alpha is ignored"));
    assert_eq!(o.lines()[0]["value"], 1.0);
    assert_eq!(o.lines()[0]["alpha"], Value::Null);
}

#[test]
fn integrate_empty_range_and_bad_bounds() {
    let c = config("three-bounds.json", THREE);
    let o = tscale(&["integrate", "--config", &c, "--kind", "nabla", "--from", "1", "--to", "1"]);
    assert_eq!(o.lines()[0]["value"], 0.0);
    let o = tscale(&["integrate", "--config", &c, "--kind", "nabla", "--from", "0.5"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("not a point of the time scale"));
}

#[test]
fn integrate_on_an_interval_reports_panels() {
    let c = config(
        "mixed.json",
        r#"{"timescale":{"components":[{"interval":[0.0,1.0]},{"point":2.0}]},"functions":{"f":"exp(x)"},"tolerances":{"abs_tol":1e-12}}"#,
    );
    let o = tscale(&["integrate", "--config", &c, "--kind", "delta"]);
    let l = &o.lines()[0];
    let expect = std::f64::consts::E - 1.0 + std::f64::consts::E;
    assert!((l["value"].as_f64().unwrap() - expect).abs() < 1e-11);
    assert_eq!(l["intervals"], 1);
    assert_eq!(l["point_masses"], 1);
    assert!(l["panels"].as_u64().unwrap() >= 1);
}

#[test]
fn jensen_check_on_three_points() {
    let c = config(
        "jensen.json",
        r#"{"timescale":{"components":[{"point":1.0},{"point":2.0},{"point":3.0}]},"functions":{"f":"x^2","g":"x"},"alpha":1,"checks":[{"name":"jensen"}]}"#,
    );
    let o = tscale(&["check", "--config", &c]);
    assert_eq!(o.code, EXIT_OK);
    let l = &o.lines()[0];
    assert_eq!(l["verdict"], "Holds");
    assert_eq!(l["margin"], 0.25);
    let keys: Vec<&String> = l.as_object().unwrap().keys().collect();
    assert!(keys.iter().any(|k| *k == "inputs_digest"));
    let first = o.stdout.find("\"alpha\"").unwrap();
    let last = o.stdout.find("\"inputs_digest\"").unwrap();
    assert!(first < last);
}

#[test]
fn check_lines_follow_the_alpha_grid() {
    let c = config(
        "grid.json",
        r#"{"timescale":{"components":[{"point":1.0},{"point":2.0},{"point":3.0}]},"functions":{"f":"x^2","g":"x"},"alpha":{"from":0,"to":1,"steps":5},"checks":[{"name":"jensen"},{"name":"minkowski","p":2}]}"#,
    );
    let o = tscale(&["check", "--config", &c]);
    assert_eq!(o.code, EXIT_OK);
    let lines = o.lines();
    assert_eq!(lines.len(), 10);
    let alphas: Vec<f64> = lines[..5].iter().map(|l| l["alpha"].as_f64().unwrap()).collect();
    assert_eq!(alphas, [0.0, 0.25, 0.5, 0.75, 1.0]);
}

#[test]
fn amgm_with_equal_values() {
    let o = tscale(&["check", "amgm", "--param", "values=[4,4,4,4]", "--alpha-grid", "0:1:11"]);
    assert_eq!(o.code, EXIT_OK);
    for l in o.lines() {
        assert!(l["margin"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn parameter_and_config_errors() {
    let c = config("holder.json", r#"{"timescale":{"components":[{"interval":[0.0,1.0]}]},"functions":{"f":"x","g":"x"}}"#);
    let o = tscale(&["check", "holder", "--config", &c, "--param", "p=1"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("exponent must exceed 1"));
    assert!(o.stdout.is_empty());

    let o = tscale(&["check", "unknown", "--config", &c]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("unknown check"));

    let o = tscale(&["check", "jensen-weighted", "--config", &c]);
    assert!(o.stderr.contains("\"h\" is not defined"));

    let o = tscale(&["check", "jensen", "--config", &c, "--alpha", "1.5"]);
    assert_eq!(o.code, EXIT_USAGE);

    let bad = config("bad-expr.json", r#"{"functions":{"f":"x +* 2"}}"#);
    let o = tscale(&["check", "amgm", "--config", &bad]);
    assert_eq!(o.code, EXIT_USAGE);

    let typo = config("typo.json", r#"{"function":{}}"#);
    assert_eq!(tscale(&["check", "amgm", "--config", &typo]).code, EXIT_USAGE);

    assert_eq!(tscale(&["frobnicate"]).code, EXIT_USAGE);
}

#[test]
fn config_check_list_runs_every_entry() {
    let c = config(
        "cs.json",
        r#"{"timescale":{"components":[{"point":0.0},{"point":1.0},{"point":2.0}]},"functions":{"f":"x","g":"2-x"},"checks":[{"name":"cauchy-schwarz"},{"name":"power-sum","p":0.5}]}"#,
    );
    let o = tscale(&["check", "--config", &c]);
    assert_eq!(o.code, EXIT_OK);
    let names: Vec<String> = o.lines().iter().map(|l| l["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["cauchy-schwarz", "power-sum"]);
    assert_eq!(tscale_exit_for(&["Holds", "Violated"]), EXIT_VIOLATED);
}

fn tscale_exit_for(verdicts: &[&str]) -> i32 {
    let v: Vec<tscale::Verdict> = verdicts
        .iter()
        .map(|s| match *s {
            "Holds" => tscale::Verdict::Holds,
            "Violated" => tscale::Verdict::Violated,
            _ => tscale::Verdict::Inconclusive,
        })
        .collect();
    tscale::cli::exit_code(&v)
}

#[test]
fn exit_code_contract() {
    assert_eq!(tscale_exit_for(&[]), 0);
    assert_eq!(tscale_exit_for(&["Holds", "Holds"]), 0);
    assert_eq!(tscale_exit_for(&["Holds", "Inconclusive"]), 3);
    assert_eq!(tscale_exit_for(&["Inconclusive", "Violated"]), 1);
}

#[test]
fn repro_example_table() {
    let o = tscale(&["repro", "example-2.1"]);
    assert_eq!(o.code, EXIT_OK);
    let lines = o.lines();
    assert_eq!(lines.len(), 12);
    let mid = &lines[5];
    assert_eq!(mid["alpha"], 0.5);
    assert_eq!(mid["computed"], 1.5);
    assert_eq!(mid["closed_form"], 1.5);
    assert_eq!(lines[0]["deviation_from_h1"], 0.0);
    assert_eq!(lines[10]["deviation_from_h1"], 0.0);
    assert!(lines[11]["max_abs_deviation"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn repro_remark_values() {
    let o = tscale(&["repro", "remark-counterexample"]);
    let lines = o.lines();
    let s = &lines[0];
    assert_eq!((s["a"].as_f64(), s["b"].as_f64(), s["c"].as_f64()), (Some(3.0), Some(0.0), Some(-6.0)));
    assert_eq!((s["d"].as_f64(), s["e"].as_f64()), (Some(0.0), Some(-2.0)));
    assert_eq!(s["verdict"], "Violated");
    let a = &lines[1];
    assert!((a["lhs"].as_f64().unwrap() - 16.0 / 9.0).abs() < 1e-12);
    assert_eq!(a["rhs"], 2.0);
    assert_eq!(a["verdict"], "Holds");
}

#[test]
fn suite_is_seeded() {
    let a = tscale(&["suite", "--seed", "7", "--trials", "20"]);
    let b = tscale(&["suite", "--seed", "7", "--trials", "20"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    for l in a.lines() {
        assert_eq!(l["violated"], 0);
        assert_eq!(l["holds"], 20);
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("tscale-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("remark.jsonl");
    let o = tscale(&["repro", "remark-counterexample", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
}
