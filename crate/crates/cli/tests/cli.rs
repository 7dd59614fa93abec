use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn repo_path(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel);
    root.to_str().unwrap().to_string()
}

fn quadric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(repo_path("schemas/run_report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Runs with `--json`, validates against the schema and checks that the
/// embedded exit code matches both the verdicts and the process status.
fn json_run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = quadric(&full);
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    let c = code(&out);
    assert_eq!(v["exit_code"], c);
    let verdicts: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"].as_str().unwrap())
        .collect();
    let derived = if v.get("error").is_some() {
        2
    } else if verdicts.iter().all(|s| *s == "pass") {
        0
    } else {
        1
    };
    assert_eq!(derived, c, "{args:?}");
    (c, v)
}

fn check_named<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn check_on_example_file_passes_with_witnesses() {
    let model = repo_path("data/example_model.json");
    let (c, v) = json_run(&["check", &model]);
    assert_eq!(c, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
    let t = &check_named(&v, "tumanov-condition")["witness"];
    assert_eq!(t["c"].as_array().unwrap().len(), 5);
    assert_ne!(t["det"], "0");
    let syz = check_named(&v, "quadratic-syzygies")["witness"]
        .as_array()
        .unwrap()
        .clone();
    assert_eq!(syz.len(), 1);
    let mut triples: Vec<(u64, u64, String)> = syz[0]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["i"].as_u64().unwrap(),
                t["j"].as_u64().unwrap(),
                t["coeff"].as_str().unwrap().into(),
            )
        })
        .collect();
    triples.sort();
    assert_eq!(
        triples,
        vec![(1, 1, "1".into()), (2, 2, "1".into()), (4, 5, "-4".into())]
    );
}

#[test]
fn builtin_keyword_matches_file() {
    let (_, a) = json_run(&["check", "builtin"]);
    let (_, b) = json_run(&["check", &repo_path("data/example_model.json")]);
    assert_eq!(a["checks"], b["checks"]);
}

#[test]
fn duplicate_forms_fail_independence() {
    let (c, v) = json_run(&["check", &repo_path("data/duplicate_forms.json")]);
    assert_eq!(c, 1);
    assert_eq!(check_named(&v, "forms-independent")["verdict"], "fail");
}

#[test]
fn non_hermitian_is_an_input_error_with_coordinates() {
    let (c, v) = json_run(&["check", &repo_path("data/not_hermitian.json")]);
    assert_eq!(c, 2);
    let err = v["error"].as_str().unwrap();
    assert!(err.contains("form 3") && err.contains("(2,3)"), "{err}");
    let out = quadric(&["check", &repo_path("data/not_hermitian.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(2,3)"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("quadric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("truncated.json");
    std::fs::write(&path, "{\"n\": 4,\n \"d\": 5,\n \"forms\": [[[\"1\"").unwrap();
    let (c, v) = json_run(&["check", path.to_str().unwrap()]);
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("line 3"));
    let missing = dir.join("absent.json");
    let (c, _) = json_run(&["check", missing.to_str().unwrap()]);
    assert_eq!(c, 2);
}

#[test]
fn two_variable_model_has_no_tumanov_witness() {
    let (c, v) = json_run(&["check", &repo_path("data/two_variable_support.json")]);
    assert_eq!(c, 1);
    assert_eq!(check_named(&v, "tumanov-condition")["verdict"], "none");
    let (c, v) = json_run(&[
        "check",
        &repo_path("data/two_variable_support.json"),
        "--tumanov-random",
        "50",
    ]);
    assert_eq!(c, 1);
    assert_eq!(check_named(&v, "tumanov-condition")["verdict"], "none");
}

#[test]
fn budget_too_small_is_an_input_error() {
    let (c, v) = json_run(&["--budget", "10", "check", "builtin"]);
    assert_eq!(c, 2);
    assert!(v["error"].as_str().unwrap().contains("--tumanov-random"));
    let (c, _) = json_run(&["--budget", "10", "check", "builtin", "--tumanov-random", "20"]);
    assert_eq!(c, 0);
}

#[test]
fn tangency_of_named_fields() {
    for name in ["T", "X", "Y", "Z", "U", "E"] {
        let (c, v) = json_run(&["tangency", "builtin", name]);
        assert_eq!(c, 0, "{name}");
        let residual = v["checks"][0]["witness"]["residual"].as_array().unwrap();
        assert_eq!(residual.len(), 5);
        assert!(residual.iter().all(|r| r.as_array().unwrap().is_empty()));
    }
}

#[test]
fn nontangent_field_shows_first_component() {
    let (c, v) = json_run(&[
        "tangency",
        &repo_path("data/example_model.json"),
        &repo_path("data/nontangent_field.json"),
    ]);
    assert_eq!(c, 1);
    let detail = v["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains("R1 = -i*z1*zb2 + i*z2*zb1"), "{detail}");
    let r1 = v["checks"][0]["witness"]["residual"][0].as_array().unwrap();
    assert_eq!(r1.len(), 2);
}

#[test]
fn tangency_input_errors() {
    let (c, _) = json_run(&["tangency", "builtin", "NOPE"]);
    assert_eq!(c, 2);
    let (c, _) = json_run(&["tangency", &repo_path("data/two_variable_support.json"), "T"]);
    assert_eq!(c, 2);
}

#[test]
fn solve_low_weights() {
    let (c, v) = json_run(&["solve", "builtin", "--weights", "-2..0"]);
    assert_eq!(c, 0);
    let dims: Vec<u64> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["witness"]["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![5, 8, 17]);
    let contains = &v["checks"][2]["witness"]["contains"];
    for name in ["X", "Y", "Z", "U", "E"] {
        assert!(contains.as_array().unwrap().iter().any(|n| n == name), "{name}");
    }
}

#[test]
fn solve_weight_four_contains_t() {
    let (c, v) = json_run(&["solve", "builtin", "--weight", "4"]);
    assert_eq!(c, 0);
    let w = &v["checks"][0]["witness"];
    assert_eq!(w["weight"], 4);
    assert!(w["contains"].as_array().unwrap().iter().any(|n| n == "T"));
}

#[test]
fn solve_rejects_bad_weights() {
    let (c, _) = json_run(&["solve", "builtin", "--weight", "-3"]);
    assert_eq!(c, 2);
    let (c, _) = json_run(&["solve", "builtin", "--weights", "2..1"]);
    assert_eq!(c, 2);
    let out = quadric(&["solve", "builtin", "--weights", "garbage"]);
    assert_eq!(code(&out), 2);
    let out = quadric(&["solve", "builtin"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn jetdet_finds_cubic_witness_at_weight_four() {
    let (c, v) = json_run(&["jetdet", "builtin", "--jet-order", "2", "--max-weight", "4"]);
    assert_eq!(c, 0);
    assert!(v["info"][0]
        .as_str()
        .unwrap()
        .starts_with("published bound: k = 1 + d = 6"));
    let field = &v["checks"][0]["witness"];
    for comp in field["f"]
        .as_array()
        .unwrap()
        .iter()
        .chain(field["g"].as_array().unwrap())
    {
        for term in comp.as_array().unwrap() {
            let deg: u64 = term["exps"]
                .as_array()
                .unwrap()
                .iter()
                .map(|e| e.as_u64().unwrap())
                .sum();
            assert_eq!(deg, 3, "{term}");
        }
    }
}

#[test]
fn jetdet_none_below_weight_three() {
    let (c, v) = json_run(&["jetdet", "builtin", "--jet-order", "2", "--max-weight", "2"]);
    assert_eq!(c, 1);
    assert_eq!(v["checks"][0]["verdict"], "none");
    assert!(v["checks"][0]["detail"]
        .as_str()
        .unwrap()
        .contains("no counterexample up to weight 2"));
    let (c, _) = json_run(&["jetdet", "builtin", "--jet-order", "25", "--max-weight", "0"]);
    assert_eq!(c, 1);
}

#[test]
fn jetdet_bad_flags() {
    let out = quadric(&["jetdet", "builtin", "--jet-order", "-1", "--max-weight", "2"]);
    assert_eq!(code(&out), 2);
    let (c, _) = json_run(&["jetdet", "builtin", "--jet-order", "1", "--max-weight", "-3"]);
    assert_eq!(c, 2);
}

#[test]
fn demo_passes_and_is_deterministic() {
    let first = quadric(&["--json", "paper-demo"]);
    let second = quadric(&["--json", "paper-demo"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let (c, v) = json_run(&["paper-demo"]);
    assert_eq!(c, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);
    let text = quadric(&["paper-demo"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("all 10 checks verified"));
    assert!(text.contains("published bound"));
}
