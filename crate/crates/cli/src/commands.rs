use std::fs;
use std::ops::RangeInclusive;

use quadric_core::autsolver::graded_component;
use quadric_core::polyring::Polynomial;
use quadric_core::quadric::ModelError;
use quadric_core::vectorfield::{example_fields, EXAMPLE_FIELD_NAMES};
use quadric_core::{jet_counterexample, HoloVectorField, QuadricModel};
use serde_json::{json, Value};

use crate::report::{Check, RunReport, Verdict};

/// Model argument naming the built-in example instead of a file.
pub const BUILTIN_MODEL: &str = "builtin";

/// Offending monomials shown per residual component.
const SHOWN_TERMS: usize = 5;

pub fn load_model(arg: &str) -> Result<QuadricModel, String> {
    if arg == BUILTIN_MODEL {
        return Ok(QuadricModel::example());
    }
    let text = fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?;
    QuadricModel::from_json_str(&text).map_err(|e| match e {
        ModelError::Json(msg) => format!("{arg}: {msg}"),
        other => format!("{arg}: {other}"),
    })
}

/// A named example field or a field JSON file.
pub fn load_field(arg: &str) -> Result<HoloVectorField, String> {
    if let Some(v) = example_fields().remove(arg) {
        return Ok(v);
    }
    let text = fs::read_to_string(arg).map_err(|e| {
        format!(
            "{arg}: {e} (not a file, and not one of the named fields {})",
            EXAMPLE_FIELD_NAMES.join(", ")
        )
    })?;
    HoloVectorField::from_json_str(&text).map_err(|e| format!("{arg}: {e}"))
}

pub fn bound_line(model: &QuadricModel) -> String {
    format!(
        "published bound: k = 1 + d = {} jets determine automorphisms of generic models",
        1 + model.d()
    )
}

fn truncated(p: &Polynomial) -> Polynomial {
    Polynomial::from_terms(
        p.space(),
        p.terms().rev().take(SHOWN_TERMS).map(|(m, c)| (m.clone(), c.clone())),
    )
}

pub fn cmd_check(model_arg: &str, budget: u64, random_trials: Option<usize>) -> RunReport {
    let report = RunReport::new("check", vec![model_arg.to_string()]);
    let model = match load_model(model_arg) {
        Ok(m) => m,
        Err(e) => return report.fail_input(e),
    };
    let tumanov = match random_trials {
        Some(trials) => Ok(model.tumanov_witness_randomized(trials, 10 * model.n() as i64 + 10, 0)),
        None => model.tumanov_witness(budget),
    };
    let tumanov = match tumanov {
        Ok(t) => t,
        Err(e) => return report.fail_input(format!("{e} (pass --tumanov-random TRIALS)")),
    };
    let mut report = report;
    structural_checks(&model, tumanov, random_trials.is_some(), &mut report);
    report
}

/// The five structural checks shared by `check` and the demo.
pub fn structural_checks(model: &QuadricModel, tumanov: Option<Vec<i64>>, randomized: bool, report: &mut RunReport) {
    let (indep, rank) = model.forms_linearly_independent();
    report.push(Check::new(
        "forms-independent",
        Verdict::from_bool(indep),
        format!("rank {rank} of {}", model.d()),
    ));
    let generating = model.finite_type_two();
    report.push(Check::new(
        "finite-type-two",
        Verdict::from_bool(generating),
        if generating {
            "Levi generating: the forms span their space"
        } else {
            "not Levi generating: the forms are dependent"
        },
    ));
    let nondegenerate = model.levi_nondegenerate();
    report.push(Check::new(
        "levi-nondegenerate",
        Verdict::from_bool(nondegenerate),
        if nondegenerate {
            "common kernel of the forms is trivial"
        } else {
            "the forms share a nonzero kernel vector"
        },
    ));
    let tumanov_check = match tumanov {
        Some(c) => {
            let det = model.combination_determinant(&c);
            Check::new(
                "tumanov-condition",
                Verdict::from_bool(!det.is_zero()),
                format!("det(sum c_j A_j) = {det} at c = {c:?}"),
            )
            .with_witness(json!({ "c": c, "det": det.to_string() }))
        }
        None if randomized => Check::new("tumanov-condition", Verdict::None, "no witness among random probes"),
        None => Check::new(
            "tumanov-condition",
            Verdict::None,
            format!(
                "det(sum c_j A_j) vanishes on the grid {{0..{}}}^{}, hence identically",
                model.n(),
                model.d()
            ),
        ),
    };
    report.push(tumanov_check);
    let relations = model.quadratic_syzygies();
    let all_zero = relations.iter().all(|r| r.expand(model).is_zero());
    let detail = if relations.is_empty() {
        "no quadratic relations among the forms".to_string()
    } else {
        relations.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
    };
    let witness: Vec<Value> = relations
        .iter()
        .map(|r| {
            Value::Array(
                r.coeffs
                    .iter()
                    .map(|((i, j), l)| json!({ "i": i + 1, "j": j + 1, "coeff": l.to_string() }))
                    .collect(),
            )
        })
        .collect();
    report.push(
        Check::new("quadratic-syzygies", Verdict::from_bool(all_zero), detail).with_witness(Value::Array(witness)),
    );
}

pub fn cmd_tangency(model_arg: &str, field_arg: &str) -> RunReport {
    let mut report = RunReport::new("tangency", vec![model_arg.to_string(), field_arg.to_string()]);
    let model = match load_model(model_arg) {
        Ok(m) => m,
        Err(e) => return report.fail_input(e),
    };
    let field = match load_field(field_arg) {
        Ok(v) => v,
        Err(e) => return report.fail_input(e),
    };
    let residual = match field.tangency_residual(&model) {
        Ok(r) => r,
        Err(e) => return report.fail_input(e.to_string()),
    };
    let tangent = residual.iter().all(Polynomial::is_zero);
    let mut lines = Vec::new();
    let mut shown = Vec::new();
    for (k, r) in residual.iter().enumerate() {
        let t = truncated(r);
        let more = if r.num_terms() > SHOWN_TERMS { " + ..." } else { "" };
        lines.push(format!("R{} = {t}{more}", k + 1));
        shown.push(serde_json::to_value(t.to_json()).expect("terms serialize"));
    }
    let mut detail = format!("field: {field}\n");
    detail.push_str(&lines.join("\n"));
    report.push(Check::new("tangent", Verdict::from_bool(tangent), detail).with_witness(json!({ "residual": shown })));
    report
}

pub fn cmd_solve(model_arg: &str, weights: RangeInclusive<i32>) -> RunReport {
    let mut report = RunReport::new(
        "solve",
        vec![
            model_arg.to_string(),
            format!("--weights={}..{}", weights.start(), weights.end()),
        ],
    );
    if *weights.start() < -2 || weights.is_empty() {
        return report.fail_input(format!("weights must satisfy -2 <= lo <= hi, got {weights:?}"));
    }
    let model = match load_model(model_arg) {
        Ok(m) => m,
        Err(e) => return report.fail_input(e),
    };
    let named = if model == QuadricModel::example() {
        example_fields()
    } else {
        Default::default()
    };
    for mu in weights {
        let comp = graded_component(&model, mu);
        let mut detail = format!("real dimension {}", comp.real_dimension);
        for (i, v) in comp.basis.iter().enumerate() {
            detail.push_str(&format!("\nbasis[{}] = {v}", i + 1));
        }
        let members: Vec<&str> = named
            .iter()
            .filter(|(_, v)| v.weight() == Some(mu) && comp.contains(v))
            .map(|(k, _)| *k)
            .collect();
        if !members.is_empty() {
            detail.push_str(&format!("\ncontains named fields: {}", members.join(", ")));
        }
        let mut witness = serde_json::to_value(comp.to_json()).expect("report serializes");
        witness["contains"] = json!(members);
        report.push(Check::new(format!("weight {mu}"), Verdict::Pass, detail).with_witness(witness));
    }
    report
}

pub fn cmd_jetdet(model_arg: &str, jet_order: u32, max_weight: i32) -> RunReport {
    let mut report = RunReport::new(
        "jetdet",
        vec![
            model_arg.to_string(),
            format!("--jet-order={jet_order}"),
            format!("--max-weight={max_weight}"),
        ],
    );
    if max_weight < -2 {
        return report.fail_input(format!("--max-weight must be >= -2, got {max_weight}"));
    }
    let model = match load_model(model_arg) {
        Ok(m) => m,
        Err(e) => return report.fail_input(e),
    };
    report.push(jet_check(&model, jet_order, max_weight));
    report.info.push(bound_line(&model));
    report
}

pub fn jet_check(model: &QuadricModel, jet_order: u32, max_weight: i32) -> Check {
    let name = format!("jet-counterexample (k={jet_order}, W={max_weight})");
    match jet_counterexample(model, jet_order, max_weight) {
        Some(v) => {
            let ok = v.is_infinitesimal_automorphism(model).unwrap_or(false)
                && v.vanishing_order().is_some_and(|o| o > jet_order);
            let detail = format!(
                "weight {:?}, coefficients vanish to order {:?}\nwitness = {v}",
                v.weight().unwrap_or_default(),
                v.vanishing_order().unwrap_or_default()
            );
            Check::new(name, Verdict::from_bool(ok), detail)
                .with_witness(serde_json::to_value(v.to_json()).expect("field serializes"))
        }
        None => Check::new(
            name,
            Verdict::None,
            format!("no counterexample up to weight {max_weight}"),
        ),
    }
}
