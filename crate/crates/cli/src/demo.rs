//! End-to-end run on the built-in model: structural hypotheses, the action of
//! the four linear fields on the forms, the identities they satisfy, tangency
//! of the cubic field `T` and the resulting jet counterexample.

use quadric_core::polyring::Polynomial;
use quadric_core::quadric::{HermitianForm, QuadricModel, DEFAULT_TUMANOV_BUDGET};
use quadric_core::vectorfield::example_fields;
use quadric_core::Rational;

use crate::commands::{bound_line, jet_check, structural_checks};
use crate::report::{Check, RunReport, Verdict};

const DEMO_JET_ORDER: u32 = 2;
const DEMO_MAX_WEIGHT: i32 = 4;

/// `(0, .., i·Q, .., 0)` with `Q` in slot 2.
fn third_slot(q: &Polynomial, d: usize) -> Vec<Polynomial> {
    let mut v = vec![Polynomial::zero(q.space()); d];
    v[2] = q.mul_i();
    v
}

fn combine(terms: &[(&Polynomial, i64, &[Polynomial])]) -> Vec<Polynomial> {
    let d = terms[0].2.len();
    (0..d)
        .map(|k| {
            terms
                .iter()
                .fold(Polynomial::zero(terms[0].0.space()), |acc, (p, c, v)| {
                    &acc + &(*p * &v[k]).scale_rational(&Rational::from(*c))
                })
        })
        .collect()
}

pub fn run(model: &QuadricModel) -> RunReport {
    let mut report = RunReport::new("paper-demo", vec![]);

    let shape_ok = model.n() == 4 && model.d() == 5;
    let hermitian_ok = model
        .forms()
        .iter()
        .enumerate()
        .all(|(k, f)| HermitianForm::new(f.entries().to_vec(), k).is_ok());
    let real_ok = model.form_polynomials().iter().all(Polynomial::is_conjugation_fixed);
    report.push(Check::new(
        "model-valid",
        Verdict::from_bool(shape_ok && hermitian_ok && real_ok),
        format!("n={}, d={}, Hermitian forms, real P_k", model.n(), model.d()),
    ));
    if !shape_ok {
        return report;
    }

    let mut structural = RunReport::new("", vec![]);
    let tumanov = model.tumanov_witness(DEFAULT_TUMANOV_BUDGET).ok().flatten();
    structural_checks(model, tumanov, false, &mut structural);
    let by_name = |name: &str| {
        structural
            .checks
            .iter()
            .find(|c| c.name == name)
            .cloned()
            .expect("structural check present")
    };
    for name in [
        "forms-independent",
        "tumanov-condition",
        "finite-type-two",
        "levi-nondegenerate",
    ] {
        report.push(by_name(name));
    }

    let relations = model.quadratic_syzygies();
    let expected = relations.iter().any(|r| {
        r.coeffs.len() == 3
            && r.coefficient(0, 0) == Rational::from(1)
            && r.coefficient(1, 1) == Rational::from(1)
            && r.coefficient(3, 4) == Rational::from(-4)
    });
    let mut rel = by_name("quadratic-syzygies");
    rel.name = "quadratic-relation".into();
    rel.verdict = Verdict::from_bool(expected && rel.verdict == Verdict::Pass);
    report.push(rel);

    let fields = example_fields();
    let p = model.form_polynomials();
    let act = |name: &str| fields[name].apply_to_forms(model).expect("dimensions agree");
    let (x, y, z, u) = (act("X"), act("Y"), act("Z"), act("U"));
    let action_ok = x == third_slot(&p[0], 5)
        && y == third_slot(&p[1], 5)
        && z == third_slot(&p[3], 5)
        && u == third_slot(&p[4], 5);
    report.push(Check::new(
        "forms-action",
        Verdict::from_bool(action_ok),
        "X(P), Y(P), Z(P), U(P) = (0,0,iP1,0,0), (0,0,iP2,0,0), (0,0,iP4,0,0), (0,0,iP5,0,0)",
    ));

    let identities = [
        combine(&[(&p[0], -1, &y), (&p[1], 1, &x)]),
        combine(&[(&p[0], 1, &x), (&p[1], 1, &y), (&p[4], -2, &z), (&p[3], -2, &u)]),
        combine(&[(&p[1], -2, &z), (&p[3], 2, &y)]),
        combine(&[(&p[1], -2, &u), (&p[4], 2, &y)]),
    ];
    let failing: Vec<usize> = identities
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.iter().all(Polynomial::is_zero))
        .map(|(i, _)| i + 1)
        .collect();
    report.push(Check::new(
        "action-identities",
        Verdict::from_bool(failing.is_empty()),
        if failing.is_empty() {
            "P1(-Y(P)) + P2 X(P), P1 X(P) + P2 Y(P) - 2P5 Z(P) - 2P4 U(P), -2P2 Z(P) + 2P4 Y(P), -2P2 U(P) + 2P5 Y(P) all vanish".to_string()
        } else {
            format!("identities {failing:?} do not vanish")
        },
    ));

    let t = &fields["T"];
    let residual = t.tangency_residual(model).expect("dimensions agree");
    let tangent = residual.iter().all(Polynomial::is_zero);
    let order = t.vanishing_order();
    report.push(Check::new(
        "T-tangent",
        Verdict::from_bool(tangent && order == Some(3)),
        format!("residual of T vanishes: {tangent}; coefficient order {order:?}\nT = {t}"),
    ));

    report.push(jet_check(model, DEMO_JET_ORDER, DEMO_MAX_WEIGHT));
    report.info.push(bound_line(model));
    report
}
