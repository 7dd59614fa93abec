//! Holomorphic polynomial vector fields and the tangency test.
//!
//! A field `V = Σ f_j ∂/∂z_j + Σ g_k ∂/∂w_k` belongs to `hol(M,0)` when `Re V`
//! is tangent to `M = {ρ_k = 0}`, `ρ_k = (w_k − w̄_k)/(2i) − P_k(z, z̄)`.
//! Applying `V + V̄` to `ρ_k` and restricting to `M` gives the residual
//!
//! ```text
//! R_k = Im g_k − 2·Re(Σ_j f_j ∂P_k/∂z_j)      with w = u + iP
//! ```
//!
//! and the field is tangent iff every `R_k` is the zero polynomial in
//! `z, z̄, u`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{GaussianRational, Rational};
use crate::polyring::{Flavor, Grading, Monomial, PolyError, Polynomial, Substituter, TermJson, Var, VarSpace};
use crate::quadric::QuadricModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field lives in C^{fn_}×C^{fd} but the model has n={mn}, d={md}")]
    DimensionMismatch {
        fn_: usize,
        fd: usize,
        mn: usize,
        md: usize,
    },
    #[error("expected {expected} {what} coefficients, found {got}")]
    ComponentCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("coefficient must be holomorphic in (z, w)")]
    NotHolomorphic,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid field JSON: {0}")]
    Json(String),
}

/// `Σ f_j ∂/∂z_j + Σ g_k ∂/∂w_k` with holomorphic polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HoloVectorField {
    space: VarSpace,
    f: Vec<Polynomial>,
    g: Vec<Polynomial>,
}

/// On-disk field layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub n: usize,
    pub d: usize,
    pub f: Vec<Vec<TermJson>>,
    pub g: Vec<Vec<TermJson>>,
}

impl HoloVectorField {
    pub fn zero(n: usize, d: usize) -> Self {
        let space = VarSpace::holomorphic(n, d);
        HoloVectorField {
            space,
            f: vec![Polynomial::zero(space); n],
            g: vec![Polynomial::zero(space); d],
        }
    }

    pub fn new(n: usize, d: usize, f: Vec<Polynomial>, g: Vec<Polynomial>) -> Result<Self, FieldError> {
        let space = VarSpace::holomorphic(n, d);
        if f.len() != n {
            return Err(FieldError::ComponentCount {
                what: "∂/∂z",
                expected: n,
                got: f.len(),
            });
        }
        if g.len() != d {
            return Err(FieldError::ComponentCount {
                what: "∂/∂w",
                expected: d,
                got: g.len(),
            });
        }
        for p in f.iter().chain(&g) {
            if p.space().flavor != Flavor::Holomorphic {
                return Err(FieldError::NotHolomorphic);
            }
            if p.space() != space {
                return Err(PolyError::SpaceMismatch(space, p.space()).into());
            }
        }
        Ok(HoloVectorField { space, f, g })
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn d(&self) -> usize {
        self.space.d
    }

    /// Coefficient of `∂/∂z_j` (0-based).
    pub fn f(&self, j: usize) -> &Polynomial {
        &self.f[j]
    }

    /// Coefficient of `∂/∂w_k` (0-based).
    pub fn g(&self, k: usize) -> &Polynomial {
        &self.g[k]
    }

    pub fn f_all(&self) -> &[Polynomial] {
        &self.f
    }

    pub fn g_all(&self) -> &[Polynomial] {
        &self.g
    }

    pub fn set_f(&mut self, j: usize, p: Polynomial) {
        assert_eq!(p.space(), self.space);
        self.f[j] = p;
    }

    pub fn set_g(&mut self, k: usize, p: Polynomial) {
        assert_eq!(p.space(), self.space);
        self.g[k] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.components().all(Polynomial::is_zero)
    }

    fn components(&self) -> impl Iterator<Item = &Polynomial> {
        self.f.iter().chain(&self.g)
    }

    fn map(&self, mut op: impl FnMut(&Polynomial) -> Polynomial) -> Self {
        HoloVectorField {
            space: self.space,
            f: self.f.iter().map(&mut op).collect(),
            g: self.g.iter().map(&mut op).collect(),
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Self {
        assert_eq!(self.space, other.space, "vector fields over different spaces");
        HoloVectorField {
            space: self.space,
            f: self.f.iter().zip(&other.f).map(|(a, b)| op(a, b)).collect(),
            g: self.g.iter().zip(&other.g).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a holomorphic polynomial.
    pub fn mul_poly(&self, h: &Polynomial) -> Self {
        self.map(|p| p * h)
    }

    /// Minimal ordinary degree over all coefficient monomials; `None` for zero.
    pub fn vanishing_order(&self) -> Option<u32> {
        self.components().filter_map(Polynomial::vanishing_order).min()
    }

    /// Pieces of weight `μ`: `f_j` of weighted degree `μ+1`, `g_k` of `μ+2`.
    pub fn weighted_decomposition(&self) -> BTreeMap<i32, HoloVectorField> {
        let mut out: BTreeMap<i32, HoloVectorField> = BTreeMap::new();
        let (n, d) = (self.n(), self.d());
        let mut place = |mu: i32, is_f: bool, idx: usize, piece: Polynomial| {
            let field = out.entry(mu).or_insert_with(|| HoloVectorField::zero(n, d));
            if is_f {
                field.f[idx] = piece;
            } else {
                field.g[idx] = piece;
            }
        };
        for (j, p) in self.f.iter().enumerate() {
            for (deg, piece) in p.grading(Grading::Weighted) {
                place(deg as i32 - 1, true, j, piece);
            }
        }
        for (k, p) in self.g.iter().enumerate() {
            for (deg, piece) in p.grading(Grading::Weighted) {
                place(deg as i32 - 2, false, k, piece);
            }
        }
        out
    }

    /// The weight when the field is nonzero and weighted-homogeneous.
    pub fn weight(&self) -> Option<i32> {
        let parts = self.weighted_decomposition();
        match parts.len() {
            1 => parts.keys().next().copied(),
            _ => None,
        }
    }

    fn check_model(&self, model: &QuadricModel) -> Result<(), FieldError> {
        if self.n() != model.n() || self.d() != model.d() {
            return Err(FieldError::DimensionMismatch {
                fn_: self.n(),
                fd: self.d(),
                mn: model.n(),
                md: model.d(),
            });
        }
        Ok(())
    }

    pub fn apply_to_forms(&self, model: &QuadricModel) -> Result<Vec<Polynomial>, FieldError> {
        self.check_model(model)?;
        Ok(Tangency::new(model).apply_to_forms(self))
    }

    pub fn tangency_residual(&self, model: &QuadricModel) -> Result<Vec<Polynomial>, FieldError> {
        self.check_model(model)?;
        Ok(Tangency::new(model).residual(self))
    }

    pub fn is_infinitesimal_automorphism(&self, model: &QuadricModel) -> Result<bool, FieldError> {
        Ok(self.tangency_residual(model)?.iter().all(Polynomial::is_zero))
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            n: self.n(),
            d: self.d(),
            f: self.f.iter().map(Polynomial::to_json).collect(),
            g: self.g.iter().map(Polynomial::to_json).collect(),
        }
    }

    pub fn from_json(json: &FieldJson) -> Result<Self, FieldError> {
        let space = VarSpace::holomorphic(json.n, json.d);
        let f = json
            .f
            .iter()
            .map(|t| Polynomial::from_json(space, t))
            .collect::<Result<Vec<_>, _>>()?;
        let g = json
            .g
            .iter()
            .map(|t| Polynomial::from_json(space, t))
            .collect::<Result<Vec<_>, _>>()?;
        HoloVectorField::new(json.n, json.d, f, g)
    }

    pub fn from_json_str(text: &str) -> Result<Self, FieldError> {
        let json: FieldJson = serde_json::from_str(text).map_err(|e| FieldError::Json(e.to_string()))?;
        HoloVectorField::from_json(&json)
    }

    /// `Σ z_j ∂/∂z_j + 2 Σ w_k ∂/∂w_k`.
    pub fn euler(n: usize, d: usize) -> Self {
        let space = VarSpace::holomorphic(n, d);
        let mut e = HoloVectorField::zero(n, d);
        for j in 0..n {
            e.f[j] = Polynomial::var(space, Var::Z(j)).expect("in range");
        }
        for k in 0..d {
            e.g[k] = Polynomial::var(space, Var::W(k))
                .expect("in range")
                .scale(&GaussianRational::from(2));
        }
        e
    }
}

impl fmt::Display for HoloVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, p) in self.f.iter().enumerate() {
            if !p.is_zero() {
                parts.push(format!("({p}) d/dz{}", j + 1));
            }
        }
        for (k, p) in self.g.iter().enumerate() {
            if !p.is_zero() {
                parts.push(format!("({p}) d/dw{}", k + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HoloVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloVectorField({self})")
    }
}

/// Precomputed restriction map and form derivatives for one model.
pub struct Tangency {
    n: usize,
    d: usize,
    subst: Substituter,
    /// `dforms[k][j] = ∂P_k/∂z_j`
    dforms: Vec<Vec<Polynomial>>,
}

impl Tangency {
    pub fn new(model: &QuadricModel) -> Self {
        let forms = model.form_polynomials();
        let dforms = forms
            .iter()
            .map(|p| {
                (0..model.n())
                    .map(|j| p.partial_derivative(Var::Z(j)).expect("z variable"))
                    .collect()
            })
            .collect();
        Tangency {
            n: model.n(),
            d: model.d(),
            subst: model.substituter(),
            dforms,
        }
    }

    pub fn restrict(&mut self, p: &Polynomial) -> Polynomial {
        self.subst.apply(p).expect("dimensions checked")
    }

    pub fn restrict_monomial(&mut self, m: &Monomial) -> Polynomial {
        self.subst.apply_monomial(m)
    }

    /// `∂P_k/∂z_j`.
    pub fn form_derivative(&self, k: usize, j: usize) -> &Polynomial {
        &self.dforms[k][j]
    }

    pub fn apply_to_forms(&mut self, v: &HoloVectorField) -> Vec<Polynomial> {
        let restricted: Vec<Polynomial> = v.f.iter().map(|p| self.restrict(p)).collect();
        (0..self.d)
            .map(|k| {
                let mut acc = Polynomial::zero(self.subst.target());
                for (j, fj) in restricted.iter().enumerate() {
                    if !fj.is_zero() {
                        acc = &acc + &(fj * &self.dforms[k][j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn residual(&mut self, v: &HoloVectorField) -> Vec<Polynomial> {
        let action = self.apply_to_forms(v);
        let two = Rational::from(2);
        (0..self.d)
            .map(|k| {
                let img = self.restrict(&v.g[k]).imag_part().expect("real-restricted");
                let re = action[k].real_part().expect("real-restricted");
                &img - &re.scale_rational(&two)
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Names accepted by [`example_field`], in display order.
pub const EXAMPLE_FIELD_NAMES: [&str; 10] = ["X", "Y", "Z", "U", "Y0", "Y1", "Z1", "U1", "T", "E"];

/// The named fields on `C^4 × C^5` that act on the built-in example model.
pub fn example_fields() -> BTreeMap<&'static str, HoloVectorField> {
    let (n, d) = (4, 5);
    let space = VarSpace::holomorphic(n, d);
    let z = |j: usize| Polynomial::var(space, Var::Z(j)).expect("in range");
    let w = |k: usize| Polynomial::var(space, Var::W(k)).expect("in range");
    let c = |s: &str| s.parse::<GaussianRational>().expect("literal");
    let linear = |entries: &[(usize, usize, &str)]| {
        // (target j, source z index, coefficient)
        let mut v = HoloVectorField::zero(n, d);
        for &(j, src, coeff) in entries {
            let p = &v.f[j] + &z(src).scale(&c(coeff));
            v.f[j] = p;
        }
        v
    };

    let x = linear(&[(2, 0, "i"), (3, 1, "i")]);
    let y = linear(&[(2, 0, "1"), (3, 1, "-1")]);
    let zf = linear(&[(3, 0, "i")]);
    let u = linear(&[(2, 1, "i")]);
    let y0 = y.scale(&c("-1"));
    let y1 = y.scale(&c("2"));
    let z1 = zf.scale(&c("-2"));
    let u1 = u.scale(&c("-2"));
    let half = c("1/2");
    let t = [
        y0.mul_poly(&w(0).pow(2).scale(&half)),
        y.mul_poly(&w(1).pow(2).scale(&half)),
        x.mul_poly(&(&w(0) * &w(1))),
        z1.mul_poly(&(&w(1) * &w(4))),
        u1.mul_poly(&(&w(1) * &w(3))),
        y1.mul_poly(&(&w(3) * &w(4))),
    ]
    .iter()
    .fold(HoloVectorField::zero(n, d), |acc, term| acc.add(term));

    BTreeMap::from([
        ("X", x),
        ("Y", y),
        ("Z", zf),
        ("U", u),
        ("Y0", y0),
        ("Y1", y1),
        ("Z1", z1),
        ("U1", u1),
        ("T", t),
        ("E", HoloVectorField::euler(n, d)),
    ])
}

pub fn example_field(name: &str) -> Option<HoloVectorField> {
    example_fields().remove(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn model() -> QuadricModel {
        QuadricModel::example()
    }

    fn only_third(q: &Polynomial) -> Vec<Polynomial> {
        let s = q.space();
        let mut v = vec![Polynomial::zero(s); 5];
        v[2] = q.clone();
        v
    }

    fn negative_control() -> HoloVectorField {
        let mut v = HoloVectorField::zero(4, 5);
        let s = v.space();
        v.set_f(0, Polynomial::var(s, Var::Z(0)).unwrap().scale(&c("i")));
        v
    }

    #[test]
    fn x_coefficients() {
        let x = example_field("X").unwrap();
        let s = x.space();
        assert_eq!(x.f(2), &Polynomial::var(s, Var::Z(0)).unwrap().scale(&c("i")));
        assert!(x.f(0).is_zero() && x.f(1).is_zero());
        assert!(x.g_all().iter().all(Polynomial::is_zero));
    }

    #[test]
    fn scaled_copies_add_up() {
        let f = example_fields();
        assert_eq!(f["Y1"].add(&f["Y0"]), f["Y"]);
    }

    #[test]
    fn action_on_forms() {
        let m = model();
        let p = m.form_polynomials();
        let cases = [("X", 0), ("Y", 1), ("Z", 3), ("U", 4)];
        for (name, q) in cases {
            let got = example_field(name).unwrap().apply_to_forms(&m).unwrap();
            assert_eq!(got, only_third(&p[q].mul_i()), "{name}");
        }
        let zero = HoloVectorField::zero(4, 5).apply_to_forms(&m).unwrap();
        assert!(zero.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn example_fields_are_tangent() {
        let m = model();
        for (name, v) in example_fields() {
            assert!(v.is_infinitesimal_automorphism(&m).unwrap(), "{name}");
        }
    }

    #[test]
    fn negative_control_is_rejected() {
        let m = model();
        let v = negative_control();
        let r = v.tangency_residual(&m).unwrap();
        // R_1 = −2 Re(i z_1 z̄_2) = −i z_1 z̄_2 + i z_2 z̄_1
        let s = m.restricted_space();
        let zz = |i, j| &Polynomial::var(s, Var::Z(i)).unwrap() * &Polynomial::var(s, Var::Zbar(j)).unwrap();
        assert_eq!(r[0], &zz(1, 0).scale(&c("i")) - &zz(0, 1).scale(&c("i")));
        assert!(!v.is_infinitesimal_automorphism(&m).unwrap());
    }

    #[test]
    fn orders_and_weights() {
        let f = example_fields();
        let t = &f["T"];
        assert_eq!(t.vanishing_order(), Some(3));
        assert_eq!(t.weight(), Some(4));
        assert_eq!(f["X"].vanishing_order(), Some(1));
        assert_eq!(f["X"].weight(), Some(0));
        assert_eq!(f["E"].weight(), Some(0));
        assert_eq!(HoloVectorField::zero(4, 5).vanishing_order(), None);
        assert!(HoloVectorField::zero(4, 5).weighted_decomposition().is_empty());
        let mixed = f["X"].add(t);
        let parts = mixed.weighted_decomposition();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 4]);
        assert_eq!(parts[&4], *t);
    }

    #[test]
    fn dimension_mismatch() {
        let v = HoloVectorField::zero(2, 1);
        assert!(matches!(
            v.tangency_residual(&model()),
            Err(FieldError::DimensionMismatch { .. })
        ));
        let s = VarSpace::holomorphic(4, 5);
        assert!(HoloVectorField::new(4, 5, vec![Polynomial::zero(s); 3], vec![Polynomial::zero(s); 5]).is_err());
        let rr = VarSpace::real_restricted(4, 5);
        assert_eq!(
            HoloVectorField::new(4, 5, vec![Polynomial::zero(rr); 4], vec![Polynomial::zero(s); 5]),
            Err(FieldError::NotHolomorphic)
        );
    }

    #[test]
    fn json_round_trip() {
        let t = example_field("T").unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(HoloVectorField::from_json_str(&text).unwrap(), t);
        assert!(HoloVectorField::from_json_str(r#"{"n":1,"d":1,"f":[],"g":[[]]}"#).is_err());
        assert!(HoloVectorField::from_json_str(r#"{"n":1,"d":1,"f":[[{"exps":[1],"coeff":"1"}]],"g":[[]]}"#).is_err());
    }
}
