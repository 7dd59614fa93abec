//! Graded components of `hol(M,0)` for quadric models.
//!
//! For a quadric the tangency condition preserves weighted degree, so the
//! algebra splits into components `g_μ` of fields whose `f_j` are
//! weighted-homogeneous of degree `μ+1` and `g_k` of degree `μ+2`. Each
//! component is the kernel of a rational linear system in the real and
//! imaginary parts of the unknown coefficients.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::exactnum::{GaussianRational, Rational};
use crate::linalg::{self, SparseSystem};
use crate::polyring::{Monomial, Polynomial, VarSpace};
use crate::quadric::QuadricModel;
use crate::vectorfield::{FieldJson, HoloVectorField, Tangency};

pub type ExactLinearSystem = SparseSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// Coefficient of `∂/∂z_j`.
    F(usize),
    /// Coefficient of `∂/∂w_k`.
    G(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub component: Component,
    pub monomial: Monomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayoutOrder {
    /// Component index, then ascending graded-lex monomial order.
    Canonical,
    /// The canonical order reversed; only used to cross-check dimensions.
    Reversed,
}

/// Unknown coefficients of a weight-`μ` field. Slot `s` owns the real
/// unknowns `2s` (real part) and `2s + 1` (imaginary part).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownLayout {
    pub weight: i32,
    pub n: usize,
    pub d: usize,
    pub slots: Vec<Slot>,
}

/// All holomorphic monomials of the given weighted degree, ascending.
pub fn weighted_monomials(space: &VarSpace, degree: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if degree < 0 {
        return out;
    }
    let nv = space.num_vars();
    let mut exps = vec![0u16; nv];
    fn rec(space: &VarSpace, idx: usize, left: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if idx == exps.len() {
            if left == 0 {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let w = space.weight(idx);
        for e in 0..=left / w {
            exps[idx] = e as u16;
            rec(space, idx + 1, left - e * w, exps, out);
        }
        exps[idx] = 0;
    }
    rec(space, 0, degree as u32, &mut exps, &mut out);
    out.sort();
    out
}

impl UnknownLayout {
    pub fn new(n: usize, d: usize, weight: i32, order: LayoutOrder) -> Self {
        let space = VarSpace::holomorphic(n, d);
        let mut slots = Vec::new();
        let f_monos = weighted_monomials(&space, weight + 1);
        let g_monos = weighted_monomials(&space, weight + 2);
        for j in 0..n {
            slots.extend(f_monos.iter().map(|m| Slot {
                component: Component::F(j),
                monomial: m.clone(),
            }));
        }
        for k in 0..d {
            slots.extend(g_monos.iter().map(|m| Slot {
                component: Component::G(k),
                monomial: m.clone(),
            }));
        }
        if order == LayoutOrder::Reversed {
            slots.reverse();
        }
        UnknownLayout { weight, n, d, slots }
    }

    pub fn num_unknowns(&self) -> usize {
        2 * self.slots.len()
    }

    pub fn f_slot_count(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| matches!(s.component, Component::F(_)))
            .count()
    }

    pub fn g_slot_count(&self) -> usize {
        self.slots.len() - self.f_slot_count()
    }

    pub fn field_from_vector(&self, x: &[Rational]) -> HoloVectorField {
        assert_eq!(x.len(), self.num_unknowns());
        let mut v = HoloVectorField::zero(self.n, self.d);
        let space = v.space();
        let mut f = vec![Polynomial::zero(space); self.n];
        let mut g = vec![Polynomial::zero(space); self.d];
        for (s, slot) in self.slots.iter().enumerate() {
            let c = GaussianRational::new(x[2 * s].clone(), x[2 * s + 1].clone());
            let target = match slot.component {
                Component::F(j) => &mut f[j],
                Component::G(k) => &mut g[k],
            };
            target.add_term(slot.monomial.clone(), &c);
        }
        for (j, p) in f.into_iter().enumerate() {
            v.set_f(j, p);
        }
        for (k, p) in g.into_iter().enumerate() {
            v.set_g(k, p);
        }
        v
    }

    /// Coefficient vector of `v`, or `None` if `v` has a term outside the layout.
    pub fn vector_from_field(&self, v: &HoloVectorField) -> Option<Vec<Rational>> {
        if v.n() != self.n || v.d() != self.d {
            return None;
        }
        let index: HashMap<(Component, &Monomial), usize> = self
            .slots
            .iter()
            .enumerate()
            .map(|(s, slot)| ((slot.component, &slot.monomial), s))
            .collect();
        let mut x = vec![Rational::zero(); self.num_unknowns()];
        let comps = (0..self.n)
            .map(|j| (Component::F(j), v.f(j)))
            .chain((0..self.d).map(|k| (Component::G(k), v.g(k))));
        for (comp, p) in comps {
            for (m, c) in p.terms() {
                let s = *index.get(&(comp, m))?;
                x[2 * s] = c.re.clone();
                x[2 * s + 1] = c.im.clone();
            }
        }
        Some(x)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct RowKey {
    k: usize,
    monomial: Monomial,
    imaginary: bool,
}

/// Residual columns of one real unknown: `(k, polynomial)` pairs.
fn unknown_residuals(tangency: &mut Tangency, slot: &Slot, d: usize) -> [Vec<(usize, Polynomial)>; 2] {
    let restricted = tangency.restrict_monomial(&slot.monomial);
    match slot.component {
        Component::G(k) => {
            // Im(c·s): c = 1 gives Im s, c = i gives Re s.
            let (re, im) = restricted.real_imag_parts().expect("real-restricted");
            [vec![(k, im)], vec![(k, re)]]
        }
        Component::F(j) => {
            // −2 Re(c·a_k): c = 1 gives −2 Re a_k, c = i gives 2 Im a_k.
            let two = Rational::from(2);
            let mut out_re = Vec::new();
            let mut out_im = Vec::new();
            for k in 0..d {
                let dp = tangency.form_derivative(k, j);
                if dp.is_zero() {
                    continue;
                }
                let a = &restricted * dp;
                let (re, im) = a.real_imag_parts().expect("real-restricted");
                out_re.push((k, re.scale_rational(&-&two)));
                out_im.push((k, im.scale_rational(&two)));
            }
            [out_re, out_im]
        }
    }
}

/// Linear system whose kernel is `g_μ` in the given layout.
pub fn build_system_with_order(
    model: &QuadricModel,
    weight: i32,
    order: LayoutOrder,
) -> (UnknownLayout, ExactLinearSystem) {
    assert!(weight >= -2, "weights start at -2");
    let layout = UnknownLayout::new(model.n(), model.d(), weight, order);
    let mut tangency = Tangency::new(model);
    let n = model.n();
    let mut rows: HashMap<RowKey, Vec<(usize, Rational)>> = HashMap::new();
    for (s, slot) in layout.slots.iter().enumerate() {
        let cols = unknown_residuals(&mut tangency, slot, model.d());
        for (part, residuals) in cols.into_iter().enumerate() {
            let col = 2 * s + part;
            for (k, poly) in residuals {
                for (m, c) in poly.terms() {
                    // Residuals are conjugation-fixed, so each conjugate pair
                    // of monomials carries the same equations.
                    let conj = m.conjugate(n);
                    if conj < *m {
                        continue;
                    }
                    for (imaginary, v) in [(false, &c.re), (true, &c.im)] {
                        if v.is_zero() {
                            continue;
                        }
                        rows.entry(RowKey {
                            k,
                            monomial: m.clone(),
                            imaginary,
                        })
                        .or_default()
                        .push((col, v.clone()));
                    }
                }
            }
        }
    }
    let mut keys: Vec<RowKey> = rows.keys().cloned().collect();
    keys.sort();
    let mut system = SparseSystem::new(layout.num_unknowns());
    for key in keys {
        let entries = rows.remove(&key).expect("key present");
        system.push_row(entries);
    }
    (layout, system)
}

pub fn build_system(model: &QuadricModel, weight: i32) -> (UnknownLayout, ExactLinearSystem) {
    build_system_with_order(model, weight, LayoutOrder::Canonical)
}

pub fn exact_kernel(system: &ExactLinearSystem) -> Vec<Vec<Rational>> {
    system.kernel()
}

/// One graded component with its canonical basis.
#[derive(Debug, Clone)]
pub struct GradedComponentReport {
    pub weight: i32,
    pub real_dimension: usize,
    pub basis: Vec<HoloVectorField>,
    layout: UnknownLayout,
    kernel: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub weight: i32,
    pub dimension: usize,
    pub basis: Vec<FieldJson>,
}

impl GradedComponentReport {
    pub fn layout(&self) -> &UnknownLayout {
        &self.layout
    }

    pub fn kernel(&self) -> &[Vec<Rational>] {
        &self.kernel
    }

    /// Whether `v` is a real-linear combination of the basis.
    pub fn contains(&self, v: &HoloVectorField) -> bool {
        match self.layout.vector_from_field(v) {
            Some(x) => linalg::in_rref_span(&self.kernel, &x),
            None => false,
        }
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            weight: self.weight,
            dimension: self.real_dimension,
            basis: self.basis.iter().map(HoloVectorField::to_json).collect(),
        }
    }
}

pub fn graded_component_with_order(model: &QuadricModel, weight: i32, order: LayoutOrder) -> GradedComponentReport {
    let (layout, system) = build_system_with_order(model, weight, order);
    let kernel = exact_kernel(&system);
    let basis = kernel.iter().map(|x| layout.field_from_vector(x)).collect();
    GradedComponentReport {
        weight,
        real_dimension: kernel.len(),
        basis,
        layout,
        kernel,
    }
}

pub fn graded_component(model: &QuadricModel, weight: i32) -> GradedComponentReport {
    graded_component_with_order(model, weight, LayoutOrder::Canonical)
}

/// First nonzero element of `hol(M,0)` of weight `≤ max_weight` whose
/// coefficients vanish to order `≥ jet_order + 1`, scanning weights upward.
pub fn jet_counterexample(model: &QuadricModel, jet_order: u32, max_weight: i32) -> Option<HoloVectorField> {
    (-2..=max_weight).find_map(|mu| {
        let (layout, mut system) = build_system(model, mu);
        for (s, slot) in layout.slots.iter().enumerate() {
            if slot.monomial.degree() <= jet_order {
                system.push_row([(2 * s, Rational::one())]);
                system.push_row([(2 * s + 1, Rational::one())]);
            }
        }
        exact_kernel(&system).first().map(|x| layout.field_from_vector(x))
    })
}
