//! Quadric models `Im w_k = P_k(z, z̄)` and their structural checks.
//!
//! Each `P_k` comes from a Hermitian matrix `A_k` through the pairing
//! `P_k = Σ_{i,j} (A_k)_{ij} z_i z̄_j`, i.e. `zᵀ A_k z̄`. With this pairing the
//! built-in example reproduces its defining polynomials from its matrices
//! entry for entry.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{GaussianRational, Rational};
use crate::linalg::{self, SparseSystem};
use crate::polyring::{Monomial, PolyError, Polynomial, Substituter, VarSpace};

/// Default cap on the number of Tumanov grid points.
pub const DEFAULT_TUMANOV_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model dimensions must be positive (n={n}, d={d})")]
    EmptyDimension { n: usize, d: usize },
    #[error("expected {expected} forms, found {got}")]
    FormCount { expected: usize, got: usize },
    #[error("form {form}: expected {expected} rows, found {got}")]
    RowCount { form: usize, expected: usize, got: usize },
    #[error("form {form}, row {row}: expected {expected} entries, found {got}")]
    RowLength {
        form: usize,
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("form {form} is not Hermitian: entry ({row},{col}) = {a} but conj of ({col},{row}) = {b}")]
    NotHermitian {
        form: usize,
        row: usize,
        col: usize,
        a: String,
        b: String,
    },
    #[error("form index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("Tumanov grid has {points} points, over the budget of {budget}; use the randomized search instead")]
    BudgetExceeded { points: u128, budget: u64 },
    #[error("invalid model JSON: {0}")]
    Json(String),
}

/// Square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    entries: Vec<Vec<GaussianRational>>,
}

impl HermitianForm {
    #[allow(clippy::needless_range_loop)]
    /// Validates shape and Hermitian symmetry; `form` is used in diagnostics.
    pub fn new(entries: Vec<Vec<GaussianRational>>, form: usize) -> Result<Self, ModelError> {
        let n = entries.len();
        for (r, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::RowLength {
                    form: form + 1,
                    row: r + 1,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for r in 0..n {
            for c in r..n {
                let b = entries[c][r].conj();
                if entries[r][c] != b {
                    return Err(ModelError::NotHermitian {
                        form: form + 1,
                        row: r + 1,
                        col: c + 1,
                        a: entries[r][c].to_string(),
                        b: b.to_string(),
                    });
                }
            }
        }
        Ok(HermitianForm { entries })
    }

    pub fn from_ints(rows: &[&[(i64, i64)]]) -> Self {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect())
            .collect();
        HermitianForm::new(entries, 0).expect("literal form is Hermitian")
    }

    pub fn zero(n: usize) -> Self {
        HermitianForm {
            entries: vec![vec![GaussianRational::zero(); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<GaussianRational>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianRational {
        &self.entries[row][col]
    }

    pub fn scale(&self, r: &Rational) -> Self {
        HermitianForm {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.scale(r)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricModel {
    n: usize,
    d: usize,
    forms: Vec<HermitianForm>,
}

/// On-disk model layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub n: usize,
    pub d: usize,
    pub forms: Vec<Vec<Vec<GaussianRational>>>,
}

/// Relation `Σ λ_{ij} P_i P_j = 0` with `i ≤ j` (0-based keys).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRelation {
    pub coeffs: BTreeMap<(usize, usize), Rational>,
}

impl QuadraticRelation {
    pub fn expand(&self, model: &QuadricModel) -> Polynomial {
        let p = model.form_polynomials();
        let mut acc = Polynomial::zero(model.restricted_space());
        for ((i, j), l) in &self.coeffs {
            acc = &acc + &(&p[*i] * &p[*j]).scale_rational(l);
        }
        acc
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Rational {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }
}

impl std::fmt::Display for QuadraticRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (idx, ((i, j), l)) in self.coeffs.iter().enumerate() {
            let s = l.to_string();
            let (sign, body) = match s.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", s),
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let factor = if i == j {
                format!("P{}^2", i + 1)
            } else {
                format!("P{}*P{}", i + 1, j + 1)
            };
            if body == "1" {
                write!(f, "{factor}")?;
            } else {
                write!(f, "{body}*{factor}")?;
            }
        }
        write!(f, " = 0")
    }
}

impl QuadricModel {
    pub fn new(n: usize, d: usize, forms: Vec<HermitianForm>) -> Result<Self, ModelError> {
        if n == 0 || d == 0 {
            return Err(ModelError::EmptyDimension { n, d });
        }
        if forms.len() != d {
            return Err(ModelError::FormCount {
                expected: d,
                got: forms.len(),
            });
        }
        for (k, f) in forms.iter().enumerate() {
            if f.dim() != n {
                return Err(ModelError::RowCount {
                    form: k + 1,
                    expected: n,
                    got: f.dim(),
                });
            }
        }
        Ok(QuadricModel { n, d, forms })
    }

    /// The codimension-5 model in `C^9` with forms
    /// `P_1 = z_1z̄_2 + z_2z̄_1`, `P_2 = −i z_1z̄_2 + i z_2z̄_1`,
    /// `P_3 = z_3z̄_2 + z_4z̄_1 + z_2z̄_3 + z_1z̄_4`, `P_4 = |z_1|²`, `P_5 = |z_2|²`.
    pub fn example() -> Self {
        let o = (0, 0);
        let one = (1, 0);
        let forms = vec![
            HermitianForm::from_ints(&[&[o, one, o, o], &[one, o, o, o], &[o, o, o, o], &[o, o, o, o]]),
            HermitianForm::from_ints(&[&[o, (0, -1), o, o], &[(0, 1), o, o, o], &[o, o, o, o], &[o, o, o, o]]),
            HermitianForm::from_ints(&[&[o, o, o, one], &[o, o, one, o], &[o, one, o, o], &[one, o, o, o]]),
            HermitianForm::from_ints(&[&[one, o, o, o], &[o, o, o, o], &[o, o, o, o], &[o, o, o, o]]),
            HermitianForm::from_ints(&[&[o, o, o, o], &[o, one, o, o], &[o, o, o, o], &[o, o, o, o]]),
        ];
        QuadricModel::new(4, 5, forms).expect("example model is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn forms(&self) -> &[HermitianForm] {
        &self.forms
    }

    pub fn holomorphic_space(&self) -> VarSpace {
        VarSpace::holomorphic(self.n, self.d)
    }

    pub fn restricted_space(&self) -> VarSpace {
        VarSpace::real_restricted(self.n, self.d)
    }

    pub fn from_json(json: ModelJson) -> Result<Self, ModelError> {
        if json.forms.len() != json.d {
            return Err(ModelError::FormCount {
                expected: json.d,
                got: json.forms.len(),
            });
        }
        let mut forms = Vec::with_capacity(json.d);
        for (k, m) in json.forms.into_iter().enumerate() {
            if m.len() != json.n {
                return Err(ModelError::RowCount {
                    form: k + 1,
                    expected: json.n,
                    got: m.len(),
                });
            }
            forms.push(HermitianForm::new(m, k)?);
        }
        QuadricModel::new(json.n, json.d, forms)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let json: ModelJson = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        QuadricModel::from_json(json)
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            n: self.n,
            d: self.d,
            forms: self.forms.iter().map(|f| f.entries.clone()).collect(),
        }
    }

    /// `P_k = Σ (A_k)_{ij} z_i z̄_j` for 0-based `k`.
    pub fn form_polynomial(&self, k: usize) -> Result<Polynomial, ModelError> {
        let form = self.forms.get(k).ok_or(ModelError::IndexOutOfRange(k))?;
        let space = self.restricted_space();
        let mut p = Polynomial::zero(space);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut m = Monomial::one(space.num_vars());
                m.0[i] += 1;
                m.0[self.n + j] += 1;
                p.add_term(m, form.get(i, j));
            }
        }
        Ok(p)
    }

    pub fn form_polynomials(&self) -> Vec<Polynomial> {
        (0..self.d)
            .map(|k| self.form_polynomial(k).expect("index in range"))
            .collect()
    }

    pub fn substituter(&self) -> Substituter {
        Substituter::new(self.n, self.d, &self.form_polynomials()).expect("forms match the model")
    }

    /// Restriction of a holomorphic polynomial to the quadric, `w_k ↦ u_k + i·P_k`.
    pub fn substitute_w(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        self.substituter().apply(p)
    }

    /// Exact rank of the forms as vectors in `R^{2n²}`.
    pub fn forms_linearly_independent(&self) -> (bool, usize) {
        let rows: Vec<Vec<Rational>> = self
            .forms
            .iter()
            .map(|f| {
                f.entries
                    .iter()
                    .flatten()
                    .flat_map(|x| [x.re.clone(), x.im.clone()])
                    .collect()
            })
            .collect();
        let r = linalg::rank(&rows);
        (r == self.d, r)
    }

    /// Common kernel of the forms is trivial.
    pub fn levi_nondegenerate(&self) -> bool {
        let stacked: Vec<Vec<GaussianRational>> = self.forms.iter().flat_map(|f| f.entries.iter().cloned()).collect();
        linalg::rank(&stacked) == self.n
    }

    /// For quadrics, finite type with 2 as the only Hörmander number is
    /// equivalent to linear independence of the forms.
    pub fn finite_type_two(&self) -> bool {
        self.forms_linearly_independent().0
    }

    pub fn combination(&self, c: &[i64]) -> Vec<Vec<GaussianRational>> {
        let mut m = vec![vec![GaussianRational::zero(); self.n]; self.n];
        for (cj, form) in c.iter().zip(&self.forms) {
            if *cj == 0 {
                continue;
            }
            let s = Rational::from(*cj);
            for (row, frow) in m.iter_mut().zip(&form.entries) {
                for (x, a) in row.iter_mut().zip(frow) {
                    *x += &a.scale(&s);
                }
            }
        }
        m
    }

    pub fn combination_determinant(&self, c: &[i64]) -> GaussianRational {
        linalg::determinant(&self.combination(c))
    }

    /// First point of `{0..n}^d` (lexicographic) where `det Σ c_j A_j ≠ 0`.
    ///
    /// `None` is a certificate: the determinant has degree ≤ n in each
    /// `c_j`, so a nonzero one cannot vanish on the whole grid.
    pub fn tumanov_witness(&self, budget: u64) -> Result<Option<Vec<i64>>, ModelError> {
        let side = self.n as u128 + 1;
        let points = side.checked_pow(self.d as u32).unwrap_or(u128::MAX);
        if points > budget as u128 {
            return Err(ModelError::BudgetExceeded { points, budget });
        }
        let mut c = vec![0i64; self.d];
        loop {
            if !self.combination_determinant(&c).is_zero() {
                return Ok(Some(c));
            }
            // odometer, last coordinate fastest
            let mut k = self.d;
            loop {
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                if c[k] < self.n as i64 {
                    c[k] += 1;
                    break;
                }
                c[k] = 0;
            }
        }
    }

    /// Random integer probes in `[-range, range]^d`; `None` is only evidence.
    pub fn tumanov_witness_randomized(&self, trials: usize, range: i64, seed: u64) -> Option<Vec<i64>> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        (0..trials).find_map(|_| {
            let c: Vec<i64> = (0..self.d).map(|_| rng.gen_range(-range..=range)).collect();
            (!self.combination_determinant(&c).is_zero()).then_some(c)
        })
    }

    /// Canonical basis of the rational relations `Σ λ_{ij} P_i P_j = 0`,
    /// unknowns ordered `λ_11, λ_12, …, λ_1d, λ_22, …`.
    pub fn quadratic_syzygies(&self) -> Vec<QuadraticRelation> {
        let p = self.form_polynomials();
        let pairs: Vec<(usize, usize)> = (0..self.d).flat_map(|i| (i..self.d).map(move |j| (i, j))).collect();
        let mut rows: BTreeMap<Monomial, Vec<(usize, GaussianRational)>> = BTreeMap::new();
        for (col, (i, j)) in pairs.iter().enumerate() {
            let prod = &p[*i] * &p[*j];
            for (m, c) in prod.terms() {
                rows.entry(m.clone()).or_default().push((col, c.clone()));
            }
        }
        let mut sys = SparseSystem::new(pairs.len());
        for entries in rows.values() {
            sys.push_row(entries.iter().map(|(c, v)| (*c, v.re.clone())));
            sys.push_row(entries.iter().map(|(c, v)| (*c, v.im.clone())));
        }
        sys.kernel()
            .into_iter()
            .map(|v| QuadraticRelation {
                coeffs: pairs
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (*k, x))
                    .collect(),
            })
            .collect()
    }
}
