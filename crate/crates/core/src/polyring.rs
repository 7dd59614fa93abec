//! Sparse multivariate polynomials over `Q(i)`.
//!
//! Two variable spaces share one representation:
//!
//! * holomorphic: `z_1..z_n, w_1..w_d`
//! * real-restricted: `z_1..z_n, z̄_1..z̄_n, u_1..u_d`
//!
//! where `u_k` stands for `Re w_k` on the quadric. Conjugation only exists in
//! the real-restricted space; it swaps `z_j` with `z̄_j` and fixes `u_k`.
//! Under the weighted grading `z`, `z̄` carry weight 1 and `w`, `u` weight 2.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable spaces differ: {0} vs {1}")]
    SpaceMismatch(VarSpace, VarSpace),
    #[error("conjugation is not defined on the holomorphic ring")]
    HolomorphicConjugate,
    #[error("variable {var:?} is not part of {space}")]
    UnknownVariable { var: Var, space: VarSpace },
    #[error("expected a {expected:?} polynomial, got {got:?}")]
    WrongFlavor { expected: Flavor, got: Flavor },
    #[error("expected {expected} substitution forms, got {got}")]
    FormCount { expected: usize, got: usize },
    #[error("term {term}: exponent vector has length {got}, expected {expected}")]
    ExponentLength { term: usize, got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Holomorphic,
    RealRestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarSpace {
    pub n: usize,
    pub d: usize,
    pub flavor: Flavor,
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.flavor {
            Flavor::Holomorphic => "holomorphic",
            Flavor::RealRestricted => "real-restricted",
        };
        write!(f, "{kind}(n={}, d={})", self.n, self.d)
    }
}

/// Variable identifier, 0-based within its block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Z(usize),
    Zbar(usize),
    W(usize),
    U(usize),
}

impl VarSpace {
    pub fn holomorphic(n: usize, d: usize) -> Self {
        VarSpace {
            n,
            d,
            flavor: Flavor::Holomorphic,
        }
    }

    pub fn real_restricted(n: usize, d: usize) -> Self {
        VarSpace {
            n,
            d,
            flavor: Flavor::RealRestricted,
        }
    }

    pub fn num_vars(&self) -> usize {
        match self.flavor {
            Flavor::Holomorphic => self.n + self.d,
            Flavor::RealRestricted => 2 * self.n + self.d,
        }
    }

    pub fn index(&self, var: Var) -> Result<usize, PolyError> {
        let bad = || PolyError::UnknownVariable { var, space: *self };
        match (self.flavor, var) {
            (_, Var::Z(j)) if j < self.n => Ok(j),
            (Flavor::RealRestricted, Var::Zbar(j)) if j < self.n => Ok(self.n + j),
            (Flavor::Holomorphic, Var::W(k)) if k < self.d => Ok(self.n + k),
            (Flavor::RealRestricted, Var::U(k)) if k < self.d => Ok(2 * self.n + k),
            _ => Err(bad()),
        }
    }

    pub fn var_at(&self, idx: usize) -> Var {
        match self.flavor {
            Flavor::Holomorphic if idx < self.n => Var::Z(idx),
            Flavor::Holomorphic => Var::W(idx - self.n),
            Flavor::RealRestricted if idx < self.n => Var::Z(idx),
            Flavor::RealRestricted if idx < 2 * self.n => Var::Zbar(idx - self.n),
            Flavor::RealRestricted => Var::U(idx - 2 * self.n),
        }
    }

    /// Weight of the variable at `idx` under the weighted grading.
    pub fn weight(&self, idx: usize) -> u32 {
        let z_block = match self.flavor {
            Flavor::Holomorphic => self.n,
            Flavor::RealRestricted => 2 * self.n,
        };
        if idx < z_block {
            1
        } else {
            2
        }
    }

    pub fn var_name(&self, idx: usize) -> String {
        match self.var_at(idx) {
            Var::Z(j) => format!("z{}", j + 1),
            Var::Zbar(j) => format!("zb{}", j + 1),
            Var::W(k) => format!("w{}", k + 1),
            Var::U(k) => format!("u{}", k + 1),
        }
    }

    /// The real-restricted space over the same dimensions.
    pub fn restricted(&self) -> VarSpace {
        VarSpace::real_restricted(self.n, self.d)
    }
}

/// Exponent vector in the fixed variable order of its space.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the earliest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, space: &VarSpace) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as u32 * space.weight(i))
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Swaps the `z` and `z̄` blocks (real-restricted layout).
    pub fn conjugate(&self, n: usize) -> Monomial {
        let mut e = self.0.clone();
        let (z, rest) = e.split_at_mut(n);
        z.swap_with_slice(&mut rest[..n]);
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Ordinary,
    Weighted,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    space: VarSpace,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero(space: VarSpace) -> Self {
        Polynomial {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: VarSpace, c: GaussianRational) -> Self {
        Polynomial::monomial(space, Monomial::one(space.num_vars()), c)
    }

    pub fn monomial(space: VarSpace, m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.0.len(), space.num_vars(), "monomial length mismatch");
        let mut p = Polynomial::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(space: VarSpace, var: Var) -> Result<Self, PolyError> {
        let idx = space.index(var)?;
        let mut m = Monomial::one(space.num_vars());
        m.0[idx] = 1;
        Ok(Polynomial::monomial(space, m, GaussianRational::one()))
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(space: VarSpace, terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Polynomial::zero(space);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.space.num_vars());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_space(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.space != other.space {
            return Err(PolyError::SpaceMismatch(self.space, other.space));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_space(other)?;
        let mut acc: HashMap<Monomial, GaussianRational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                *acc.entry(ma.mul(mb)).or_default() += &c;
            }
        }
        Ok(Polynomial {
            space: self.space,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.space, GaussianRational::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.space);
        }
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Polynomial {
        self.scale(&GaussianRational::real(r.clone()))
    }

    pub fn mul_i(&self) -> Polynomial {
        Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul_i())).collect(),
        }
    }

    /// Swaps `z_j ↔ z̄_j`, fixes `u_k` and conjugates every coefficient.
    pub fn conjugate(&self) -> Result<Polynomial, PolyError> {
        if self.space.flavor != Flavor::RealRestricted {
            return Err(PolyError::HolomorphicConjugate);
        }
        let n = self.space.n;
        Ok(Polynomial {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.conjugate(n), c.conj())).collect(),
        })
    }

    pub fn is_conjugation_fixed(&self) -> bool {
        self.conjugate().map(|c| &c == self).unwrap_or(false)
    }

    pub fn partial_derivative(&self, var: Var) -> Result<Polynomial, PolyError> {
        let idx = self.space.index(var)?;
        let mut out = Polynomial::zero(self.space);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[idx] -= 1;
            out.add_term(dm, &c.scale(&Rational::from(e as i64)));
        }
        Ok(out)
    }

    /// `((p + p̄)/2, (p − p̄)/(2i))`, both conjugation-fixed.
    pub fn real_imag_parts(&self) -> Result<(Polynomial, Polynomial), PolyError> {
        let conj = self.conjugate()?;
        let half = Rational::new(1, 2).expect("nonzero");
        let re = (self + &conj).scale_rational(&half);
        // (p − p̄)/(2i) = −i·(p − p̄)/2
        let im = (self - &conj).scale(&GaussianRational::new(Rational::zero(), -half));
        Ok((re, im))
    }

    pub fn real_part(&self) -> Result<Polynomial, PolyError> {
        Ok(self.real_imag_parts()?.0)
    }

    pub fn imag_part(&self) -> Result<Polynomial, PolyError> {
        Ok(self.real_imag_parts()?.1)
    }

    /// Splits into homogeneous pieces keyed by degree.
    pub fn grading(&self, grading: Grading) -> BTreeMap<u32, Polynomial> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let deg = match grading {
                Grading::Ordinary => m.degree(),
                Grading::Weighted => m.weighted_degree(&self.space),
            };
            parts
                .entry(deg)
                .or_insert_with(|| Polynomial::zero(self.space))
                .add_term(m.clone(), c);
        }
        parts
    }

    /// Minimal ordinary degree present; `None` for the zero polynomial.
    pub fn vanishing_order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Weighted degree if the polynomial is nonzero and weighted-homogeneous.
    pub fn weighted_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(&self.space));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Replaces each `w_k` by `u_k + i·forms[k]`; `forms` live in the
    /// real-restricted space of the same dimensions.
    pub fn substitute_w(&self, forms: &[Polynomial]) -> Result<Polynomial, PolyError> {
        Substituter::new(self.space.n, self.space.d, forms)?.apply(self)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson {
                exps: m.0.iter().map(|&e| e as u32).collect(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_json(space: VarSpace, terms: &[TermJson]) -> Result<Polynomial, PolyError> {
        let nv = space.num_vars();
        let mut p = Polynomial::zero(space);
        for (i, t) in terms.iter().enumerate() {
            if t.exps.len() != nv {
                return Err(PolyError::ExponentLength {
                    term: i,
                    got: t.exps.len(),
                    expected: nv,
                });
            }
            let m = Monomial(t.exps.iter().map(|&e| e as u16).collect());
            p.add_term(m, &t.coeff);
        }
        Ok(p)
    }
}

/// One term of the JSON polynomial form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: GaussianRational,
}

/// Restriction `w_k ↦ u_k + i·P_k` with cached powers.
pub struct Substituter {
    n: usize,
    d: usize,
    target: VarSpace,
    bases: Vec<Polynomial>,
    powers: HashMap<(usize, u16), Polynomial>,
}

impl Substituter {
    pub fn new(n: usize, d: usize, forms: &[Polynomial]) -> Result<Self, PolyError> {
        if forms.len() != d {
            return Err(PolyError::FormCount {
                expected: d,
                got: forms.len(),
            });
        }
        let target = VarSpace::real_restricted(n, d);
        let mut bases = Vec::with_capacity(d);
        for (k, p) in forms.iter().enumerate() {
            if p.space != target {
                return Err(PolyError::SpaceMismatch(target, p.space));
            }
            bases.push(&Polynomial::var(target, Var::U(k))? + &p.mul_i());
        }
        Ok(Substituter {
            n,
            d,
            target,
            bases,
            powers: HashMap::new(),
        })
    }

    pub fn target(&self) -> VarSpace {
        self.target
    }

    fn power(&mut self, k: usize, e: u16) -> &Polynomial {
        if !self.powers.contains_key(&(k, e)) {
            let p = self.bases[k].pow(e as u32);
            self.powers.insert((k, e), p);
        }
        &self.powers[&(k, e)]
    }

    pub fn apply_monomial(&mut self, m: &Monomial) -> Polynomial {
        let mut zpart = Monomial::one(self.target.num_vars());
        zpart.0[..self.n].copy_from_slice(&m.0[..self.n]);
        let mut out = Polynomial::monomial(self.target, zpart, GaussianRational::one());
        for k in 0..self.d {
            let e = m.0[self.n + k];
            if e > 0 {
                out = &out * self.power(k, e);
            }
        }
        out
    }

    pub fn apply(&mut self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        let expected = VarSpace::holomorphic(self.n, self.d);
        if p.space != expected {
            if p.space.flavor != Flavor::Holomorphic {
                return Err(PolyError::WrongFlavor {
                    expected: Flavor::Holomorphic,
                    got: p.space.flavor,
                });
            }
            return Err(PolyError::SpaceMismatch(expected, p.space));
        }
        let mut out = Polynomial::zero(self.target);
        for (m, c) in &p.terms {
            let image = self.apply_monomial(m);
            for (mm, cc) in image.terms {
                out.add_term(mm, &(&cc * c));
            }
        }
        Ok(out)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        /// Panics when the variable spaces differ.
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial space mismatch")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&GaussianRational::from(-1))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    /// Human-readable form, leading term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(idx, &e)| {
                        let name = self.space.var_name(idx);
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
            let coeff = c.to_string();
            let complex = !c.re.is_zero() && !c.im.is_zero();
            let (sign, body) = match coeff.strip_prefix('-') {
                Some(rest) if !complex => ("-", rest.to_string()),
                _ => ("+", coeff.clone()),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let body = if complex { format!("({body})") } else { body };
            if vars.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{body}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({self})", self.space)
    }
}
