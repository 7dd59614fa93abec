//! Exact linear algebra over `Q` and `Q(i)`.
//!
//! Dense matrices (forms, Levi stacks, determinants) go through fraction-free
//! Bareiss elimination. Large sparse systems from the automorphism solver
//! are scaled to primitive integer rows and eliminated fraction-free, with
//! content removal after every row operation.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{GaussianRational, Rational};

/// Minimal field interface used by the dense routines.
pub trait FieldElem: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Exact division; callers guarantee `rhs != 0`.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl FieldElem for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldElem for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Bareiss elimination in place. Returns the rank and the sign-corrected
/// last pivot (the determinant when the matrix is square and of full rank).
fn bareiss<T: FieldElem>(m: &mut [Vec<T>]) -> (usize, T, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut rank = 0;
    let mut negate = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            negate = !negate;
        }
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            let factor = m[r][col].clone();
            for c in col + 1..cols {
                let v = pivot.mul(&m[r][c]).sub(&factor.mul(&m[rank][c]));
                m[r][c] = v.div(&prev);
            }
            m[r][col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, prev, negate)
}

pub fn rank<T: FieldElem>(matrix: &[Vec<T>]) -> usize {
    let mut m = matrix.to_vec();
    bareiss(&mut m).0
}

/// Determinant of a square matrix.
pub fn determinant<T: FieldElem>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of non-square matrix");
    if n == 0 {
        return T::one();
    }
    let mut m = matrix.to_vec();
    let (rank, last, negate) = bareiss(&mut m);
    if rank < n {
        return T::zero();
    }
    // With full rank and no skipped columns, the last pivot is the determinant.
    if negate {
        last.neg()
    } else {
        last
    }
}

/// Reduced row-echelon form with unit leading entries; zero rows dropped.
pub fn rref<T: FieldElem>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = T::one().div(&m[r][col]);
        for c in col..cols {
            m[r][c] = m[r][c].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for c in col..cols {
                let v = m[i][c].sub(&f.mul(&m[r][c]));
                m[i][c] = v;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

pub fn leading_index<T: FieldElem>(v: &[T]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Whether `v` lies in the span of a basis given in reduced row-echelon form.
pub fn in_rref_span<T: FieldElem>(basis: &[Vec<T>], v: &[T]) -> bool {
    let mut v = v.to_vec();
    for b in basis {
        let Some(lead) = leading_index(b) else { continue };
        if v[lead].is_zero() {
            continue;
        }
        let f = v[lead].clone();
        for (x, y) in v.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    v.iter().all(FieldElem::is_zero)
}

type IntRow = Vec<(usize, BigInt)>;

/// Sparse linear system `A x = 0` over `Q`.
#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Rational)>] {
        &self.rows
    }

    /// Adds a row; entries may be unsorted and contain repeats or zeros.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut row: Vec<(usize, Rational)> = Vec::new();
        let mut sorted: Vec<(usize, Rational)> = entries.into_iter().collect();
        sorted.sort_by_key(|(c, _)| *c);
        for (c, v) in sorted {
            assert!(c < self.ncols, "column {c} out of range");
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += &v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|(_, v)| !v.is_zero());
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.rows.iter().all(|row| {
            let mut acc = Rational::zero();
            for (c, v) in row {
                acc += &(v * &x[*c]);
            }
            acc.is_zero()
        })
    }

    fn echelon(&self) -> Echelon {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].len());
        let mut ech = Echelon {
            pivot_of_col: vec![None; self.ncols],
            rows: Vec::new(),
        };
        for i in order {
            let mut row = to_primitive(&self.rows[i]);
            while let Some(&(lead, _)) = row.first() {
                match ech.pivot_of_col[lead] {
                    Some(p) => row = eliminate(&row, &ech.rows[p], lead),
                    None => {
                        ech.pivot_of_col[lead] = Some(ech.rows.len());
                        ech.rows.push(row);
                        break;
                    }
                }
            }
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rows.len()
    }

    /// Null-space basis in canonical reduced row-echelon form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut ech = self.echelon();
        ech.reduce();
        let mut by_free: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.ncols];
        for row in &ech.rows {
            let (lead, lead_val) = &row[0];
            for (c, v) in &row[1..] {
                let x = Rational::from(num_rational::BigRational::new(-v.clone(), lead_val.clone()));
                by_free[*c].push((*lead, x));
            }
        }
        let raw: Vec<Vec<Rational>> = (0..self.ncols)
            .filter(|&c| ech.pivot_of_col[c].is_none())
            .map(|f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                for (lead, x) in &by_free[f] {
                    v[*lead] = x.clone();
                }
                v
            })
            .collect();
        rref(&raw)
    }
}

struct Echelon {
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<IntRow>,
}

impl Echelon {
    /// Back-substitution: clears every pivot column outside its own row.
    fn reduce(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rows[i][0].0));
        for i in order {
            let mut row = std::mem::take(&mut self.rows[i]);
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                match self.pivot_of_col[col] {
                    Some(p) if p != i => {
                        row = eliminate(&row, &self.rows[p], col);
                        // entries before `col` are untouched; rescan from the same slot
                    }
                    _ => k += 1,
                }
            }
            self.rows[i] = row;
        }
    }
}

fn content_normalize(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

fn to_primitive(row: &[(usize, Rational)]) -> IntRow {
    let mut l = BigInt::one();
    for (_, v) in row {
        l = l.lcm(v.denom());
    }
    let mut out: IntRow = row.iter().map(|(c, v)| (*c, v.numer() * (&l / v.denom()))).collect();
    content_normalize(&mut out);
    out
}

/// `a·row − b·pivot` with `a, b` chosen to cancel column `col`.
fn eliminate(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let pv = &pivot
        .iter()
        .find(|(c, _)| *c == col)
        .expect("pivot has entry at its column")
        .1;
    let rv = &row.iter().find(|(c, _)| *c == col).expect("row has entry at column").1;
    let g = pv.gcd(rv);
    let a = pv / &g;
    let b = rv / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &a * &row[i - 1].1 - &b * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    content_normalize(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        if m.is_empty() {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for (j, a) in m[0].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = a * &cofactor_det(&minor);
            if j % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let cases = [
            qm(&[&[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]),
            qm(&[&[0, 2, 1], &[3, -1, 4], &[5, 0, 2]]),
            qm(&[&[1, 2], &[2, 4]]),
            qm(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
        ];
        for m in cases {
            assert_eq!(determinant(&m), cofactor_det(&m), "{m:?}");
        }
    }

    #[test]
    fn gaussian_determinant() {
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        let m = vec![vec![one.clone(), i.clone()], vec![-&i, one.clone()]];
        assert!(determinant(&m).is_zero());
        let m = vec![vec![i.clone(), one.clone()], vec![one.clone(), i.clone()]];
        assert_eq!(determinant(&m), GaussianRational::from(-2));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&qm(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
        assert_eq!(rank(&qm(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&qm(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
    }

    #[test]
    fn kernel_of_empty_system_is_standard_basis() {
        let sys = SparseSystem::new(3);
        let k = sys.kernel();
        assert_eq!(k, qm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let mut sys = SparseSystem::new(3);
        for c in 0..3 {
            sys.push_row([(c, q(1))]);
        }
        assert!(sys.kernel().is_empty());
        assert_eq!(sys.rank(), 3);
    }

    #[test]
    fn kernel_is_canonical_rref() {
        let mut sys = SparseSystem::new(4);
        sys.push_row([(0, q(2)), (1, q(-2)), (3, q(4))]);
        sys.push_row([(1, q(1)), (2, q(1))]);
        let k = sys.kernel();
        for v in &k {
            assert!(sys.is_satisfied_by(v));
        }
        assert_eq!(k.len(), 2);
        assert_eq!(k, rref(&k));
        assert!(in_rref_span(&k, &[q(-1), q(-1), q(1), q(0)]));
        assert!(!in_rref_span(&k, &[q(1), q(0), q(0), q(0)]));
        assert!(in_rref_span(&k, &[q(-2), q(0), q(0), q(1)]));
    }

    #[test]
    fn rref_normalizes() {
        let r = rref(&qm(&[&[0, 2, 4], &[1, 1, 1], &[1, 2, 3]]));
        assert_eq!(r, qm(&[&[1, 0, -1], &[0, 1, 2]]));
    }
}
