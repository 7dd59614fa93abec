#![allow(dead_code)]

use proptest::prelude::*;
use quadric_core::polyring::{Monomial, VarSpace};
use quadric_core::quadric::HermitianForm;
use quadric_core::{GaussianRational, Polynomial, QuadricModel, Rational};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

pub fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

pub fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| GaussianRational::from_ints(a, b))
}

pub fn monomial(nvars: usize, max_exp: u16) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_exp, nvars).prop_map(Monomial)
}

pub fn polynomial(space: VarSpace, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((monomial(space.num_vars(), 2), gaussian()), 0..=max_terms)
        .prop_map(move |terms| Polynomial::from_terms(space, terms))
}

/// Hermitian `n×n` form with small Gaussian-integer entries.
#[allow(clippy::needless_range_loop)]
pub fn hermitian(n: usize) -> impl Strategy<Value = HermitianForm> {
    (
        proptest::collection::vec(-2i64..=2, n),
        proptest::collection::vec(small_gaussian(), n * (n - 1) / 2),
    )
        .prop_map(move |(diag, upper)| {
            let mut m = vec![vec![GaussianRational::zero(); n]; n];
            let mut it = upper.into_iter();
            for r in 0..n {
                m[r][r] = GaussianRational::from_ints(diag[r], 0);
                for c in r + 1..n {
                    let x = it.next().unwrap();
                    m[c][r] = x.conj();
                    m[r][c] = x;
                }
            }
            HermitianForm::new(m, 0).unwrap()
        })
}

pub fn model(n: usize, d: usize) -> impl Strategy<Value = QuadricModel> {
    proptest::collection::vec(hermitian(n), d).prop_map(move |forms| QuadricModel::new(n, d, forms).unwrap())
}

pub fn small_model() -> impl Strategy<Value = QuadricModel> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, d)| model(n, d))
}
