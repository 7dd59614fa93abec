mod common;

use common::{gaussian, rational};
use num_rational::BigRational;
use proptest::prelude::*;
use quadric_core::exactnum::{parse_gaussian, serialize_gaussian};
use quadric_core::{GaussianRational, Rational};

/// Componentwise product computed directly on big rationals.
fn product_oracle(a: &GaussianRational, b: &GaussianRational) -> (BigRational, BigRational) {
    let (ar, ai) = (a.re.as_big(), a.im.as_big());
    let (br, bi) = (b.re.as_big(), b.im.as_big());
    (ar * br - ai * bi, ar * bi + ai * br)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &GaussianRational::zero(), a.clone());
        prop_assert_eq!(&a * &GaussianRational::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn product_matches_componentwise_formula(a in gaussian(), b in gaussian()) {
        let p = &a * &b;
        let (re, im) = product_oracle(&a, &b);
        prop_assert_eq!(p.re.as_big(), &re);
        prop_assert_eq!(p.im.as_big(), &im);
    }

    #[test]
    fn conjugation_is_a_field_involution(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        let n = &a * &a.conj();
        prop_assert!(n.is_real());
        prop_assert_eq!(n.re, a.norm_sqr());
    }

    #[test]
    fn text_round_trip(a in gaussian()) {
        let s = serialize_gaussian(&a);
        prop_assert_eq!(parse_gaussian(&s).unwrap(), a.clone());
        prop_assert_eq!(s.clone(), a.to_string());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(json, format!("\"{s}\""));
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let s = r.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), r.clone());
        prop_assert_eq!(s.ends_with("/1"), false);
    }
}

#[test]
fn rejects_garbage() {
    for bad in ["", "1/0", "1+", "ii", "1 2", "+", "3/", "1+2", "i1"] {
        assert!(parse_gaussian(bad).is_err(), "{bad:?}");
    }
}
