use std::sync::Arc;

use er2_core::exactalg::{rational, series_mul, Bound, GeneratorTable, GradedSeries, TwoLocal};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn two_local() -> impl Strategy<Value = TwoLocal> {
    (-500i64..500, 0i64..40).prop_map(|(n, d)| TwoLocal::new(n, 2 * d + 1).unwrap())
}

proptest! {
    #[test]
    fn ring_axioms(a in two_local(), b in two_local(), c in two_local()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, TwoLocal::zero());
        prop_assert!(a.denominator().is_odd());
    }

    #[test]
    fn valuation_is_additive(a in two_local(), b in two_local()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!((&a * &b).valuation(), Some(a.valuation().unwrap() + b.valuation().unwrap()));
    }

    #[test]
    fn matches_rational_arithmetic(a in two_local(), b in two_local()) {
        let qa = a.to_rational();
        let qb = b.to_rational();
        prop_assert_eq!((&a * &b).to_rational(), &qa * &qb);
        prop_assert_eq!((&a + &b).to_rational(), &qa + &qb);
    }
}

fn xy_table(order: u32) -> Arc<GeneratorTable> {
    GeneratorTable::new(false)
        .with("x", 1, Bound::Free)
        .unwrap()
        .with("y", 1, Bound::Free)
        .unwrap()
        .with("a", 3, Bound::MaxExponent(4))
        .unwrap()
        .series(&["x", "y"], order)
        .unwrap()
        .build()
}

fn random_series(table: &Arc<GeneratorTable>, terms: &[(u8, u8, u8, i8)]) -> GradedSeries<TwoLocal> {
    let mut s = GradedSeries::zero(table);
    for &(i, j, k, c) in terms {
        let m = GradedSeries::monomial(
            table,
            &[("x", i as i64), ("y", j as i64), ("a", k as i64)],
            TwoLocal::from_int(c as i64),
        )
        .unwrap();
        s = s.add(&m).unwrap();
    }
    s
}

fn terms() -> impl Strategy<Value = Vec<(u8, u8, u8, i8)>> {
    prop::collection::vec((0u8..5, 0u8..5, 0u8..3, -5i8..6), 0..6)
}

proptest! {
    #[test]
    fn series_mul_commutative_associative(a in terms(), b in terms(), c in terms()) {
        let t = xy_table(7);
        let (a, b, c) = (random_series(&t, &a), random_series(&t, &b), random_series(&t, &c));
        prop_assert_eq!(series_mul(&a, &b).unwrap(), series_mul(&b, &a).unwrap());
        let left = series_mul(&series_mul(&a, &b).unwrap(), &c).unwrap();
        let right = series_mul(&a, &series_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_degrees_are_additive(a in terms(), b in terms()) {
        let t = xy_table(20);
        let (a, b) = (random_series(&t, &a), random_series(&t, &b));
        let p = series_mul(&a, &b).unwrap();
        for m in p.terms().keys() {
            let found = a.terms().keys().any(|ma| b.terms().keys().any(|mb| {
                t.int_degree(ma) + t.int_degree(mb) == t.int_degree(m)
            }));
            prop_assert!(found);
        }
    }

    #[test]
    fn reversion_is_two_sided_inverse(tail in prop::collection::vec(-4i64..5, 11)) {
        let t = GeneratorTable::new(false)
            .with("t", 1, Bound::MaxExponent(12))
            .unwrap()
            .build();
        let mut f = GradedSeries::<BigRational>::var(&t, "t").unwrap();
        for (i, c) in tail.iter().enumerate() {
            let m = GradedSeries::monomial(&t, &[("t", i as i64 + 2)], rational(*c, 3)).unwrap();
            f = f.add(&m).unwrap();
        }
        let g = f.reversion("t").unwrap();
        let id = GradedSeries::var(&t, "t").unwrap();
        prop_assert_eq!(g.compose("t", &f).unwrap(), id.clone());
        prop_assert_eq!(f.compose("t", &g).unwrap(), id);
    }
}

/// Coefficients of the inverse of `t + t²` by Lagrange inversion:
/// `[t^n] g = (1/n) [s^{n-1}] (1 + s)^{-n} = (−1)^{n−1} C(2n−2, n−1) / n`.
fn lagrange_coefficient(n: u32) -> BigRational {
    let mut binom = BigInt::from(1);
    for i in 0..(n - 1) {
        binom = binom * BigInt::from(2 * n - 2 - i) / BigInt::from(i + 1);
    }
    let sign = if n % 2 == 1 { 1 } else { -1 };
    BigRational::new(binom * sign, BigInt::from(n))
}

#[test]
fn reversion_of_t_plus_t_squared_matches_lagrange() {
    let t = GeneratorTable::new(false)
        .with("t", 1, Bound::MaxExponent(14))
        .unwrap()
        .build();
    let f = GradedSeries::<BigRational>::from_terms(&t, [(vec![1], rational(1, 1)), (vec![2], rational(1, 1))]);
    let g = f.reversion("t").unwrap();
    for n in 1..=14u32 {
        assert_eq!(g.coeff(&[n]), lagrange_coefficient(n), "t^{n}");
    }
    assert_eq!(g.coeff(&[4]), rational(-5, 1));
}

#[test]
fn reversion_rejects_bad_leading_term() {
    let t = GeneratorTable::new(false)
        .with("t", 1, Bound::MaxExponent(6))
        .unwrap()
        .build();
    let f = GradedSeries::<BigRational>::monomial(&t, &[("t", 1)], rational(2, 1)).unwrap();
    assert!(f.reversion("t").is_err());
}
