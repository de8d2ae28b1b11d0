use er2_core::bss::{compute, BssCaps, BssSpace};
use er2_core::er2::{basis_degree8_counts, spectral_degree8_counts};

#[test]
fn basis_counts_match_spectral_sequence() {
    for k in [0u32, 1] {
        let ss = compute(BssSpace::RPOdd { k }, BssCaps::default(), false).unwrap();
        let cap = 12;
        let a = basis_degree8_counts(k, cap);
        let b = spectral_degree8_counts(&ss, cap);
        assert_eq!(a, b, "K = {k}");
    }
}

#[test]
fn counts_are_sensitive_to_the_basis_ranges() {
    let ss = compute(BssSpace::RPOdd { k: 0 }, BssCaps::default(), false).unwrap();
    let b = spectral_degree8_counts(&ss, 12);
    let total: usize = b.values().sum();
    // 13·4 alpha^k u^j + 12·4 v2^4 alpha^k u^j + 1 v2^4 u^4 + 2·13 x-classes
    assert_eq!(total, 52 + 48 + 1 + 26);
    // dropping v2^4 u^4 from the basis would change degree 8
    let deg = er2_core::bss::ClassLabel::even(4, 0, 4).degree();
    assert_eq!(deg, 8);
    assert!(b[&deg] > 0);
}

use std::collections::BTreeSet;

use er2_core::er2::{
    basis_elements, er2_normalize, module_reduce, ER2Element, Family, Generator, ModuleWord, RawWord,
};
use proptest::prelude::*;

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::X),
        Just(Generator::W),
        Just(Generator::Alpha),
        (0u8..4).prop_map(Generator::AlphaS),
    ]
}

fn word() -> impl Strategy<Value = (i64, Vec<Generator>)> {
    ((-5i64..6), prop::collection::vec(generator(), 0..7))
}

fn product(factors: &[Generator]) -> ER2Element {
    factors.iter().fold(ER2Element::one(), |acc, g| acc.mul(&ER2Element::generator(*g)))
}

proptest! {
    #[test]
    fn normalization_ignores_order((c, fs) in word(), seed in 0u64..1000) {
        let direct = ER2Element::from_words([RawWord::new(c, &fs)]);
        let mut shuffled = fs.clone();
        // deterministic shuffle
        let len = shuffled.len();
        if len > 1 {
            for i in 0..len {
                let j = ((seed as usize).wrapping_mul(31).wrapping_add(i * 17)) % len;
                shuffled.swap(i, j);
            }
        }
        let scalar = ER2Element::from_words([RawWord::new(c, &[])]);
        let stepwise = scalar.mul(&product(&shuffled));
        prop_assert_eq!(&direct, &stepwise);
        // idempotent: renormalizing the rendered words changes nothing
        let again = er2_normalize(&direct.render().replace("-1*", "-")).unwrap();
        prop_assert_eq!(direct, again);
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in word(), b in word(), c in word()) {
        let e = |(k, fs): &(i64, Vec<Generator>)| ER2Element::from_words([RawWord::new(*k, fs)]);
        let (a, b, c) = (e(&a), e(&b), e(&c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn two_x_and_x7_vanish((c, fs) in word()) {
        let e = ER2Element::from_words([RawWord::new(c, &fs)]);
        let x = ER2Element::generator(Generator::X);
        let two = ER2Element::from_words([RawWord::new(2, &[])]);
        prop_assert!(e.mul(&x).mul(&two).is_zero());
        prop_assert!(e.mul(&x.pow(7)).is_zero());
        for w in e.terms().keys() {
            prop_assert!(w.x <= 6);
            prop_assert!(w.alpha_s.is_none() || w.x == 0);
        }
    }

    #[test]
    fn homogeneous_words_keep_their_degree((c, fs) in word()) {
        let e = ER2Element::from_words([RawWord::new(c, &fs)]);
        let want = fs.iter().map(|g| g.degree()).sum::<i64>().rem_euclid(48) as u32;
        if !e.is_zero() {
            prop_assert_eq!(e.degree(), Ok(want));
        }
    }
}

#[test]
fn defining_relations_hold() {
    for (lhs, rhs) in [
        ("2*alpha", "alpha*alpha_0"),
        ("2*w", "alpha*alpha_2"),
        ("2", "alpha_0"),
        ("alpha_1*alpha_2", "2*alpha_3"),
        ("alpha_3*alpha_3", "2*alpha_2"),
        ("w*alpha_3", "alpha*alpha_1"),
        ("w^2", "alpha^2"),
        ("alpha_3*x", "0"),
        ("alpha*x^3", "0"),
        ("w*x^3", "0"),
        ("x^7", "0"),
    ] {
        assert_eq!(er2_normalize(lhs).unwrap(), er2_normalize(rhs).unwrap(), "{lhs} = {rhs}");
    }
    assert!(!er2_normalize("x^6").unwrap().is_zero());
    assert!(!er2_normalize("w*x^2").unwrap().is_zero());
}

#[test]
fn u_power_relations_rewrite() {
    for big_k in [0u32, 1, 2] {
        let n = 8 * big_k + 4;
        let u = |e| ModuleWord { u: e, ..ModuleWord::default() };
        assert!(module_reduce(&[u(n + 4)], big_k).unwrap().is_zero());
        let six = module_reduce(&[u(n + 2)], big_k).unwrap();
        let x2: Vec<_> = six.x_multiples.iter().map(|m| (m.x_power, m.z)).collect();
        assert_eq!(x2, vec![(2, 16 * big_k as i64 - 14)]);
        let seven = module_reduce(&[u(n + 3)], big_k).unwrap();
        let x4: Vec<_> = seven.x_multiples.iter().map(|m| (m.x_power, m.z)).collect();
        assert_eq!(x4, vec![(4, 16 * big_k as i64 + 4)]);
        // a sum cancels mod 2
        assert!(module_reduce(&[u(2), u(2)], big_k).unwrap().is_zero());
        // degree not divisible by 8 is refused
        let odd = ModuleWord { x: 0, alpha: 0, v2: 1, u: 1, i: false };
        assert!(module_reduce(&[odd], big_k).is_err());
    }
}

#[test]
fn basis_maps_onto_e2_side_except_low_v2_4_powers() {
    use er2_core::fgl::Convention;
    use er2_core::projring::{make_ring, normal_form, Caps, SpaceSpec};
    use er2_core::exactalg::{GradedSeries, TwoLocal};
    let big_k = 0u32;
    let n = 8 * big_k + 4;
    let ring = make_ring(SpaceSpec::RPEven(n + 1), Convention::Araki, Caps::default()).unwrap();
    let cap = 6;
    let mut image = BTreeSet::new();
    for b in basis_elements(big_k, cap) {
        let v2 = match b.family {
            Family::AlphaU => 0,
            Family::V4AlphaU | Family::V4U => 4,
            Family::XAlphaI | Family::XV4AlphaI => continue,
        };
        let e = GradedSeries::monomial(
            ring.table(),
            &[("v2", v2), ("alpha", b.k as i64), ("u", b.j as i64)],
            TwoLocal::one(),
        )
        .unwrap();
        let nf = normal_form(&e, &ring).unwrap();
        // basis monomials are already 2-adic basis elements on the E(2) side
        assert_eq!(nf.monomials.len(), 1);
        assert!(image.insert((v2 as u8, b.k, b.j)));
    }
    let mut missed = Vec::new();
    for v2 in [0u8, 4] {
        for k in 0..=cap {
            for j in 1..=n {
                if !image.contains(&(v2, k, j)) {
                    missed.push((v2, k, j));
                }
            }
        }
    }
    assert_eq!(missed, vec![(4, 0, 1), (4, 0, 2), (4, 0, 3)]);
}
