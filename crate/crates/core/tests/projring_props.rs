mod common;

use er2_core::exactalg::{GradedSeries, TwoLocal};
use er2_core::fgl::Convention;
use er2_core::projring::{
    fgl_sum_power_detailed, is_zero, make_ring, normal_form, normal_form_with, Caps, Monomial, RingPresentation,
    SpaceSpec, Strategy,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Product rings get an α-cap high enough that nothing is ever dropped:
/// random inputs carry α ≤ 3 and α grows by at most the u-degree gained.
fn rings() -> Vec<RingPresentation> {
    [
        (SpaceSpec::RPEven(7), Caps::default()),
        (SpaceSpec::RPInfty, Caps::default()),
        (SpaceSpec::ProductEvenOdd(7, 2), Caps { alpha: 32, u: 24 }),
    ]
    .into_iter()
    .map(|(s, c)| make_ring(s, Convention::Araki, c).unwrap())
    .collect()
}

#[test]
fn strategies_agree_and_reduction_is_idempotent() {
    for ring in rings() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let e = common::random_element(&ring, &mut rng);
            let a = normal_form_with(&e, &ring, Strategy::DegreeOrdered).unwrap();
            let b = normal_form_with(&e, &ring, Strategy::Rounds).unwrap();
            if ring.is_product() {
                assert!(!a.alpha_truncated);
            }
            assert_eq!(a.monomials, b.monomials, "{} on {:?}", ring.space, e);
            let again = normal_form(&a.to_series(&ring).unwrap(), &ring).unwrap();
            assert_eq!(again.monomials, a.monomials);
        }
    }
}

#[test]
fn reduction_is_additive_and_multiplicative() {
    for ring in rings() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..60 {
            let a = common::random_element(&ring, &mut rng);
            let b = common::random_element(&ring, &mut rng);
            let na = normal_form(&a, &ring).unwrap().to_series(&ring).unwrap();
            let nb = normal_form(&b, &ring).unwrap().to_series(&ring).unwrap();
            let direct = normal_form(&a.mul(&b).unwrap(), &ring);
            let via = normal_form(&na.mul(&nb).unwrap(), &ring);
            match (direct, via) {
                (Ok(x), Ok(y)) => assert_eq!(x.monomials, y.monomials),
                (x, y) => panic!("{x:?} vs {y:?}"),
            }
            // e and nf(e) differ by an element that reduces to zero
            let diff = a.sub(&na).unwrap();
            if !diff.is_zero() {
                assert!(normal_form(&diff, &ring).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn defining_relations_reduce_to_zero() {
    for ring in rings() {
        let vars: &[&str] = if ring.is_product() { &["u1", "u2"] } else { &["u"] };
        for v in vars {
            let two = ring.two_series_element(v).unwrap();
            assert!(normal_form(&two, &ring).unwrap().is_zero(), "[2]({v}) in {}", ring.space);
            let shifted = two
                .mul(&GradedSeries::monomial(ring.table(), &[("alpha", 2), ("v2", 3)], TwoLocal::one()).unwrap())
                .unwrap();
            assert!(normal_form(&shifted, &ring).unwrap().is_zero());
        }
        if ring.is_product() {
            let u1 = GradedSeries::var(ring.table(), "u1").unwrap();
            let u2 = GradedSeries::var(ring.table(), "u2").unwrap();
            let rel = u1
                .mul(&ring.two_series_element("u2").unwrap())
                .unwrap()
                .sub(&u2.mul(&ring.two_series_element("u1").unwrap()).unwrap())
                .unwrap();
            assert!(normal_form(&rel, &ring).unwrap().is_zero());
        }
    }
}

#[test]
fn nilpotence_and_rp14_examples() {
    let ring = make_ring(SpaceSpec::RPEven(7), Convention::Araki, Caps::default()).unwrap();
    let u = GradedSeries::var(ring.table(), "u").unwrap();
    assert!(u.pow(8).is_zero());
    assert!(is_zero(&normal_form(&u.pow(7), &ring).unwrap()).survivors == vec!["u^7"]);
}

#[test]
fn alpha_cap_stability() {
    for spec in [SpaceSpec::RPEven(7), SpaceSpec::ProductEvenOdd(7, 2)] {
        let small = make_ring(spec, Convention::Araki, Caps { alpha: 16, u: 24 }).unwrap();
        let big = make_ring(spec, Convention::Araki, Caps { alpha: 20, u: 24 }).unwrap();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..100 {
            let e = common::random_element(&small, &mut rng);
            let a = normal_form(&e, &small).unwrap();
            let b = normal_form(&e.retable(big.table()).unwrap(), &big).unwrap();
            let window = a.alpha_exact_through.unwrap_or(16);
            assert!(window >= 0);
            let low = |s: &std::collections::BTreeSet<Monomial>| -> Vec<Monomial> {
                s.iter().copied().filter(|m| (m.alpha as i64) <= window).collect()
            };
            assert_eq!(low(&a.monomials), low(&b.monomials));
        }
    }
}

#[test]
fn desk_case_sum_power() {
    let ring = make_ring(SpaceSpec::ProductEvenOdd(7, 2), Convention::Araki, Caps { alpha: 32, u: 24 }).unwrap();
    let sp = fgl_sum_power_detailed(25, &ring, true).unwrap();
    let nf = &sp.normal_form;
    assert!(!nf.alpha_truncated);
    assert_eq!(sp.cross_check.as_ref().unwrap().monomials, nf.monomials);
    assert!(!nf.is_zero());
    for m in &nf.monomials {
        // only u1^i u2^j with no alpha or v2 survive; alpha^k u1^i u2 vanish
        assert_eq!((m.alpha, m.v2), (0, 0), "{}", m.render(true));
        assert!(m.e1 <= 7 && m.e2 <= 21);
        assert!(!(m.e1 == 0 || m.e2 == 0), "pure power {}", m.render(true));
    }
    assert!(nf.contains(&Monomial { v2: 0, alpha: 0, e1: 7, e2: 21 }));
}

#[test]
fn hazewinkel_law_gives_same_desk_survivors() {
    let a = make_ring(SpaceSpec::ProductEvenOdd(7, 2), Convention::Araki, Caps::default()).unwrap();
    let h = make_ring(SpaceSpec::ProductEvenOdd(7, 2), Convention::Hazewinkel, Caps::default()).unwrap();
    let na = fgl_sum_power_detailed(25, &a, false).unwrap().normal_form;
    let nh = fgl_sum_power_detailed(25, &h, false).unwrap().normal_form;
    assert_eq!(na.monomials, nh.monomials);
}

#[test]
fn matches_exact_reference_reduction() {
    for ring in rings() {
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..40 {
            let e = common::random_element(&ring, &mut rng);
            let nf = normal_form(&e, &ring).unwrap();
            let got: std::collections::BTreeSet<_> =
                nf.monomials.iter().map(|m| (m.v2 as u32, m.alpha, m.e1, m.e2)).collect();
            assert_eq!(got, common::exact_reduce(&ring, &e), "{}", ring.space);
        }
    }
}
