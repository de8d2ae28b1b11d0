#![allow(dead_code)]

use er2_core::exactalg::{GradedSeries, TwoLocal};
use er2_core::projring::RingPresentation;
use rand::rngs::StdRng;
use rand::Rng;

/// A random sum of a few monomials with small signed coefficients, every
/// monomial carrying at least one u-factor.
pub fn random_element(ring: &RingPresentation, rng: &mut StdRng) -> GradedSeries<TwoLocal> {
    let (b1, b2) = ring.bounds();
    let mut s = GradedSeries::zero(ring.table());
    for _ in 0..rng.gen_range(1..=4) {
        let alpha = rng.gen_range(0..=3i64);
        let v2 = rng.gen_range(0..8i64);
        let c = loop {
            let c = rng.gen_range(-6i64..=6);
            if c != 0 {
                break c;
            }
        };
        let m = if ring.is_product() {
            let (e1, e2) = loop {
                let e = (rng.gen_range(0..=b1.min(8)) as i64, rng.gen_range(0..=b2.min(8)) as i64);
                if e.0 + e.1 > 0 {
                    break e;
                }
            };
            GradedSeries::monomial(
                ring.table(),
                &[("u1", e1), ("u2", e2), ("alpha", alpha), ("v2", v2)],
                TwoLocal::from_int(c),
            )
        } else {
            let e = rng.gen_range(1..=b1.min(10)) as i64;
            GradedSeries::monomial(ring.table(), &[("u", e), ("alpha", alpha), ("v2", v2)], TwoLocal::from_int(c))
        };
        s = s.add(&m.unwrap()).unwrap();
    }
    s
}

/// Independent reference reduction with exact 2-local coefficients: repeatedly
/// rewrite the least reducible term under the order (total u, α, v2, u1).
/// Returns `(v2, α, u1, u2)` tuples of the surviving basis monomials.
pub fn exact_reduce(
    ring: &RingPresentation,
    e: &GradedSeries<TwoLocal>,
) -> std::collections::BTreeSet<(u32, u32, u32, u32)> {
    use std::collections::BTreeMap;
    type M = (u32, u32, u32, u32); // (total, alpha, v2, e1)
    let t = ring.table();
    let product = ring.is_product();
    let (b1, b2) = ring.bounds();
    let cap = ring.caps.alpha;
    let u_name = if product { "u1" } else { "u" };
    let iu = t.index_of(u_name).unwrap();
    let ia = t.index_of("alpha").unwrap();
    let iv = t.index_of("v2").unwrap();
    let iu2 = if product { Some(t.index_of("u2").unwrap()) } else { None };
    // (m, a, c): coefficient c of alpha^a u^m in [2](u), read off whichever
    // variable has the larger bound so the table does not truncate it
    let (long_name, long_idx) = match iu2 {
        Some(i2) if b2 > b1 => ("u2", i2),
        _ => (u_name, iu),
    };
    let two = ring.two_series_element(long_name).unwrap();
    let b: Vec<(u32, u32, TwoLocal)> =
        two.terms().iter().map(|(mono, c)| (mono[long_idx], mono[ia], c.clone())).collect();
    let eps_inv = {
        let b2c = b.iter().find(|(m, a, _)| *m == 2 && *a == 1).unwrap().2.clone();
        TwoLocal::one().checked_div(&b2c).unwrap()
    };
    let mut terms: BTreeMap<M, TwoLocal> = BTreeMap::new();
    let put = |terms: &mut BTreeMap<M, TwoLocal>, v2: u32, al: u32, e1: u32, e2: u32, c: TwoLocal| {
        if e1 > b1 || e2 > b2 || al > cap || c.is_zero() {
            return;
        }
        let key = (e1 + e2, al, v2, e1);
        let v = terms.remove(&key).unwrap_or_else(TwoLocal::zero);
        let s = &v + &c;
        if !s.is_zero() {
            terms.insert(key, s);
        }
    };
    for (mono, c) in e.terms() {
        let e2 = iu2.map(|i| mono[i]).unwrap_or(0);
        put(&mut terms, mono[iv], mono[ia], mono[iu], e2, c.clone());
    }
    loop {
        let next = terms
            .iter()
            .find(|((tot, al, _, e1), c)| {
                let swap = product && *al >= 1 && *e1 >= 1 && tot - e1 >= 2;
                swap || !(c.is_zero() || **c == TwoLocal::one())
            })
            .map(|(k, c)| (*k, c.clone()));
        let Some(((tot, al, v2, e1), c)) = next else { break };
        let e2 = tot - e1;
        terms.remove(&(tot, al, v2, e1));
        if product && al >= 1 && e1 >= 1 && e2 >= 2 {
            let (a0, i0, j0) = (al - 1, e1 - 1, e2 - 2);
            put(&mut terms, v2, a0 + 1, i0 + 2, j0 + 1, c.clone());
            for (m, a, bc) in &b {
                if *m >= 3 {
                    let s = &(&c * &eps_inv) * bc;
                    put(&mut terms, v2, a0 + a, i0 + 1, j0 + m, -&s);
                    put(&mut terms, v2, a0 + a, i0 + m, j0 + 1, s);
                }
            }
            continue;
        }
        let bit = TwoLocal::from_int(c.parity() as i64);
        let half = (&c - &bit).half().unwrap();
        if !bit.is_zero() {
            put(&mut terms, v2, al, e1, e2, bit);
        }
        for (m, a, bc) in &b {
            if *m >= 2 {
                let coeff = -&(bc * &half);
                if e1 >= 1 {
                    put(&mut terms, v2, al + a, e1 - 1 + m, e2, coeff);
                } else {
                    put(&mut terms, v2, al + a, e1, e2 - 1 + m, coeff);
                }
            }
        }
    }
    terms.keys().map(|&(tot, al, v2, e1)| (v2, al, e1, tot - e1)).collect()
}
