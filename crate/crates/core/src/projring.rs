//! Truncated E(2)-cohomology rings of projective spaces and their products,
//! reduced to the 2-adic basis.
//!
//! In the rescaled coordinates the reduced ring of `RP^{2n}` is
//! `Z_(2)[α][u]/(u^{n+1}, [2](u))`. Every element has a unique expansion
//! `Σ ε v2^i α^k u^j` with `ε ∈ {0, 1}`: even coefficients are pushed to
//! higher u-degree through `2u = 2u − [2](u) = −α u² − …`, and in a product
//! of two such rings `α u1 u2²` is traded for `α u1² u2 + …` using
//! `u1 [2](u2) = u2 [2](u1)`. Both rewrites strictly increase a well-founded
//! order on monomials, so reduction terminates once the u-exponents are
//! bounded (by nilpotence, or by a declared cap for `RP^∞`).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{Bound, ExactAlgError, GeneratorTable, GradedSeries, TwoLocal};
use crate::fgl::{self, Convention, FglError, FormalGroupLaw};

type ZSeries = GradedSeries<TwoLocal>;

/// Default α-exponent cap.
pub const DEFAULT_ALPHA_CAP: u32 = 16;
/// Default u-exponent cap for `RP^∞`.
pub const DEFAULT_U_CAP: u32 = 24;
/// Largest `n`, `m` or `8K+5` accepted as a nilpotence bound.
pub const MAX_DESK_EXPONENT: u32 = 62;
const STEP_BUDGET: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("caps too small: {0}")]
    CapTooSmall(String),
    #[error("space parameters outside desk-scale bounds: {0}")]
    OutOfBounds(String),
    #[error("operation needs a product ring")]
    NotAProduct,
    #[error("element has a term without any u-factor (not in the reduced ring)")]
    NotReduced,
    #[error("reduction exceeded its step budget")]
    NonTermination,
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceSpec {
    /// `RP^{2n}`.
    RPEven(u32),
    /// `RP^∞`, truncated at the u-cap.
    RPInfty,
    /// `RP^{2n} × RP^{2m}`.
    ProductEvenEven(u32, u32),
    /// `RP^{2n} × RP^{16K+9}`, modelled through the tensor part, i.e. inside
    /// `RP^{2n} × RP^{16K+10}` with `u2^{8K+6} = 0`.
    ProductEvenOdd(u32, u32),
}

impl SpaceSpec {
    pub fn is_product(&self) -> bool {
        matches!(self, SpaceSpec::ProductEvenEven(..) | SpaceSpec::ProductEvenOdd(..))
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::RPEven(n) => write!(f, "RP^{}", 2 * n),
            SpaceSpec::RPInfty => write!(f, "RP^inf"),
            SpaceSpec::ProductEvenEven(n, m) => write!(f, "RP^{} x RP^{}", 2 * n, 2 * m),
            SpaceSpec::ProductEvenOdd(n, k) => write!(f, "RP^{} x RP^{}", 2 * n, 16 * k + 9),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub alpha: u32,
    /// Only used by `RP^∞`.
    pub u: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            alpha: DEFAULT_ALPHA_CAP,
            u: DEFAULT_U_CAP,
        }
    }
}

/// Rewriting strategy for [`normal_form_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Always rewrite the smallest reducible monomial (single sweep).
    DegreeOrdered,
    /// Rewrite in rounds: every term touched in the previous round is
    /// rewritten, largest monomial first, before any newly touched term.
    Rounds,
}

/// A basis monomial `v2^v2 α^alpha u1^e1 u2^e2` (`e2 = 0` in one-factor rings).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub v2: u8,
    pub alpha: u32,
    pub e1: u32,
    pub e2: u32,
}

impl Monomial {
    fn key(&self) -> Key {
        (self.e1 + self.e2, Reverse(self.e2), self.alpha, self.v2)
    }

    fn from_key(k: &Key) -> Self {
        Monomial {
            v2: k.3,
            alpha: k.2,
            e1: k.0 - k.1 .0,
            e2: k.1 .0,
        }
    }

    pub fn total_u(&self) -> u32 {
        self.e1 + self.e2
    }

    pub fn render(&self, product: bool) -> String {
        let mut parts = Vec::new();
        if self.v2 > 0 {
            parts.push(pow("v2", self.v2 as u32));
        }
        if self.alpha > 0 {
            parts.push(pow("alpha", self.alpha));
        }
        if product {
            if self.e1 > 0 {
                parts.push(pow("u1", self.e1));
            }
            if self.e2 > 0 {
                parts.push(pow("u2", self.e2));
            }
        } else if self.e1 > 0 {
            parts.push(pow("u", self.e1));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn pow(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Rewrite order: total u-degree, then u2-exponent descending, then α, then v2.
type Key = (u32, Reverse<u32>, u32, u8);

/// A presented ring with oriented rewrite rules.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    pub space: SpaceSpec,
    pub caps: Caps,
    pub convention: Convention,
    table: Arc<GeneratorTable>,
    /// Max exponent of u (or u1) and u2.
    bounds: (u32, u32),
    /// True when the u-bound is a cap rather than nilpotence.
    capped: bool,
    /// `two[m]` = coefficients of `α^a` in the coefficient of `u^m` of `[2](u)`.
    two: Vec<Vec<(u32, TwoLocal)>>,
    /// `two` reduced mod 2^128.
    two_res: Vec<Vec<(u32, u128)>>,
    /// `ε⁻¹` mod 2^128, where `b_2 = ε α`.
    b2_unit_inv: u128,
}

impl RingPresentation {
    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn is_product(&self) -> bool {
        self.space.is_product()
    }

    /// Exponent bounds `(u or u1, u2)`; `u2` is 0 for one-factor rings.
    pub fn bounds(&self) -> (u32, u32) {
        self.bounds
    }

    pub fn is_capped(&self) -> bool {
        self.capped
    }

    /// `[2](u)` (or `[2](u_var)`) as an element of the ring's table.
    pub fn two_series_element(&self, var: &str) -> Result<ZSeries, RingError> {
        let mut s = ZSeries::zero(&self.table);
        for (m, coeffs) in self.two.iter().enumerate() {
            for (a, c) in coeffs {
                s = s.add(&ZSeries::monomial(&self.table, &[(var, m as i64), ("alpha", *a as i64)], c.clone())?)?;
            }
        }
        Ok(s)
    }

    /// Terms `b_m(α) u^m` of `[2](u)` for `m ≥ lo`.
    fn two_terms(&self, lo: usize) -> impl Iterator<Item = (u32, u32, u128)> + '_ {
        self.two_res
            .iter()
            .enumerate()
            .skip(lo)
            .flat_map(|(m, cs)| cs.iter().map(move |(a, c)| (m as u32, *a, *c)))
    }

    /// In a product ring, the largest α-exponent whose coefficients are
    /// unaffected by terms dropped at the α-cap. A rewrite that lowers α by
    /// one raises the total u-degree by at least two, and a dropped term has
    /// total u-degree at least 1.
    pub fn alpha_exact_through(&self) -> i64 {
        let t_max = (self.bounds.0 + self.bounds.1) as i64;
        self.caps.alpha as i64 - t_max / 2
    }

    fn in_bounds(&self, m: &Monomial) -> bool {
        m.e1 <= self.bounds.0 && m.e2 <= self.bounds.1 && m.alpha <= self.caps.alpha
    }
}

/// Build the presentation of `spec` using the rescaled law of `convention`.
pub fn make_ring(spec: SpaceSpec, convention: Convention, caps: Caps) -> Result<RingPresentation, RingError> {
    if caps.alpha < 1 {
        return Err(RingError::CapTooSmall("alpha cap must be at least 1 to hold alpha*u^2".into()));
    }
    let (bounds, capped) = match spec {
        SpaceSpec::RPEven(n) => ((n, 0), false),
        SpaceSpec::RPInfty => {
            if caps.u < 2 {
                return Err(RingError::CapTooSmall("u cap must be at least 2 to hold alpha*u^2".into()));
            }
            ((caps.u, 0), true)
        }
        SpaceSpec::ProductEvenEven(n, m) => ((n, m), false),
        SpaceSpec::ProductEvenOdd(n, k) => ((n, 8 * k + 5), false),
    };
    // reduction runs mod 2^128, exact while fewer than 127 halvings can chain
    for (b, what) in [(bounds.0, "first factor"), (bounds.1, "second factor")] {
        if b > MAX_DESK_EXPONENT {
            return Err(RingError::OutOfBounds(format!("{what} exponent bound {b} > {MAX_DESK_EXPONENT}")));
        }
    }
    if bounds.0 == 0 || (spec.is_product() && bounds.1 == 0) {
        return Err(RingError::OutOfBounds("projective spaces must have positive dimension".into()));
    }
    let product = spec.is_product();
    let mut t = GeneratorTable::new(true);
    if product {
        t = t
            .with("u1", -16, Bound::MaxExponent(bounds.0))?
            .with("u2", -16, Bound::MaxExponent(bounds.1))?;
    } else {
        t = t.with("u", -16, Bound::MaxExponent(bounds.0))?;
    }
    let table = t
        .with("alpha", 16, Bound::MaxExponent(caps.alpha))?
        .with("v2", -6, Bound::UnitOrder(8))?
        .build();

    let order = bounds.0.max(bounds.1) + 1;
    let ts = fgl::rescaled_two_series(convention, order)?;
    let ti = ts.series.table().index_of("t")?;
    let ai = ts.series.table().index_of("alpha")?;
    let mut two = vec![Vec::new(); order as usize + 1];
    for (mono, c) in ts.series.terms() {
        two[mono[ti] as usize].push((mono[ai], c.clone()));
    }
    for cs in &mut two {
        cs.sort_by_key(|(a, _)| *a);
    }
    let b2 = &two[2];
    let b2_unit_inv = match b2.as_slice() {
        [(1, c)] if c.is_unit() => residue(&TwoLocal::one().checked_div(c)?),
        _ => return Err(RingError::CapTooSmall("[2](u) has no alpha*u^2 term".into())),
    };
    Ok(RingPresentation {
        space: spec,
        caps,
        convention,
        table,
        bounds,
        capped,
        two_res: two
            .iter()
            .map(|cs| cs.iter().map(|(a, c)| (*a, residue(c))).collect())
            .collect(),
        two,
        b2_unit_inv,
    })
}

/// Element of the 2-adic basis expansion: a set of monomials with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub product: bool,
    pub monomials: BTreeSet<Monomial>,
    /// Terms were dropped at the u-cap (`RP^∞` only).
    pub u_truncated: bool,
    /// Terms were dropped at the α-cap.
    pub alpha_truncated: bool,
    /// `Some(b)`: only terms with `α ≤ b` are certified. In product rings the
    /// swap rule can lower α, so terms dropped at the cap may have had
    /// descendants below it. `None` when the whole form is exact (modulo
    /// `α^{A+1}` in one-factor rings, where rewrites never lower α).
    pub alpha_exact_through: Option<i64>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn render(&self) -> Vec<String> {
        self.monomials.iter().map(|m| m.render(self.product)).collect()
    }

    /// The monomials inside the certified α-window.
    pub fn certified(&self) -> BTreeSet<Monomial> {
        match self.alpha_exact_through {
            None => self.monomials.clone(),
            Some(b) => self.monomials.iter().filter(|m| (m.alpha as i64) <= b).copied().collect(),
        }
    }

    /// JSON list of `{v2, alpha, u}` or `{v2, alpha, u1, u2}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .monomials
            .iter()
            .map(|m| {
                if self.product {
                    serde_json::json!({"v2": m.v2, "alpha": m.alpha, "u1": m.e1, "u2": m.e2})
                } else {
                    serde_json::json!({"v2": m.v2, "alpha": m.alpha, "u": m.e1})
                }
            })
            .collect();
        serde_json::Value::Array(items)
    }

    /// Back to a series over the ring's table (all coefficients 1).
    pub fn to_series(&self, ring: &RingPresentation) -> Result<ZSeries, RingError> {
        let mut s = ZSeries::zero(ring.table());
        for m in &self.monomials {
            s = s.add(&monomial_series(ring, m, TwoLocal::one())?)?;
        }
        Ok(s)
    }
}

fn monomial_series(ring: &RingPresentation, m: &Monomial, c: TwoLocal) -> Result<ZSeries, RingError> {
    let mut powers: Vec<(&str, i64)> = vec![("alpha", m.alpha as i64), ("v2", m.v2 as i64)];
    if ring.is_product() {
        powers.push(("u1", m.e1 as i64));
        powers.push(("u2", m.e2 as i64));
    } else {
        powers.push(("u", m.e1 as i64));
    }
    Ok(ZSeries::monomial(ring.table(), &powers, c)?)
}

/// Certificate of (non)vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroCertificate {
    pub zero: bool,
    pub survivors: Vec<String>,
}

pub fn is_zero(nf: &NormalForm) -> ZeroCertificate {
    ZeroCertificate {
        zero: nf.is_zero(),
        survivors: nf.render(),
    }
}

/// `x mod 2^128` for `x ∈ Z_(2)`.
fn residue(x: &TwoLocal) -> u128 {
    let modulus = BigInt::from(1u8) << 128usize;
    let lift = |v: &BigInt| v.mod_floor(&modulus).to_u128().expect("reduced below 2^128");
    let num = lift(x.numerator());
    let den = lift(x.denominator());
    // Newton iteration for the inverse of an odd number mod 2^128
    let mut inv: u128 = den;
    for _ in 0..7 {
        inv = inv.wrapping_mul(2u128.wrapping_sub(den.wrapping_mul(inv)));
    }
    num.wrapping_mul(inv)
}

/// Worklist rewriting with coefficients mod 2^128.
///
/// A coefficient's parity is all that survives into the normal form, and a
/// coefficient is only ever halved when its term moves to strictly higher
/// u-degree. An error of `2^128` therefore shrinks to at worst `2^{128−d}`
/// after `d` halvings, and `d` is bounded by the total u-degree (at most
/// `2·MAX_DESK_EXPONENT < 127`), so every emitted bit is exact.
struct Reducer<'a> {
    ring: &'a RingPresentation,
    terms: BTreeMap<Key, u128>,
    /// Keys touched since they were last examined.
    dirty: BTreeSet<Key>,
    u_truncated: bool,
    alpha_truncated: bool,
}

impl<'a> Reducer<'a> {
    fn add(&mut self, m: Monomial, c: u128) {
        if c == 0 {
            return;
        }
        if !self.ring.in_bounds(&m) {
            let u_dropped = m.e1 > self.ring.bounds.0 || m.e2 > self.ring.bounds.1;
            if u_dropped && self.ring.capped {
                self.u_truncated = true;
            }
            if !u_dropped {
                self.alpha_truncated = true;
            }
            return;
        }
        let k = m.key();
        self.dirty.insert(k);
        let v = self.terms.entry(k).or_insert(0);
        *v = v.wrapping_add(c);
        if *v == 0 {
            self.terms.remove(&k);
        }
    }

    fn needs_swap(&self, m: &Monomial) -> bool {
        self.ring.is_product() && m.alpha >= 1 && m.e1 >= 1 && m.e2 >= 2
    }

    fn reducible(&self, k: &Key, c: u128) -> bool {
        c > 1 || self.needs_swap(&Monomial::from_key(k))
    }

    /// Rewrite the term at `k` once. Returns false if it was already reduced.
    fn step(&mut self, k: Key) -> bool {
        let Some(&c) = self.terms.get(&k) else { return false };
        let m = Monomial::from_key(&k);
        if self.needs_swap(&m) {
            self.terms.remove(&k);
            self.swap(m, c);
            return true;
        }
        if c <= 1 {
            return false;
        }
        let bit = c & 1;
        let rest = (c - bit) >> 1;
        if bit == 1 {
            self.terms.insert(k, 1);
        } else {
            self.terms.remove(&k);
        }
        self.double(m, rest);
        true
    }

    /// `2·c·m` rewritten through `2u = −Σ_{j≥2} b_j u^j`.
    fn double(&mut self, m: Monomial, c: u128) {
        if c == 0 {
            return;
        }
        let use_first = m.e1 >= 1;
        let ring = self.ring;
        for (j, a, b) in ring.two_terms(2) {
            let mut n = m;
            n.alpha += a;
            if use_first {
                n.e1 = m.e1 - 1 + j;
            } else {
                n.e2 = m.e2 - 1 + j;
            }
            self.add(n, b.wrapping_mul(c).wrapping_neg());
        }
    }

    /// `α u1 u2² = α u1² u2 − ε⁻¹ Σ_{j≥3} b_j (u1 u2^j − u1^j u2)` times the
    /// cofactor `c α^{k-1} u1^{i-1} u2^{j-2}`.
    fn swap(&mut self, m: Monomial, c: u128) {
        let base = Monomial {
            v2: m.v2,
            alpha: m.alpha - 1,
            e1: m.e1 - 1,
            e2: m.e2 - 2,
        };
        let ring = self.ring;
        self.add(
            Monomial {
                alpha: base.alpha + 1,
                e1: base.e1 + 2,
                e2: base.e2 + 1,
                ..base
            },
            c,
        );
        let scale = c.wrapping_mul(ring.b2_unit_inv);
        for (j, a, b) in ring.two_terms(3) {
            let t = scale.wrapping_mul(b);
            // − t (u1 u2^j) + t (u1^j u2)
            self.add(
                Monomial {
                    alpha: base.alpha + a,
                    e1: base.e1 + 1,
                    e2: base.e2 + j,
                    ..base
                },
                t.wrapping_neg(),
            );
            self.add(
                Monomial {
                    alpha: base.alpha + a,
                    e1: base.e1 + j,
                    e2: base.e2 + 1,
                    ..base
                },
                t,
            );
        }
    }

    fn run(&mut self, strategy: Strategy) -> Result<(), RingError> {
        let mut steps = 0usize;
        let mut budget = |n: usize| {
            steps += n;
            if steps > STEP_BUDGET {
                Err(RingError::NonTermination)
            } else {
                Ok(())
            }
        };
        match strategy {
            Strategy::DegreeOrdered => {
                // a step only feeds monomials above its own key
                while let Some(k) = self.dirty.pop_first() {
                    if self.try_step(k) {
                        budget(1)?;
                    }
                }
            }
            Strategy::Rounds => {
                while !self.dirty.is_empty() {
                    let round = std::mem::take(&mut self.dirty);
                    let mut n = 0;
                    for k in round.into_iter().rev() {
                        if self.try_step(k) {
                            n += 1;
                        }
                    }
                    budget(n.max(1))?;
                }
            }
        }
        Ok(())
    }

    fn try_step(&mut self, k: Key) -> bool {
        match self.terms.get(&k) {
            Some(&c) if self.reducible(&k, c) => self.step(k),
            _ => false,
        }
    }
}

/// Reduce an element given as a series over the ring's table.
pub fn normal_form(e: &ZSeries, ring: &RingPresentation) -> Result<NormalForm, RingError> {
    normal_form_with(e, ring, Strategy::DegreeOrdered)
}

pub fn normal_form_with(e: &ZSeries, ring: &RingPresentation, strategy: Strategy) -> Result<NormalForm, RingError> {
    let e = if Arc::ptr_eq(e.table(), ring.table()) {
        e.clone()
    } else {
        e.retable(ring.table())?
    };
    let t = ring.table();
    let idx = |n: &str| t.index_of(n).ok();
    let (i1, i2) = if ring.is_product() {
        (idx("u1").unwrap(), idx("u2"))
    } else {
        (idx("u").unwrap(), None)
    };
    let ia = idx("alpha").unwrap();
    let iv = idx("v2").unwrap();
    let mut r = Reducer {
        ring,
        terms: BTreeMap::new(),
        dirty: BTreeSet::new(),
        u_truncated: false,
        alpha_truncated: false,
    };
    for (mono, c) in e.terms() {
        let m = Monomial {
            v2: mono[iv] as u8,
            alpha: mono[ia],
            e1: mono[i1],
            e2: i2.map(|i| mono[i]).unwrap_or(0),
        };
        if m.e1 + m.e2 == 0 {
            return Err(RingError::NotReduced);
        }
        r.add(m, residue(c));
    }
    r.run(strategy)?;
    let monomials = r.terms.keys().map(Monomial::from_key).collect();
    Ok(NormalForm {
        product: ring.is_product(),
        monomials,
        u_truncated: r.u_truncated,
        alpha_truncated: r.alpha_truncated,
        alpha_exact_through: if ring.is_product() && r.alpha_truncated {
            Some(ring.alpha_exact_through())
        } else {
            None
        },
    })
}

/// `F(u1, u2)` as an element of a product ring, using a law truncated just
/// far enough for the requested power.
fn fgl_in_ring(ring: &RingPresentation, order: u32) -> Result<ZSeries, RingError> {
    let law: FormalGroupLaw = fgl::rescale_to_er2(&fgl::standard_fgl(ring.convention, order.max(1))?)?;
    let u1 = ZSeries::var(ring.table(), "u1")?;
    let u2 = ZSeries::var(ring.table(), "u2")?;
    Ok(law.series().substitute(&[("x", u1), ("y", u2)], ring.table())?)
}

/// Result of [`fgl_sum_power`].
#[derive(Debug, Clone)]
pub struct SumPower {
    pub power: u32,
    /// Total u-degree the law was truncated at.
    pub law_order: u32,
    pub normal_form: NormalForm,
    /// Same computation under [`Strategy::Rounds`].
    pub cross_check: Option<NormalForm>,
}

/// Normal form of `(u1 +_F u2)^N` in a product ring.
pub fn fgl_sum_power(n: u32, ring: &RingPresentation) -> Result<NormalForm, RingError> {
    Ok(fgl_sum_power_detailed(n, ring, false)?.normal_form)
}

/// Like [`fgl_sum_power`], optionally re-reducing under the second strategy.
pub fn fgl_sum_power_detailed(n: u32, ring: &RingPresentation, cross_check: bool) -> Result<SumPower, RingError> {
    if !ring.is_product() {
        return Err(RingError::NotAProduct);
    }
    if n == 0 {
        return Err(RingError::CapTooSmall("power must be positive".into()));
    }
    let (b1, b2) = ring.bounds();
    let max_total = b1 + b2;
    let empty = NormalForm {
        product: true,
        monomials: BTreeSet::new(),
        u_truncated: false,
        alpha_truncated: false,
        alpha_exact_through: None,
    };
    if n > max_total {
        return Ok(SumPower {
            power: n,
            law_order: 0,
            normal_form: empty.clone(),
            cross_check: cross_check.then_some(empty),
        });
    }
    // terms of total degree d in F^N only need F through degree d − N + 1
    let order = max_total - n + 1;
    let sum = fgl_in_ring(ring, order)?;
    let p = sum.pow(n);
    let nf = normal_form_with(&p, ring, Strategy::DegreeOrdered)?;
    let cc = if cross_check {
        Some(normal_form_with(&p, ring, Strategy::Rounds)?)
    } else {
        None
    };
    Ok(SumPower {
        power: n,
        law_order: order,
        normal_form: nf,
        cross_check: cc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: SpaceSpec) -> RingPresentation {
        make_ring(spec, Convention::Araki, Caps::default()).unwrap()
    }

    fn u(r: &RingPresentation, name: &str, e: i64) -> ZSeries {
        ZSeries::monomial(r.table(), &[(name, e)], TwoLocal::one()).unwrap()
    }

    #[test]
    fn nilpotence_in_rp14() {
        let r = ring(SpaceSpec::RPEven(7));
        assert_eq!(r.bounds(), (7, 0));
        assert!(u(&r, "u", 8).is_zero());
        let nf = normal_form(&u(&r, "u", 7), &r).unwrap();
        assert_eq!(nf.render(), vec!["u^7"]);
    }

    #[test]
    fn product_even_odd_bounds() {
        let r = ring(SpaceSpec::ProductEvenOdd(7, 2));
        assert_eq!(r.bounds(), (7, 21));
    }

    #[test]
    fn two_u_leads_with_alpha_u2() {
        let r = ring(SpaceSpec::RPInfty);
        let two_u = u(&r, "u", 1).scale(&TwoLocal::from_int(2));
        let nf = normal_form(&two_u, &r).unwrap();
        let first = nf.monomials.iter().min_by_key(|m| m.key()).unwrap();
        assert_eq!(first.render(false), "alpha*u^2");
        assert!(nf.u_truncated);
    }

    #[test]
    fn alpha_u1_u2sq_swaps() {
        let r = ring(SpaceSpec::ProductEvenEven(4, 4));
        let e = ZSeries::monomial(r.table(), &[("alpha", 1), ("u1", 1), ("u2", 2)], TwoLocal::one()).unwrap();
        let nf = normal_form(&e, &r).unwrap();
        let first = nf.monomials.iter().min_by_key(|m| m.key()).unwrap();
        assert_eq!(first.render(true), "alpha*u1^2*u2");
        for m in &nf.monomials {
            assert!(!(m.alpha >= 1 && m.e1 >= 1 && m.e2 >= 2));
        }
    }

    #[test]
    fn minus_one_becomes_one_plus_tail() {
        let r = ring(SpaceSpec::RPEven(7));
        let e = u(&r, "u", 1).neg();
        let nf = normal_form(&e, &r).unwrap();
        assert!(nf.contains(&Monomial { v2: 0, alpha: 0, e1: 1, e2: 0 }));
        assert!(nf.monomials.len() > 1);
    }

    #[test]
    fn unit_part_is_rejected() {
        let r = ring(SpaceSpec::RPEven(3));
        let one = ZSeries::one(r.table());
        assert_eq!(normal_form(&one, &r), Err(RingError::NotReduced));
    }

    #[test]
    fn caps_are_validated() {
        assert!(matches!(
            make_ring(SpaceSpec::RPInfty, Convention::Araki, Caps { alpha: 0, u: 8 }),
            Err(RingError::CapTooSmall(_))
        ));
        assert!(matches!(
            make_ring(SpaceSpec::RPInfty, Convention::Araki, Caps { alpha: 4, u: 1 }),
            Err(RingError::CapTooSmall(_))
        ));
        assert!(matches!(
            make_ring(SpaceSpec::RPEven(0), Convention::Araki, Caps::default()),
            Err(RingError::OutOfBounds(_))
        ));
    }

    #[test]
    fn is_zero_certificates() {
        let r = ring(SpaceSpec::RPInfty);
        let nf = normal_form(&u(&r, "u", 1), &r).unwrap();
        let cert = is_zero(&nf);
        assert!(!cert.zero);
        assert_eq!(cert.survivors, vec!["u"]);
    }

    #[test]
    fn sum_power_one_has_linear_terms() {
        let r = ring(SpaceSpec::ProductEvenEven(2, 3));
        let nf = fgl_sum_power(1, &r).unwrap();
        assert!(nf.contains(&Monomial { v2: 0, alpha: 0, e1: 1, e2: 0 }));
        assert!(nf.contains(&Monomial { v2: 0, alpha: 0, e1: 0, e2: 1 }));
        assert!(matches!(fgl_sum_power(1, &ring(SpaceSpec::RPEven(2))), Err(RingError::NotAProduct)));
    }

    #[test]
    fn json_shape() {
        let r = ring(SpaceSpec::ProductEvenEven(2, 2));
        let e = ZSeries::monomial(r.table(), &[("u1", 1), ("u2", 2)], TwoLocal::one()).unwrap();
        let nf = normal_form(&e, &r).unwrap();
        assert_eq!(nf.to_json(), serde_json::json!([{"v2": 0, "alpha": 0, "u1": 1, "u2": 2}]));
    }
}
