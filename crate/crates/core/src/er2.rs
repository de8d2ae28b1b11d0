//! The coefficient ring `ER(2)^*` and the degree-8* part of
//! `ER(2)^*(RP^{16K+9}, *)`.
//!
//! Ring elements are sums of words `x^a w^b α^c α_s` with at most one `α_s`
//! (`s ∈ {1,2,3}`; `α_0 = 2` is folded into the coefficient). Words without
//! `x` carry 2-local coefficients, except that `2w = α α_2` forces the
//! coefficient of a `w`-word into `{0, 1}`. Words with `x` are 2-torsion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bss::{ClassLabel, SpectralSequence};
use crate::exactalg::TwoLocal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Er2Error {
    #[error("element is not homogeneous: degrees {0:?}")]
    NotHomogeneous(Vec<u32>),
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("outside the model: {0}")]
    OutOfModelScope(String),
    #[error("degree {0} is not a multiple of 8")]
    NotDegreeEight(u32),
}

/// A ring generator; `AlphaS(0)` is `α_0 = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    X,
    W,
    Alpha,
    AlphaS(u8),
}

impl Generator {
    pub fn degree(self) -> i64 {
        match self {
            Generator::X => -17,
            Generator::W => -8,
            Generator::Alpha => -32,
            Generator::AlphaS(s) => -12 * s as i64,
        }
    }
}

/// A canonical word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word {
    pub x: u32,
    pub w: u32,
    pub alpha: u32,
    pub alpha_s: Option<u8>,
}

impl Word {
    pub const ONE: Word = Word {
        x: 0,
        w: 0,
        alpha: 0,
        alpha_s: None,
    };

    pub fn degree(&self) -> u32 {
        let d = -17 * self.x as i64 - 8 * self.w as i64 - 32 * self.alpha as i64
            - 12 * self.alpha_s.unwrap_or(0) as i64;
        d.rem_euclid(48) as u32
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.x), ("w", self.w), ("alpha", self.alpha)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if let Some(s) = self.alpha_s {
            parts.push(format!("alpha_{s}"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A word before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawWord {
    pub coefficient: TwoLocal,
    pub factors: Vec<Generator>,
}

impl RawWord {
    pub fn new(coefficient: i64, factors: &[Generator]) -> Self {
        RawWord {
            coefficient: TwoLocal::from_int(coefficient),
            factors: factors.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ER2Element {
    terms: BTreeMap<Word, TwoLocal>,
}

/// Apply the word-level relations. Returns `None` when the word vanishes.
fn fold(coefficient: TwoLocal, factors: &[Generator]) -> Option<(Word, TwoLocal)> {
    let mut c = coefficient;
    let (mut x, mut w, mut alpha) = (0u32, 0u32, 0u32);
    let mut s: Option<u8> = None;
    for g in factors {
        match *g {
            Generator::X => x += 1,
            Generator::W => w += 1,
            Generator::Alpha => alpha += 1,
            Generator::AlphaS(t) => {
                let t = t % 4;
                // α_s α_t = 2 α_{s+t}, α_0 = 2
                let merged = match s.take() {
                    None => t,
                    Some(u) => {
                        c = &c * &TwoLocal::from_int(2);
                        (u + t) % 4
                    }
                };
                if merged == 0 {
                    c = &c * &TwoLocal::from_int(2);
                } else {
                    s = Some(merged);
                }
            }
        }
    }
    // w α_s = α α_{s+2}
    while w > 0 {
        let Some(t) = s else { break };
        w -= 1;
        alpha += 1;
        let t = (t + 2) % 4;
        if t == 0 {
            c = &c * &TwoLocal::from_int(2);
            s = None;
        } else {
            s = Some(t);
        }
    }
    // w² = α²
    alpha += 2 * (w / 2);
    w %= 2;
    if x > 0 {
        // α_s x = 0 (so 2x = 0), α x³ = w x³ = 0, x⁷ = 0
        if s.is_some() || c.parity() == 0 || x >= 7 || (x >= 3 && (alpha > 0 || w > 0)) {
            return None;
        }
        c = TwoLocal::one();
    }
    if c.is_zero() {
        return None;
    }
    Some((
        Word {
            x,
            w,
            alpha,
            alpha_s: s,
        },
        c,
    ))
}

impl ER2Element {
    pub fn zero() -> Self {
        ER2Element::default()
    }

    pub fn one() -> Self {
        ER2Element::from_words([RawWord::new(1, &[])])
    }

    pub fn generator(g: Generator) -> Self {
        ER2Element::from_words([RawWord::new(1, &[g])])
    }

    /// Normalize a word sum.
    pub fn from_words(words: impl IntoIterator<Item = RawWord>) -> Self {
        let mut e = ER2Element::zero();
        for rw in words {
            if let Some((w, c)) = fold(rw.coefficient, &rw.factors) {
                e.accumulate(w, c);
            }
        }
        e.settle();
        e
    }

    fn accumulate(&mut self, w: Word, c: TwoLocal) {
        let sum = match self.terms.get(&w) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    /// Reduce x-words mod 2 and carry even coefficients of w-words via
    /// `2w = α α_2`.
    fn settle(&mut self) {
        let mut carries = Vec::new();
        let words: Vec<Word> = self.terms.keys().copied().collect();
        for w in words {
            let c = self.terms[&w].clone();
            if w.x > 0 {
                if c.parity() == 0 {
                    self.terms.remove(&w);
                } else {
                    self.terms.insert(w, TwoLocal::one());
                }
            } else if w.w == 1 {
                let r = TwoLocal::from_int(c.parity() as i64);
                let q = (&c - &r).half().expect("even after removing parity");
                if r.is_zero() {
                    self.terms.remove(&w);
                } else {
                    self.terms.insert(w, r);
                }
                if !q.is_zero() {
                    carries.push((
                        Word {
                            x: 0,
                            w: 0,
                            alpha: w.alpha + 1,
                            alpha_s: Some(2),
                        },
                        q,
                    ));
                }
            }
        }
        for (w, q) in carries {
            self.accumulate(w, q);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, TwoLocal> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in &other.terms {
            e.accumulate(*w, c.clone());
        }
        e.settle();
        e
    }

    pub fn neg(&self) -> Self {
        let mut e = ER2Element::zero();
        for (w, c) in &self.terms {
            e.accumulate(*w, -c);
        }
        e.settle();
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raws = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                raws.push(RawWord {
                    coefficient: ca * cb,
                    factors: word_factors(a).into_iter().chain(word_factors(b)).collect(),
                });
            }
        }
        ER2Element::from_words(raws)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(ER2Element::one(), |acc, _| acc.mul(self))
    }

    /// Degree mod 48 of a nonzero homogeneous element.
    pub fn degree(&self) -> Result<u32, Er2Error> {
        let degs: BTreeSet<u32> = self.terms.keys().map(|w| w.degree()).collect();
        match degs.len() {
            0 => Err(Er2Error::ZeroElement),
            1 => Ok(*degs.iter().next().expect("one degree")),
            _ => Err(Er2Error::NotHomogeneous(degs.into_iter().collect())),
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                if c == &TwoLocal::one() {
                    w.render()
                } else if *w == Word::ONE {
                    c.to_string()
                } else {
                    format!("{c}*{}", w.render())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for ER2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn word_factors(w: &Word) -> Vec<Generator> {
    let mut out = Vec::new();
    out.extend(std::iter::repeat_n(Generator::X, w.x as usize));
    out.extend(std::iter::repeat_n(Generator::W, w.w as usize));
    out.extend(std::iter::repeat_n(Generator::Alpha, w.alpha as usize));
    out.extend(w.alpha_s.map(Generator::AlphaS));
    out
}

/// Parse `"w^2 + 3*alpha_1*alpha_3 - x*alpha_2"`.
pub fn parse_words(s: &str) -> Result<Vec<RawWord>, Er2Error> {
    let err = || Er2Error::Parse(s.to_string());
    let mut out = Vec::new();
    let normalized = s.replace('-', "+-");
    for term in normalized.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest.trim()),
            None => (1, term),
        };
        let mut coefficient = sign;
        let mut factors = Vec::new();
        for f in body.split('*').map(str::trim) {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<usize>().map_err(|_| err())?),
                None => (f, 1),
            };
            if let Ok(n) = name.parse::<i64>() {
                coefficient *= n.pow(e as u32);
                continue;
            }
            let g = match name {
                "x" => Generator::X,
                "w" => Generator::W,
                "alpha" => Generator::Alpha,
                _ => match name.strip_prefix("alpha_").and_then(|t| t.parse::<u8>().ok()) {
                    Some(t) if t < 4 => Generator::AlphaS(t),
                    _ => return Err(err()),
                },
            };
            factors.extend(std::iter::repeat_n(g, e));
        }
        out.push(RawWord::new(coefficient, &factors));
    }
    Ok(out)
}

pub fn er2_normalize(words: &str) -> Result<ER2Element, Er2Error> {
    Ok(ER2Element::from_words(parse_words(words)?))
}

// ---------------------------------------------------------------------------
// The degree-8* module of RP^{16K+9}.

/// Basis families in degrees divisible by 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// `α^k u^j`, `k ≥ 0`, `1 ≤ j ≤ 8K+4`.
    AlphaU,
    /// `v2^4 α^k u^j`, `k ≥ 1`, `1 ≤ j ≤ 8K+4`.
    V4AlphaU,
    /// `v2^4 u^j`, `4 ≤ j ≤ 8K+4`.
    V4U,
    /// `x α^k i_{16K+9}`.
    XAlphaI,
    /// `x v2^4 α^k i_{16K+9}`.
    XV4AlphaI,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::AlphaU,
        Family::V4AlphaU,
        Family::V4U,
        Family::XAlphaI,
        Family::XV4AlphaI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::AlphaU => "alpha^k*u^j",
            Family::V4AlphaU => "v2^4*alpha^k*u^j",
            Family::V4U => "v2^4*u^j",
            Family::XAlphaI => "x*alpha^k*i",
            Family::XV4AlphaI => "x*v2^4*alpha^k*i",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisElement {
    pub family: Family,
    pub k: u32,
    /// u-exponent; 0 for the `i` families.
    pub j: u32,
}

impl BasisElement {
    pub fn degree(&self, big_k: u32) -> u32 {
        let v4 = matches!(self.family, Family::V4AlphaU | Family::V4U | Family::XV4AlphaI);
        let xi = matches!(self.family, Family::XAlphaI | Family::XV4AlphaI);
        let d = -32 * self.k as i64 - 16 * self.j as i64
            + if v4 { -24 } else { 0 }
            + if xi { -17 + 16 * big_k as i64 + 9 } else { 0 };
        d.rem_euclid(48) as u32
    }

    pub fn render(&self, big_k: u32) -> String {
        let i = format!("i{}", 16 * big_k + 9);
        let a = match self.k {
            0 => String::new(),
            1 => "alpha*".into(),
            k => format!("alpha^{k}*"),
        };
        let u = if self.j == 1 { "u".to_string() } else { format!("u^{}", self.j) };
        match self.family {
            Family::AlphaU => format!("{a}{u}"),
            Family::V4AlphaU | Family::V4U => format!("v2^4*{a}{u}"),
            Family::XAlphaI => format!("x*{a}{i}"),
            Family::XV4AlphaI => format!("x*v2^4*{a}{i}"),
        }
    }
}

/// A formal 0/1 sum of basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ER2ModuleElement {
    pub big_k: u32,
    pub terms: BTreeSet<BasisElement>,
}

impl ER2ModuleElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn toggle(&mut self, b: BasisElement) {
        if !self.terms.remove(&b) {
            self.terms.insert(b);
        }
    }
}

/// A word `x^x α^alpha v2^v2 u^u (i_{16K+9})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
pub struct ModuleWord {
    pub x: u32,
    pub alpha: u32,
    pub v2: u32,
    pub u: u32,
    pub i: bool,
}

impl ModuleWord {
    pub fn degree(&self, big_k: u32) -> u32 {
        let d = -17 * self.x as i64 - 32 * self.alpha as i64 - 6 * self.v2 as i64 - 16 * self.u as i64
            + if self.i { 16 * big_k as i64 + 9 } else { 0 };
        d.rem_euclid(48) as u32
    }
}

/// `x^p · (coefficient) · z_t`, from the u-power relations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct XMultiple {
    pub x_power: u32,
    /// The ER(2)^* coefficient in front, e.g. `alpha^2` or `w*alpha`.
    pub coefficient: String,
    /// Degree label `t` of `z_t` (may be negative, as in `z_{16K−14}`).
    pub z: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ModuleValue {
    pub basis: ER2ModuleElement,
    pub x_multiples: BTreeSet<XMultiple>,
}

impl ModuleValue {
    pub fn is_zero(&self) -> bool {
        self.basis.is_zero() && self.x_multiples.is_empty()
    }
}

fn coefficient_word(alpha: u32, v4: bool) -> String {
    // v2^4 α^k = w α^{k−1} for k ≥ 1
    let (w, a) = if v4 { (true, alpha - 1) } else { (false, alpha) };
    let mut parts = Vec::new();
    if w {
        parts.push("w".to_string());
    }
    match a {
        0 => {}
        1 => parts.push("alpha".into()),
        _ => parts.push(format!("alpha^{a}")),
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Rewrite one word into the degree-8* basis, or into `x`-multiples of the
/// `z` classes for u-powers past the top.
pub fn module_reduce_word(m: &ModuleWord, big_k: u32) -> Result<ModuleValue, Er2Error> {
    let d = m.degree(big_k);
    if !d.is_multiple_of(8) {
        return Err(Er2Error::NotDegreeEight(d));
    }
    let n = 8 * big_k + 4;
    let mut out = ModuleValue {
        basis: ER2ModuleElement {
            big_k,
            terms: BTreeSet::new(),
        },
        x_multiples: BTreeSet::new(),
    };
    let v4 = match m.v2 % 8 {
        0 => false,
        4 => true,
        _ => return Err(Er2Error::OutOfModelScope(format!("v2^{} is not v2^0 or v2^4", m.v2))),
    };
    if m.x >= 7 {
        return Ok(out);
    }
    if m.i {
        if m.u > 0 {
            return Err(Er2Error::OutOfModelScope("products of u with i are not given".into()));
        }
        // degree ≡ 0 mod 8 forces exactly one x
        let family = if v4 { Family::XV4AlphaI } else { Family::XAlphaI };
        out.basis.toggle(BasisElement {
            family,
            k: m.alpha,
            j: 0,
        });
        return Ok(out);
    }
    // without i, degree ≡ 0 mod 8 forces no x
    if m.u == 0 {
        return Err(Er2Error::OutOfModelScope("unit summand: only reduced groups are modelled".into()));
    }
    if v4 && m.alpha == 0 && m.u > n {
        return Err(Er2Error::OutOfModelScope(format!("v2^4*u^{} past the top class", m.u)));
    }
    match m.u {
        j if j >= n + 4 => {}
        j if j == n + 3 => {
            // u^{8K+7} = x^4 z_{16K+4}; α x^3 = w x^3 = 0
            if m.alpha == 0 {
                out.x_multiples.insert(XMultiple {
                    x_power: 4,
                    coefficient: "1".into(),
                    z: 16 * big_k as i64 + 4,
                });
            }
        }
        j if j == n + 2 => {
            out.x_multiples.insert(XMultiple {
                x_power: 2,
                coefficient: coefficient_word(m.alpha, v4),
                z: 16 * big_k as i64 - 14,
            });
        }
        j if j == n + 1 => {
            return Err(Er2Error::OutOfModelScope(format!("no relation is given for u^{}", n + 1)));
        }
        j => {
            let family = match (v4, m.alpha) {
                (false, _) => Family::AlphaU,
                (true, 0) if j >= 4 => Family::V4U,
                (true, 0) => {
                    return Err(Er2Error::OutOfModelScope(format!(
                        "v2^4*u^{j} is not in the image of ER(2)-cohomology"
                    )))
                }
                (true, _) => Family::V4AlphaU,
            };
            out.basis.toggle(BasisElement { family, k: m.alpha, j });
        }
    }
    Ok(out)
}

/// Reduce a 0/1 sum of words.
pub fn module_reduce(words: &[ModuleWord], big_k: u32) -> Result<ModuleValue, Er2Error> {
    let mut out = ModuleValue {
        basis: ER2ModuleElement {
            big_k,
            terms: BTreeSet::new(),
        },
        x_multiples: BTreeSet::new(),
    };
    for w in words {
        let v = module_reduce_word(w, big_k)?;
        for b in v.basis.terms {
            out.basis.toggle(b);
        }
        for x in v.x_multiples {
            if !out.x_multiples.remove(&x) {
                out.x_multiples.insert(x);
            }
        }
    }
    Ok(out)
}

/// All basis elements with `α`-exponent at most `alpha_cap`, in order.
pub fn basis_elements(big_k: u32, alpha_cap: u32) -> Vec<BasisElement> {
    let n = 8 * big_k + 4;
    let mut out = Vec::new();
    for k in 0..=alpha_cap {
        for j in 1..=n {
            out.push(BasisElement {
                family: Family::AlphaU,
                k,
                j,
            });
            if k >= 1 {
                out.push(BasisElement {
                    family: Family::V4AlphaU,
                    k,
                    j,
                });
            }
        }
        out.push(BasisElement {
            family: Family::XAlphaI,
            k,
            j: 0,
        });
        out.push(BasisElement {
            family: Family::XV4AlphaI,
            k,
            j: 0,
        });
    }
    for j in 4..=n {
        out.push(BasisElement {
            family: Family::V4U,
            k: 0,
            j,
        });
    }
    out.sort();
    out
}

/// Number of basis elements of degree `d` (mod 48) with `α`-exponent at
/// most `alpha_cap`.
pub fn count_basis(big_k: u32, d: u32, alpha_cap: u32) -> usize {
    if !d.is_multiple_of(8) {
        return 0;
    }
    basis_elements(big_k, alpha_cap)
        .iter()
        .filter(|b| b.degree(big_k) == d % 48)
        .count()
}

/// CSV listing `family,k,j,degree`.
pub fn basis_csv(big_k: u32, alpha_cap: u32) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "k", "j", "degree"]).expect("in-memory write");
    for b in basis_elements(big_k, alpha_cap) {
        w.write_record([b.family.name().to_string(), b.k.to_string(), b.j.to_string(), b.degree(big_k).to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Degree-8* generator counts read off a spectral sequence of `RP^{16K+9}`,
/// keyed by degree mod 48 and counted by leading `α`-exponent ≤ `alpha_cap`.
///
/// * `x^1`: `2 v2^e α^k u^j` (`e ∈ {0,4}`, `j` below the top) leads with
///   `v2^e α^{k+1} u^{j+1}`.
/// * `x^r`, `r ≥ 2`: leading labels of `Im d^r` on the even part.
/// * the `i`-part: `x` times each `Im d^r` label `v2^e α^k i`, `r ≥ 2`.
pub fn spectral_degree8_counts(ss: &SpectralSequence, alpha_cap: u32) -> BTreeMap<u32, usize> {
    let mut gens: BTreeSet<(u8, u32, u32, bool)> = BTreeSet::new();
    let top = ss.space.top_u();
    if let Ok(e1) = ss.page(1) {
        for targets in e1.differential.values() {
            for t in targets {
                if t.sphere.is_none() && Some(t.u) != top {
                    gens.insert((t.v2, t.alpha + 1, t.u + 1, false));
                }
            }
        }
    }
    for labels in ss.torsion.orders.values() {
        for l in labels {
            gens.insert((l.v2, l.alpha, l.u, l.sphere.is_some()));
        }
    }
    let mut counts = BTreeMap::new();
    for (v2, alpha, u, odd) in gens {
        if alpha > alpha_cap {
            continue;
        }
        let mut degree = ClassLabel {
            sphere: if odd { ss.space.sphere_dim() } else { None },
            u,
            alpha,
            v2,
        }
        .degree() as i64;
        if odd {
            degree -= 17;
        }
        let degree = degree.rem_euclid(48) as u32;
        if degree.is_multiple_of(8) && (v2 == 0 || v2 == 4) {
            *counts.entry(degree).or_insert(0) += 1;
        }
    }
    counts
}

/// `count_basis` for every degree `0, 8, …, 40`.
pub fn basis_degree8_counts(big_k: u32, alpha_cap: u32) -> BTreeMap<u32, usize> {
    (0..48)
        .step_by(8)
        .map(|d| (d, count_basis(big_k, d, alpha_cap)))
        .filter(|(_, c)| *c > 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> String {
        er2_normalize(s).unwrap().render()
    }

    #[test]
    fn examples() {
        assert_eq!(n("w^2"), "alpha^2");
        assert_eq!(n("alpha_1*alpha_3"), "4");
        assert_eq!(n("x*alpha_2"), "0");
        assert_eq!(n("2*x"), "0");
        assert_eq!(n("x^7"), "0");
        assert_eq!(n("alpha*x^3"), "0");
        assert_eq!(n("2*w"), "alpha*alpha_2");
        assert_eq!(n("w*alpha_1"), "alpha*alpha_3");
        assert_eq!(n("3*w"), "alpha*alpha_2 + w");
        assert_eq!(n("-w"), "-1*alpha*alpha_2 + w");
    }

    #[test]
    fn degrees() {
        assert_eq!(er2_normalize("x").unwrap().degree(), Ok(31));
        assert_eq!(er2_normalize("w*alpha").unwrap().degree(), Ok(8));
        assert_eq!(er2_normalize("x^7").unwrap().degree(), Err(Er2Error::ZeroElement));
        assert!(matches!(er2_normalize("x + w").unwrap().degree(), Err(Er2Error::NotHomogeneous(_))));
    }

    #[test]
    fn module_examples() {
        let k = 1;
        let top = 8 * k + 4;
        let w = |alpha, v2, u| ModuleWord {
            x: 0,
            alpha,
            v2,
            u,
            i: false,
        };
        assert!(module_reduce_word(&w(0, 0, top + 4), k).unwrap().is_zero());
        let r = module_reduce_word(&w(0, 0, top + 2), k).unwrap();
        assert_eq!(
            r.x_multiples.iter().next().unwrap(),
            &XMultiple {
                x_power: 2,
                coefficient: "1".into(),
                z: 2
            }
        );
        assert!(matches!(module_reduce_word(&w(0, 4, 3), k), Err(Er2Error::OutOfModelScope(_))));
        assert!(module_reduce_word(&w(1, 0, top + 3), k).unwrap().is_zero());
    }

    #[test]
    fn counts_vanish_off_multiples_of_eight() {
        for big_k in 0..3 {
            assert_eq!(count_basis(big_k, 4, 6), 0);
            assert_eq!(count_basis(big_k, 12, 6), 0);
        }
        let v4u: Vec<_> = basis_elements(0, 6).into_iter().filter(|b| b.family == Family::V4U).collect();
        assert_eq!(v4u.len(), 1);
        assert_eq!(v4u[0].j, 4);
    }
}
