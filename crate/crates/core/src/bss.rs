//! The x-Bockstein spectral sequence for ER(2) of a point, `RP^∞` and
//! `RP^{16K+9}`.
//!
//! `E^1 = E(2)^*(X)` is handled symbolically: `d^1 = v2^{-3}(1 − c)` kills
//! nothing on even v2-powers and doubles odd ones, so
//! `E^2 = v2^{even} ⊗ R/2R ⊕ v2^{odd} ⊗ R[2]` (plus the odd sphere part).
//! From `E^2` on every page is an `F_2`-space and is computed as `Z_r / B_r`
//! inside `E^2`, with the differentials supplied by fixture rules that act on
//! `E^2` monomials. Tabulated pages and torsion lists are kept separately so
//! computed pages can be diffed against them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fgl::{self, Convention};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BssError {
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("class {0} is not in the basis of E^{1}")]
    NotInBasis(String, u32),
    #[error("page {0} does not exist (pages run 1..=8)")]
    NoSuchPage(u32),
    #[error("d^{r} is inconsistent on E^{r}: {detail}")]
    CompositionFailure { r: u32, detail: String },
    #[error("fgl: {0}")]
    Fgl(String),
}

/// Spaces with fixture tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BssSpace {
    Point,
    RPInfty,
    /// `RP^{16K+9}`.
    RPOdd { k: u32 },
}

impl BssSpace {
    /// Top u-power of the even part (`8K+4`), if finite.
    pub fn top_u(&self) -> Option<u32> {
        match self {
            BssSpace::RPOdd { k } => Some(8 * k + 4),
            _ => None,
        }
    }

    /// Dimension `16K+9` of the odd sphere.
    pub fn sphere_dim(&self) -> Option<u32> {
        match self {
            BssSpace::RPOdd { k } => Some(16 * k + 9),
            _ => None,
        }
    }
}

impl fmt::Display for BssSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BssSpace::Point => write!(f, "point"),
            BssSpace::RPInfty => write!(f, "RP^inf"),
            BssSpace::RPOdd { k } => write!(f, "RP^{}", 16 * k + 9),
        }
    }
}

/// Truncation of the computation and of the comparison window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BssCaps {
    /// α-exponents kept in `E^2`.
    pub alpha: u32,
    /// u-exponents kept (ignored when the space has a top class).
    pub u: u32,
    /// Window in which pages are certified and compared.
    pub window_alpha: u32,
    pub window_u: u32,
}

impl Default for BssCaps {
    fn default() -> Self {
        BssCaps {
            alpha: 32,
            u: 24,
            window_alpha: 12,
            window_u: 12,
        }
    }
}

/// `v2^v2 α^alpha u^u`, or `v2^v2 α^alpha i_{sphere}` when `sphere` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassLabel {
    pub sphere: Option<u32>,
    pub u: u32,
    pub alpha: u32,
    pub v2: u8,
}

impl ClassLabel {
    pub fn even(v2: u8, alpha: u32, u: u32) -> Self {
        ClassLabel {
            sphere: None,
            u,
            alpha,
            v2: v2 % 8,
        }
    }

    pub fn odd(v2: u8, alpha: u32, sphere: u32) -> Self {
        ClassLabel {
            sphere: Some(sphere),
            u: 0,
            alpha,
            v2: v2 % 8,
        }
    }

    pub fn is_odd_part(&self) -> bool {
        self.sphere.is_some()
    }

    /// Degree mod 48: `|v2| = −6`, `|α| = −32`, `|u| = −16`, `|i_t| = t`.
    pub fn degree(&self) -> u32 {
        let d = -6 * self.v2 as i64 - 32 * self.alpha as i64 - 16 * self.u as i64 + self.sphere.unwrap_or(0) as i64;
        d.rem_euclid(48) as u32
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.v2 > 0 {
            parts.push(power("v2", self.v2 as u32));
        }
        if self.alpha > 0 {
            parts.push(power("alpha", self.alpha));
        }
        if self.u > 0 {
            parts.push(power("u", self.u));
        }
        if let Some(t) = self.sphere {
            parts.push(format!("i{t}"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn within(&self, caps: &BssCaps) -> bool {
        self.alpha <= caps.window_alpha && self.u <= caps.window_u
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn power(name: &str, e: u32) -> String {
    if e == 1 {
        name.into()
    } else {
        format!("{name}^{e}")
    }
}

/// Degree of `d^r`: `17r + 1` mod 48.
pub fn differential_degree(r: u32) -> u32 {
    (17 * r + 1) % 48
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientStructure {
    /// Page 1: a free `Z_(2)[α]`-module; `d^1` values carry a factor 2.
    FreeZ2Alpha,
    /// Pages `r ≥ 2`: `F_2[α]`-modules.
    F2Alpha,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPage {
    pub r: u32,
    pub structure: CoefficientStructure,
    pub classes: Vec<ClassLabel>,
    /// Nonzero values of `d^r` on the basis, in terms of the basis of `E^r`.
    /// On page 1 the value listed is `t` for `d^1(s) = 2t`.
    pub differential: BTreeMap<ClassLabel, Vec<ClassLabel>>,
}

impl SpectralPage {
    pub fn contains(&self, c: &ClassLabel) -> bool {
        self.classes.binary_search(c).is_ok()
    }
}

/// Shape of a fixture differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    /// `d^3(v2^2 y) = v2^4 α y`, `d^3(v2^6 y) = α y` for permanent cycles `y`.
    PointD3,
    /// `d^7(v2^4 y) = y`.
    PointD7,
    /// `d^2(v2^{2s+1} α^k u^{8K+4}) = v2^{2s+2} α^{k+4} i`.
    TopD2,
    /// `d^4(v2^6 u^{8K+3}) = v2^4 i`, `d^4(v2^2 u^{8K+3}) = i`.
    NextToTopD4,
    /// `d^7(v2^6 u^{8K+4}) = v2^2 u^{8K+4}`.
    TopD7,
    /// `d^7(v2^6 α^3 i) = v2^2 α^3 i`, absent from the printed table.
    RepairD7,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureRule {
    pub r: u32,
    pub kind: RuleKind,
    pub formula: String,
    pub justification: String,
}

/// Differential rules for one space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureTable {
    pub space: BssSpace,
    pub rules: Vec<FixtureRule>,
}

pub fn fixture_table(space: BssSpace, with_repair: bool) -> FixtureTable {
    let rule = |r, kind, formula: &str, justification: &str| FixtureRule {
        r,
        kind,
        formula: formula.into(),
        justification: justification.into(),
    };
    let mut rules = vec![
        rule(
            3,
            RuleKind::PointD3,
            "d3(v2^2 y) = v2^4 alpha y; d3(v2^6 y) = alpha y",
            "coefficient sequence: d3(v2^2) = alpha v2^4, derivation gives d3(v2^6) = alpha; alpha, u, i are d3-cycles",
        ),
        rule(
            7,
            RuleKind::PointD7,
            "d7(v2^4 y) = y",
            "coefficient sequence: d7(v2^4) = 1 forced by E^8 = 0",
        ),
    ];
    if let BssSpace::RPOdd { .. } = space {
        rules.push(rule(
            2,
            RuleKind::TopD2,
            "d2(v2^(2s+1) alpha^k u^(8K+4)) = v2^(2s+2) alpha^(k+4) i",
            "RP^(16K+9) table, page 2",
        ));
        rules.push(rule(
            4,
            RuleKind::NextToTopD4,
            "d4(v2^6 u^(8K+3)) = v2^4 i; d4(v2^2 u^(8K+3)) = i",
            "RP^(16K+9) table, page 4 (pairing fixed by the degree law)",
        ));
        rules.push(rule(
            7,
            RuleKind::TopD7,
            "d7(v2^6 u^(8K+4)) = v2^2 u^(8K+4)",
            "RP^(16K+9) table, page 7 (by restriction to RP^(16K+8))",
        ));
        if with_repair {
            rules.push(rule(
                7,
                RuleKind::RepairD7,
                "d7(v2^6 alpha^3 i) = v2^2 alpha^3 i",
                "repair: forced by E^8 = 0, not in the printed table",
            ));
        }
    }
    FixtureTable { space, rules }
}

/// Odd coefficients of the rescaled 2-series: pairs `(m, a)` with
/// `α^a u^m` appearing in `[2](u)` with odd coefficient, `m ≥ 3`.
fn odd_two_series_terms(order: u32) -> Result<Vec<(u32, u32)>, BssError> {
    let ts = fgl::rescaled_two_series(Convention::Araki, order.max(4)).map_err(|e| BssError::Fgl(e.to_string()))?;
    let table = ts.series.table();
    let ti = table.index_of("t").map_err(|e| BssError::Fgl(e.to_string()))?;
    let ai = table.index_of("alpha").map_err(|e| BssError::Fgl(e.to_string()))?;
    let mut out: Vec<(u32, u32)> = ts
        .series
        .terms()
        .iter()
        .filter(|(_, c)| c.is_unit())
        .map(|(m, _)| (m[ti], m[ai]))
        .filter(|(m, _)| *m >= 3)
        .collect();
    out.sort();
    Ok(out)
}

/// `R/2R` for `R = Z_(2)[α][u]/([2](u), u^{top+1})`: reduces `α^k u^j` to
/// the basis `{α^k u, u^j}` through `α^k u^j ≡ Σ_{m≥3} b̄_m α^{k−1} u^{j−2+m}`.
struct ModTwo {
    terms: Vec<(u32, u32)>,
    u_max: u32,
    memo: HashMap<(u32, u32), BTreeSet<(u32, u32)>>,
}

impl ModTwo {
    fn reduce(&mut self, k: u32, j: u32) -> BTreeSet<(u32, u32)> {
        if j > self.u_max {
            return BTreeSet::new();
        }
        if k == 0 || j <= 1 {
            return BTreeSet::from([(k, j)]);
        }
        if let Some(v) = self.memo.get(&(k, j)) {
            return v.clone();
        }
        let mut acc = BTreeSet::new();
        for (m, a) in self.terms.clone() {
            for t in self.reduce(k - 1 + a, j - 2 + m) {
                if !acc.remove(&t) {
                    acc.insert(t);
                }
            }
        }
        self.memo.insert((k, j), acc.clone());
        acc
    }
}

type Bits = Vec<u64>;

fn bits_zero(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bit_set(v: &mut Bits, i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

fn bits_xor(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn lowest(v: &Bits) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn ones(v: &Bits) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, w) in v.iter().enumerate() {
        let mut w = *w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(i * 64 + b);
            w &= w - 1;
        }
    }
    out
}

/// Row echelon form keyed by lowest set bit.
#[derive(Clone, Default)]
struct Echelon {
    rows: BTreeMap<usize, Bits>,
}

impl Echelon {
    fn reduce(&self, v: &Bits) -> Bits {
        let mut v = v.clone();
        while let Some(p) = lowest(&v) {
            match self.rows.get(&p) {
                Some(row) => bits_xor(&mut v, row),
                None => {
                    // keep the pivot, clear what lies above it
                    let mut rest = v.clone();
                    bit_set(&mut rest, p);
                    let reduced_rest = self.reduce(&rest);
                    let mut out = reduced_rest;
                    bit_set(&mut out, p);
                    return out;
                }
            }
        }
        v
    }

    /// Insert `v`; returns the new pivot if `v` was independent.
    fn insert(&mut self, v: &Bits) -> Option<usize> {
        let r = self.reduce(v);
        let p = lowest(&r)?;
        self.rows.insert(p, r);
        Some(p)
    }

    fn contains(&self, v: &Bits) -> bool {
        lowest(&self.reduce(v)).is_none()
    }
}

/// A degree-law or consistency problem found while turning pages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeViolation {
    pub r: u32,
    pub source: String,
    pub target: String,
    pub shift: u32,
}

/// State of the computation at page `r`: `E^r = Z_r / B_r` inside `E^2`.
#[derive(Clone)]
struct PageState {
    r: u32,
    z: Echelon,
    b: Echelon,
}

/// A full run of the spectral sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSequence {
    pub space: BssSpace,
    pub caps: BssCaps,
    pub fixtures: FixtureTable,
    /// Pages `E^1 ..= E^8`.
    pub pages: Vec<SpectralPage>,
    /// `r → (leading labels of Im d^r)` for `r ≥ 2`; `r = 1` is in `x1_families`.
    pub torsion: TorsionFiltration,
    /// Number of nonzero monomial-level differential values checked.
    pub degree_checks: usize,
    pub degree_violations: Vec<DegreeViolation>,
    /// Rule values dropped because they left the α/u caps.
    pub truncated_values: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionFiltration {
    /// `M_1 = Im d^1`, as families `alpha_s * (basis class)`.
    pub x1_families: Vec<String>,
    /// `M_r / M_{r−1} ≅ Im d^r` for `r ≥ 2`, by leading `E^2` labels.
    pub orders: BTreeMap<u32, Vec<ClassLabel>>,
}

impl TorsionFiltration {
    pub fn of_order(&self, r: u32) -> Vec<ClassLabel> {
        self.orders.get(&r).cloned().unwrap_or_default()
    }
}

struct Engine {
    space: BssSpace,
    caps: BssCaps,
    fixtures: FixtureTable,
    labels: Vec<ClassLabel>,
    index: HashMap<ClassLabel, usize>,
    mod2: ModTwo,
    truncated: usize,
    degree_checks: usize,
    violations: Vec<DegreeViolation>,
}

impl Engine {
    fn new(space: BssSpace, caps: BssCaps, with_repair: bool) -> Result<Self, BssError> {
        let u_max = match space {
            BssSpace::Point => 0,
            BssSpace::RPInfty => caps.u,
            BssSpace::RPOdd { k } => 8 * k + 4,
        };
        let terms = if u_max >= 2 { odd_two_series_terms(u_max + 1)? } else { Vec::new() };
        let labels = e2_labels(space, caps.alpha, u_max);
        let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Ok(Engine {
            space,
            caps,
            fixtures: fixture_table(space, with_repair),
            labels,
            index,
            mod2: ModTwo {
                terms,
                u_max,
                memo: HashMap::new(),
            },
            truncated: 0,
            degree_checks: 0,
            violations: Vec::new(),
        })
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn vector(&mut self, labels: &[ClassLabel]) -> Bits {
        let mut v = bits_zero(self.n());
        for l in labels {
            match self.index.get(l) {
                Some(&i) => bit_set(&mut v, i),
                None => self.truncated += 1,
            }
        }
        v
    }

    /// `α^k u^j · (monomial)` reduced into `E^2` labels with v2-exponent `v2`.
    fn times_alpha(&mut self, v2: u8, l: &ClassLabel, extra_alpha: u32) -> Vec<ClassLabel> {
        if let Some(t) = l.sphere {
            return vec![ClassLabel::odd(v2, l.alpha + extra_alpha, t)];
        }
        if l.u == 0 {
            return vec![ClassLabel::even(v2, l.alpha + extra_alpha, 0)];
        }
        self.mod2
            .reduce(l.alpha + extra_alpha, l.u)
            .into_iter()
            .map(|(k, j)| ClassLabel::even(v2, k, j))
            .collect()
    }

    /// Monomial-level `d^r` from the fixture rules.
    fn rule_value(&mut self, r: u32, l: &ClassLabel) -> Vec<ClassLabel> {
        let mut out: BTreeSet<ClassLabel> = BTreeSet::new();
        let push = |out: &mut BTreeSet<ClassLabel>, ls: Vec<ClassLabel>| {
            for x in ls {
                if !out.remove(&x) {
                    out.insert(x);
                }
            }
        };
        let top = self.space.top_u();
        let sphere = self.space.sphere_dim();
        let rules: Vec<RuleKind> = self.fixtures.rules.iter().filter(|f| f.r == r).map(|f| f.kind).collect();
        for kind in rules {
            match kind {
                RuleKind::PointD3 => {
                    match l.v2 {
                        2 => {
                            let v = self.times_alpha(4, l, 1);
                            push(&mut out, v)
                        }
                        6 => {
                            let v = self.times_alpha(0, l, 1);
                            push(&mut out, v)
                        }
                        _ => {}
                    }
                }
                RuleKind::PointD7 => {
                    if l.v2 == 4 {
                        push(&mut out, vec![ClassLabel { v2: 0, ..*l }]);
                    }
                }
                RuleKind::TopD2 => {
                    if let (Some(n), Some(t)) = (top, sphere) {
                        if l.sphere.is_none() && l.u == n && l.v2 % 2 == 1 {
                            push(&mut out, vec![ClassLabel::odd(l.v2 + 1, l.alpha + 4, t)]);
                        }
                    }
                }
                RuleKind::NextToTopD4 => {
                    if let (Some(n), Some(t)) = (top, sphere) {
                        if l.sphere.is_none() && l.u == n - 1 && l.alpha == 0 {
                            match l.v2 {
                                6 => push(&mut out, vec![ClassLabel::odd(4, 0, t)]),
                                2 => push(&mut out, vec![ClassLabel::odd(0, 0, t)]),
                                _ => {}
                            }
                        }
                    }
                }
                RuleKind::TopD7 => {
                    if let Some(n) = top {
                        if l.sphere.is_none() && l.u == n && l.alpha == 0 && l.v2 == 6 {
                            push(&mut out, vec![ClassLabel::even(2, 0, n)]);
                        }
                    }
                }
                RuleKind::RepairD7 => {
                    if let Some(t) = sphere {
                        if l.sphere.is_some() && l.alpha == 3 && l.v2 == 6 {
                            push(&mut out, vec![ClassLabel::odd(2, 3, t)]);
                        }
                    }
                }
            }
        }
        let shift = differential_degree(r);
        for t in &out {
            self.degree_checks += 1;
            if (l.degree() + shift) % 48 != t.degree() {
                self.violations.push(DegreeViolation {
                    r,
                    source: l.name(),
                    target: t.name(),
                    shift: (t.degree() + 48 - l.degree()) % 48,
                });
            }
        }
        out.into_iter().collect()
    }

    fn apply(&mut self, r: u32, v: &Bits) -> Bits {
        let mut acc = bits_zero(self.n());
        for i in ones(v) {
            let l = self.labels[i];
            let img = self.rule_value(r, &l);
            let w = self.vector(&img);
            bits_xor(&mut acc, &w);
        }
        acc
    }

    fn initial(&self) -> PageState {
        let mut z = Echelon::default();
        for i in 0..self.n() {
            let mut v = bits_zero(self.n());
            bit_set(&mut v, i);
            z.insert(&v);
        }
        PageState {
            r: 2,
            z,
            b: Echelon::default(),
        }
    }

    /// Basis representatives of `Z_r / B_r`: rows of `Z_r` reduced modulo
    /// `B_r` whose pivot is not a `B_r` pivot.
    fn representatives(&self, st: &PageState) -> (Echelon, BTreeMap<usize, Bits>) {
        let mut comb = st.b.clone();
        let mut reps = BTreeMap::new();
        for row in st.z.rows.values() {
            if let Some(p) = comb.insert(row) {
                reps.insert(p, comb.rows[&p].clone());
            }
        }
        (comb, reps)
    }

    /// Express `y ∈ Z_r` modulo `B_r` in terms of representatives.
    fn decompose(&self, comb: &Echelon, reps: &BTreeMap<usize, Bits>, y: &Bits) -> Option<Vec<usize>> {
        let mut y = y.clone();
        let mut used = Vec::new();
        while let Some(p) = lowest(&y) {
            let row = comb.rows.get(&p)?;
            if reps.contains_key(&p) {
                used.push(p);
            }
            bits_xor(&mut y, row);
        }
        Some(used)
    }

    /// Build `E^r` as a page and turn it into `E^{r+1}`.
    fn turn(&mut self, st: &PageState) -> Result<(SpectralPage, PageState, Vec<ClassLabel>), BssError> {
        let r = st.r;
        let (comb, reps) = self.representatives(st);
        let mut differential = BTreeMap::new();
        let mut images: Vec<(Bits, Bits)> = Vec::new();
        // well-definedness: d^r(B_r) ⊆ B_r
        for row in st.b.rows.values() {
            let y = self.apply(r, row);
            if !st.b.contains(&y) {
                return Err(BssError::CompositionFailure {
                    r,
                    detail: format!("d^{r} does not preserve boundaries at {}", self.render(row)),
                });
            }
        }
        for (p, z) in &reps {
            let y = self.apply(r, z);
            let y = st.b.reduce(&y);
            let Some(parts) = self.decompose(&comb, &reps, &y) else {
                return Err(BssError::CompositionFailure {
                    r,
                    detail: format!("d^{r}({}) leaves the cycles", self.labels[*p]),
                });
            };
            // d∘d = 0 on the page
            let yy = self.apply(r, &y);
            if !st.b.contains(&yy) {
                return Err(BssError::CompositionFailure {
                    r,
                    detail: format!("d^{r}∘d^{r} ≠ 0 at {}", self.labels[*p]),
                });
            }
            if !parts.is_empty() {
                differential.insert(self.labels[*p], parts.iter().map(|q| self.labels[*q]).collect());
            }
            images.push((y, z.clone()));
        }
        // parity: even d^r vanishes when every class has even degree
        if r.is_multiple_of(2) && reps.keys().all(|p| self.labels[*p].degree().is_multiple_of(2)) && !differential.is_empty() {
            return Err(BssError::CompositionFailure {
                r,
                detail: "nonzero even differential on an all-even page".into(),
            });
        }
        // kernel of z ↦ d^r z mod B_r, by elimination on (image | source) pairs
        let mut next_z = st.b.clone();
        let mut next_b = st.b.clone();
        let mut elim: BTreeMap<usize, (Bits, Bits)> = BTreeMap::new();
        for (y, z) in images {
            let (mut y, mut z) = (y, z);
            loop {
                match lowest(&y) {
                    None => {
                        next_z.insert(&z);
                        break;
                    }
                    Some(p) => match elim.get(&p) {
                        Some((ey, ez)) => {
                            bits_xor(&mut y, ey);
                            bits_xor(&mut z, ez);
                        }
                        None => {
                            next_b.insert(&y);
                            elim.insert(p, (y, z));
                            break;
                        }
                    },
                }
            }
        }
        let image_leads: Vec<ClassLabel> = {
            let mut only_new = st.b.clone();
            let mut leads = Vec::new();
            for (y, _) in elim.values() {
                if let Some(p) = only_new.insert(y) {
                    leads.push(self.labels[p]);
                }
            }
            leads.sort();
            leads
        };
        let page = SpectralPage {
            r,
            structure: CoefficientStructure::F2Alpha,
            classes: reps.keys().map(|p| self.labels[*p]).collect::<BTreeSet<_>>().into_iter().collect(),
            differential,
        };
        Ok((
            page,
            PageState {
                r: r + 1,
                z: next_z,
                b: next_b,
            },
            image_leads,
        ))
    }

    fn render(&self, v: &Bits) -> String {
        ones(v).iter().map(|i| self.labels[*i].name()).collect::<Vec<_>>().join(" + ")
    }

    /// Page 1, listed from the `d^1 = v2^{-3}(1 − c)` formula.
    fn e1_page(&mut self) -> SpectralPage {
        let u_max = self.mod2.u_max;
        let mut classes = Vec::new();
        let mut differential = BTreeMap::new();
        let u_range: Vec<u32> = if self.space == BssSpace::Point { vec![0] } else { (1..=u_max).collect() };
        for v2 in 0..8u8 {
            for k in 0..=self.caps.alpha {
                let mut here: Vec<ClassLabel> = u_range.iter().map(|&j| ClassLabel::even(v2, k, j)).collect();
                if let Some(t) = self.space.sphere_dim() {
                    here.push(ClassLabel::odd(v2, k, t));
                }
                for l in here {
                    let two_torsion = self.space.top_u() == Some(l.u) && l.sphere.is_none();
                    if v2 % 2 == 1 && !two_torsion {
                        let target = ClassLabel { v2: (v2 + 5) % 8, ..l };
                        self.degree_checks += 1;
                        if (l.degree() + differential_degree(1)) % 48 != target.degree() {
                            self.violations.push(DegreeViolation {
                                r: 1,
                                source: l.name(),
                                target: target.name(),
                                shift: (target.degree() + 48 - l.degree()) % 48,
                            });
                        }
                        differential.insert(l, vec![target]);
                    }
                    classes.push(l);
                }
            }
        }
        classes.sort();
        SpectralPage {
            r: 1,
            structure: CoefficientStructure::FreeZ2Alpha,
            classes,
            differential,
        }
    }

    fn x1_families(&self) -> Vec<String> {
        match self.space {
            BssSpace::Point => vec!["alpha_s*alpha^k (s = 0..3, alpha_0 = 2)".into()],
            BssSpace::RPInfty => vec!["alpha_s*alpha^k*u^j (s = 0..3, j >= 1)".into()],
            BssSpace::RPOdd { k } => vec![
                format!("alpha_s*alpha^k*u^j (s = 0..3, 1 <= j <= {})", 8 * k + 4),
                format!("alpha_s*alpha^k*i{} (s = 0..3)", 16 * k + 9),
            ],
        }
    }
}

/// `E^2` labels: `v2^{even} ⊗ R/2R`, `v2^{odd} ⊗ R[2]`, and `v2^{even} α^k i`.
fn e2_labels(space: BssSpace, alpha_cap: u32, u_max: u32) -> Vec<ClassLabel> {
    let mut out = Vec::new();
    for v2 in (0..8u8).step_by(2) {
        for k in 0..=alpha_cap {
            if space == BssSpace::Point {
                out.push(ClassLabel::even(v2, k, 0));
            } else {
                out.push(ClassLabel::even(v2, k, 1));
            }
        }
        if space != BssSpace::Point {
            for j in 2..=u_max {
                out.push(ClassLabel::even(v2, 0, j));
            }
        }
    }
    if let (Some(n), Some(t)) = (space.top_u(), space.sphere_dim()) {
        for v2 in (1..8u8).step_by(2) {
            for k in 0..=alpha_cap {
                out.push(ClassLabel::even(v2, k, n));
            }
        }
        for v2 in (0..8u8).step_by(2) {
            for k in 0..=alpha_cap {
                out.push(ClassLabel::odd(v2, k, t));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Run the spectral sequence from `E^1` through `E^8`.
pub fn compute(space: BssSpace, caps: BssCaps, with_repair: bool) -> Result<SpectralSequence, BssError> {
    let mut eng = Engine::new(space, caps, with_repair)?;
    let mut pages = vec![eng.e1_page()];
    let mut st = eng.initial();
    let mut orders = BTreeMap::new();
    for _ in 2..=7 {
        let r = st.r;
        let (page, next, image) = eng.turn(&st)?;
        pages.push(page);
        if !image.is_empty() {
            orders.insert(r, image);
        }
        st = next;
    }
    let (comb_reps, _) = (eng.representatives(&st), ());
    let e8 = SpectralPage {
        r: 8,
        structure: CoefficientStructure::F2Alpha,
        classes: comb_reps.1.keys().map(|p| eng.labels[*p]).collect::<BTreeSet<_>>().into_iter().collect(),
        differential: BTreeMap::new(),
    };
    pages.push(e8);
    Ok(SpectralSequence {
        space,
        caps,
        fixtures: eng.fixtures.clone(),
        pages,
        torsion: TorsionFiltration {
            x1_families: eng.x1_families(),
            orders,
        },
        degree_checks: eng.degree_checks,
        degree_violations: eng.violations.clone(),
        truncated_values: eng.truncated,
    })
}

/// `E^1` of `space` within caps.
pub fn build_e1(space: BssSpace, caps: BssCaps) -> Result<SpectralPage, BssError> {
    Ok(Engine::new(space, caps, false)?.e1_page())
}

impl SpectralSequence {
    pub fn page(&self, r: u32) -> Result<&SpectralPage, BssError> {
        if !(1..=8).contains(&r) {
            return Err(BssError::NoSuchPage(r));
        }
        Ok(&self.pages[r as usize - 1])
    }

    /// Classes of `E^r` inside the comparison window.
    pub fn windowed(&self, r: u32) -> Result<BTreeSet<ClassLabel>, BssError> {
        Ok(self.page(r)?.classes.iter().filter(|c| c.within(&self.caps)).copied().collect())
    }

    /// Torsion generators of order `r` inside the window.
    pub fn windowed_torsion(&self, r: u32) -> BTreeSet<ClassLabel> {
        self.torsion.of_order(r).into_iter().filter(|c| c.within(&self.caps)).collect()
    }

    pub fn windowed_survivors(&self) -> BTreeSet<ClassLabel> {
        self.windowed(8).unwrap_or_default()
    }

    /// CSV rows `page,class,degree,differential_target`, restricted to the
    /// comparison window (classes near the caps can be truncation artefacts).
    pub fn pages_csv(&self, only: Option<u32>) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["page", "class", "degree", "differential_target"]).expect("in-memory write");
        for p in &self.pages {
            if only.is_some_and(|r| r != p.r) {
                continue;
            }
            for c in p.classes.iter().filter(|c| c.within(&self.caps)) {
                let target = p
                    .differential
                    .get(c)
                    .map(|ts| {
                        let s = ts.iter().map(|t| t.name()).collect::<Vec<_>>().join(" + ");
                        if p.r == 1 {
                            format!("2*({s})")
                        } else {
                            s
                        }
                    })
                    .unwrap_or_default();
                w.write_record([p.r.to_string(), c.name(), c.degree().to_string(), target])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// `d^r` of a basis class of `E^r`, in terms of the basis of `E^r`.
pub fn apply_d(r: u32, class: &ClassLabel, ss: &SpectralSequence) -> Result<Vec<ClassLabel>, BssError> {
    let page = ss.page(r)?;
    if !page.contains(class) {
        return Err(BssError::NotInBasis(class.name(), r));
    }
    Ok(page.differential.get(class).cloned().unwrap_or_default())
}

/// The tabulated pages, enumerated inside the comparison window.
pub fn printed_page(space: BssSpace, r: u32, caps: &BssCaps) -> Option<BTreeSet<ClassLabel>> {
    let (aw, uw) = (caps.window_alpha, caps.window_u);
    let mut s = BTreeSet::new();
    let evens = [0u8, 2, 4, 6];
    match space {
        BssSpace::Point => match r {
            2 | 3 => {
                for v in evens {
                    for k in 0..=aw {
                        s.insert(ClassLabel::even(v, k, 0));
                    }
                }
            }
            4..=7 => {
                s.insert(ClassLabel::even(0, 0, 0));
                s.insert(ClassLabel::even(4, 0, 0));
            }
            8 => {}
            _ => return None,
        },
        BssSpace::RPInfty => match r {
            2 | 3 => {
                for v in evens {
                    for k in 0..=aw {
                        s.insert(ClassLabel::even(v, k, 1));
                    }
                    for j in 2..=uw {
                        s.insert(ClassLabel::even(v, 0, j));
                    }
                }
            }
            4..=7 => {
                for v in [0u8, 4] {
                    for j in 1..=3 {
                        s.insert(ClassLabel::even(v, 0, j));
                    }
                }
            }
            8 => {}
            _ => return None,
        },
        BssSpace::RPOdd { k: kk } => {
            let n = 8 * kk + 4;
            let t = 16 * kk + 9;
            match r {
                2 | 3 => {
                    for v in evens {
                        for k in 0..=aw {
                            s.insert(ClassLabel::even(v, k, 1));
                        }
                        for j in 1..=n.min(uw) {
                            s.insert(ClassLabel::even(v, 0, j));
                        }
                        let odd_alpha = if r == 2 { aw } else { 3.min(aw) };
                        for k in 0..=odd_alpha {
                            s.insert(ClassLabel::odd(v, k, t));
                        }
                    }
                    if r == 2 && n <= uw {
                        for v in [1u8, 3, 5, 7] {
                            for k in 0..=aw {
                                s.insert(ClassLabel::even(v, k, n));
                            }
                        }
                    }
                }
                4 => {
                    for v in [0u8, 4] {
                        for j in 1..=3 {
                            s.insert(ClassLabel::even(v, 0, j));
                        }
                        s.insert(ClassLabel::odd(v, 0, t));
                    }
                    for v in [6u8, 2] {
                        for j in [n - 1, n] {
                            s.insert(ClassLabel::even(v, 0, j));
                        }
                    }
                }
                5..=7 => {
                    for v in [0u8, 4] {
                        for j in 1..=3 {
                            s.insert(ClassLabel::even(v, 0, j));
                        }
                    }
                    for v in [6u8, 2] {
                        s.insert(ClassLabel::even(v, 0, n));
                        if aw >= 3 {
                            s.insert(ClassLabel::odd(v, 3, t));
                        }
                    }
                }
                8 => {}
                _ => return None,
            }
        }
    }
    Some(s.into_iter().filter(|c| c.alpha <= aw && c.u <= uw).collect())
}

/// Tabulated x-torsion generators of order `r ≥ 2` (leading `E^2` labels)
/// inside the window. `w u^j` leads with `v2^4 u^{j+2}` since
/// `α u^j ≡ u^{j+2} + …` mod 2.
pub fn printed_torsion(space: BssSpace, r: u32, caps: &BssCaps) -> Option<BTreeSet<ClassLabel>> {
    let (aw, uw) = (caps.window_alpha, caps.window_u);
    let mut s = BTreeSet::new();
    match (space, r) {
        (BssSpace::Point, 3) => {
            for k in 1..=aw {
                s.insert(ClassLabel::even(0, k, 0));
                s.insert(ClassLabel::even(4, k, 0));
            }
        }
        (BssSpace::Point, 7) => {
            s.insert(ClassLabel::even(0, 0, 0));
        }
        (BssSpace::RPInfty, 3) => {
            for k in 1..=aw {
                s.insert(ClassLabel::even(0, k, 1));
                s.insert(ClassLabel::even(4, k, 1));
            }
            for j in 4..=uw {
                s.insert(ClassLabel::even(0, 0, j));
                s.insert(ClassLabel::even(4, 0, j));
            }
        }
        (BssSpace::RPInfty, 7) => {
            for j in 1..=3 {
                s.insert(ClassLabel::even(0, 0, j));
            }
        }
        (BssSpace::Point | BssSpace::RPInfty, 2 | 4 | 5 | 6) => {}
        _ => return None,
    }
    Some(s.into_iter().filter(|c| c.alpha <= aw && c.u <= uw).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub r: u32,
    pub only_computed: Vec<String>,
    pub only_printed: Vec<String>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.only_computed.is_empty() && self.only_printed.is_empty()
    }
}

/// Diff a computed page against its printed table inside the window.
pub fn verify_against_table(ss: &SpectralSequence, r: u32) -> Result<Option<DiffReport>, BssError> {
    let Some(printed) = printed_page(ss.space, r, &ss.caps) else { return Ok(None) };
    let computed = ss.windowed(r)?;
    Ok(Some(DiffReport {
        r,
        only_computed: computed.difference(&printed).map(|c| c.name()).collect(),
        only_printed: printed.difference(&computed).map(|c| c.name()).collect(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairCandidate {
    pub r: u32,
    pub source: String,
    pub target: String,
    pub degree_shift: u32,
    pub selected: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: String,
    pub pages: Vec<u32>,
    pub classes: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErratumReport {
    pub space: String,
    pub findings: Vec<Finding>,
    pub e8_survivors: Vec<String>,
    pub repair_candidates: Vec<RepairCandidate>,
    /// `E^8` inside the window once the selected repair is added.
    pub e8_after_repair: Vec<String>,
}

impl ErratumReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Diff every page against the printed tables, check the printed tables
/// against each other, and look for differentials that would restore `E^8 = 0`.
pub fn erratum_report(space: BssSpace, caps: BssCaps) -> Result<ErratumReport, BssError> {
    let ss = compute(space, caps, false)?;
    let mut findings = Vec::new();
    for r in 2..=8 {
        if let Some(d) = verify_against_table(&ss, r)? {
            if !d.only_computed.is_empty() {
                findings.push(Finding {
                    kind: "missing_from_printed_page".into(),
                    pages: vec![r],
                    classes: d.only_computed.clone(),
                    detail: format!("computed E^{r} has classes the printed E^{r} omits"),
                });
            }
            if !d.only_printed.is_empty() {
                findings.push(Finding {
                    kind: "printed_class_not_computed".into(),
                    pages: vec![r],
                    classes: d.only_printed.clone(),
                    detail: format!("printed E^{r} lists classes the computation does not produce"),
                });
            }
        }
    }
    for r in 2..8 {
        if let (Some(a), Some(b)) = (printed_page(space, r, &caps), printed_page(space, r + 1, &caps)) {
            let extra: Vec<String> = b.difference(&a).map(|c| c.name()).collect();
            if !extra.is_empty() {
                findings.push(Finding {
                    kind: "printed_pages_inconsistent".into(),
                    pages: vec![r, r + 1],
                    classes: extra,
                    detail: format!("printed E^{} contains classes absent from printed E^{r}", r + 1),
                });
            }
        }
    }
    let survivors: Vec<ClassLabel> = ss.windowed_survivors().into_iter().collect();
    if !survivors.is_empty() {
        let live: Vec<u32> = (2..=8)
            .filter(|r| survivors.iter().all(|c| ss.page(*r).map(|p| p.contains(c)).unwrap_or(false)))
            .collect();
        findings.push(Finding {
            kind: "nonzero_E8".into(),
            pages: live,
            classes: survivors.iter().map(|c| c.name()).collect(),
            detail: "E^8 = 0 fails: these classes support and receive no differential".into(),
        });
    }
    let mut candidates = Vec::new();
    for r in 2..=7u32 {
        for a in &survivors {
            for b in &survivors {
                if a == b || (a.degree() + differential_degree(r)) % 48 != b.degree() {
                    continue;
                }
                // every tabulated d^7 lowers the v2-exponent by exactly 4
                let lowers = r == 7 && a.v2 >= 4 && b.v2 + 4 == a.v2 && a.alpha == b.alpha && a.u == b.u;
                candidates.push(RepairCandidate {
                    r,
                    source: a.name(),
                    target: b.name(),
                    degree_shift: differential_degree(r),
                    selected: lowers,
                    reason: if lowers {
                        "degree-compatible and lowers the v2-exponent by 4 like every tabulated d^7".into()
                    } else {
                        "degree-compatible but raises the v2-exponent, unlike every tabulated d^7".into()
                    },
                });
            }
        }
    }
    let selected: Vec<&RepairCandidate> = candidates.iter().filter(|c| c.selected).collect();
    let e8_after = if selected.len() == 1 && selected[0].source.starts_with("v2^6*alpha^3*i") {
        compute(space, caps, true)?.windowed_survivors().iter().map(|c| c.name()).collect()
    } else {
        survivors.iter().map(|c| c.name()).collect()
    };
    Ok(ErratumReport {
        space: space.to_string(),
        findings,
        e8_survivors: survivors.iter().map(|c| c.name()).collect(),
        repair_candidates: candidates,
        e8_after_repair: e8_after,
    })
}
