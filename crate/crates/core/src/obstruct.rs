//! Non-immersion queries: `RP^{2n}` in `R^{2k+1}` through the absence of an
//! axial map `RP^{2n} × RP^{2^L−2k−3} → RP^{2^L−2n−2}`.
//!
//! The pipeline derives `(n, k)` from `m`, checks the congruence gates,
//! picks `L` (so that `2^L − 2k − 3 = 16K + 9`), reduces `(u1 +_F u2)^N`
//! with `N = 2^{L−1} − n` in `RP^{2n} × RP^{16K+10}`, and certifies the
//! surviving monomials. Survivors in the last column `j = 8K+5` vanish on the
//! E(2) side and are certified separately through `d^1`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{GradedSeries, TwoLocal};
use crate::fgl::Convention;
use crate::projring::{self, make_ring, Caps, Monomial, RingError, SpaceSpec, MAX_DESK_EXPONENT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructError {
    #[error("gate refused: {0}")]
    GateRefused(String),
    #[error("side condition failed: {0}")]
    SideConditionFailed(String),
    #[error("caps too small: {0}")]
    CapTooSmall(String),
    #[error("beyond desk scale: {0}")]
    CapExceeded(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Ring(RingError),
}

impl From<RingError> for ObstructError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::CapTooSmall(msg) => ObstructError::CapTooSmall(msg),
            other => ObstructError::Ring(other),
        }
    }
}

impl ObstructError {
    /// Refusals (as opposed to computations that ran).
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            ObstructError::GateRefused(_)
                | ObstructError::SideConditionFailed(_)
                | ObstructError::CapExceeded(_)
                | ObstructError::InvalidQuery(_)
        )
    }
}

/// Desk-scale limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObstructCaps {
    /// α-cap of the product ring.
    pub alpha: u32,
    /// Largest power `N = 2^{L−1} − n` attempted.
    pub max_power: u64,
    /// Largest `L` searched.
    pub max_l: u32,
}

impl Default for ObstructCaps {
    fn default() -> Self {
        ObstructCaps {
            alpha: 32,
            max_power: 64,
            max_l: 62,
        }
    }
}

impl ObstructCaps {
    /// Apply `ER2_CAPS`-style overrides such as `"alpha=40,max_power=128"`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, ObstructError> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| ObstructError::InvalidQuery(format!("cap override {part:?} is not key=value")))?;
            let bad = || ObstructError::InvalidQuery(format!("cap override {part:?} has a bad value"));
            match key.trim() {
                "alpha" => self.alpha = value.trim().parse().map_err(|_| bad())?,
                "max_power" => self.max_power = value.trim().parse().map_err(|_| bad())?,
                "max_l" => self.max_l = value.trim().parse().map_err(|_| bad())?,
                other => return Err(ObstructError::InvalidQuery(format!("unknown cap {other:?}"))),
            }
        }
        Ok(self)
    }
}

/// Number of ones in the binary expansion.
pub fn binary_weight(m: u64) -> u32 {
    m.count_ones()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub m: Option<u64>,
    pub alpha_m: Option<u32>,
    pub n: u64,
    pub k: u64,
    /// `(m mod 8, α(m) mod 8)` when `m` is known.
    pub residues: Option<(u64, u32)>,
}

impl Parameters {
    /// `RP^{2n}` and `R^{2k+1}`.
    pub fn dimensions(&self) -> (u64, u64) {
        (2 * self.n, 2 * self.k + 1)
    }

    pub fn statement(&self) -> String {
        let (p, e) = self.dimensions();
        format!("RP^{{{p}}} does not immerse in R^{{{e}}}")
    }
}

/// `n = m + α(m) − 1`, `k = 2m − α(m)`.
pub fn derive_parameters(m: u64) -> Result<Parameters, ObstructError> {
    if m == 0 {
        return Err(ObstructError::InvalidQuery("m must be positive".into()));
    }
    let a = binary_weight(m);
    Ok(Parameters {
        m: Some(m),
        alpha_m: Some(a),
        n: m + a as u64 - 1,
        k: 2 * m - a as u64,
        residues: Some((m % 8, a % 8)),
    })
}

pub fn explicit_parameters(n: u64, k: u64) -> Parameters {
    Parameters {
        m: None,
        alpha_m: None,
        n,
        k,
        residues: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    /// `(m, α(m)) ≡ (6,2)` or `(1,0)` mod 8; `None` without `m`.
    pub residue_gate: Option<bool>,
    pub k_is_2_mod_8: bool,
    pub n_is_0_or_7_mod_8: bool,
    pub passed: bool,
}

pub fn check_gates(p: &Parameters) -> GateReport {
    let residue_gate = p.residues.map(|r| r == (6, 2) || r == (1, 0));
    let k_ok = p.k % 8 == 2;
    let n_ok = matches!(p.n % 8, 0 | 7);
    GateReport {
        residue_gate,
        k_is_2_mod_8: k_ok,
        n_is_0_or_7_mod_8: n_ok,
        passed: residue_gate.unwrap_or(true) && k_ok && n_ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LChoice {
    pub l: u32,
    pub big_k: u64,
    /// `N = 2^{L−1} − n`.
    pub power: u64,
}

/// `(K, N)` for a given `L`, if `2^L − 2k − 3 = 16K + 9` with `K ≥ 1` and
/// `N ≥ 1`.
fn l_candidate(n: u64, k: u64, l: u32) -> Option<LChoice> {
    let two_l = 1u128.checked_shl(l)?;
    let odd = two_l.checked_sub(2 * k as u128 + 3)?;
    if odd < 25 || (odd - 9) % 16 != 0 {
        return None;
    }
    let power = (two_l / 2).checked_sub(n as u128)?;
    if power == 0 {
        return None;
    }
    Some(LChoice {
        l,
        big_k: ((odd - 9) / 16) as u64,
        power: u64::try_from(power).ok()?,
    })
}

/// Smallest `L` whose `K` satisfies the side condition (or the requested
/// one), within caps.
pub fn choose_l(p: &Parameters, requested: Option<u32>, caps: &ObstructCaps) -> Result<LChoice, ObstructError> {
    let pick = match requested {
        Some(l) => l_candidate(p.n, p.k, l).ok_or_else(|| {
            ObstructError::InvalidQuery(format!("L = {l} does not give 2^L - 2k - 3 = 16K + 9 with K >= 1"))
        })?,
        None => (1..=caps.max_l.min(120))
            .filter_map(|l| l_candidate(p.n, p.k, l))
            .find(|c| side_condition(p.n, c.big_k).holds)
            .ok_or_else(|| ObstructError::CapExceeded(format!("no L <= {} is admissible", caps.max_l)))?,
    };
    let top = 8 * pick.big_k + 5;
    if pick.power > caps.max_power || p.n > MAX_DESK_EXPONENT as u64 || top > MAX_DESK_EXPONENT as u64 {
        return Err(ObstructError::CapExceeded(format!(
            "L = {}, K = {}, N = {} needs (u1 + u2)^{} in RP^{} x RP^{}; this case is beyond desk scale \
             (caps: N <= {}, exponents <= {})",
            pick.l,
            pick.big_k,
            pick.power,
            pick.power,
            2 * p.n,
            16 * pick.big_k + 10,
            caps.max_power,
            MAX_DESK_EXPONENT
        )));
    }
    Ok(pick)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    /// Smallest `M` with `n ≤ 8M` (so `2n ≤ 16M + 16`).
    pub m: u64,
    pub n_le_8m: bool,
    pub upper: bool,
    pub even_below_odd: bool,
    pub holds: bool,
}

/// `n ≤ 8M < 8M + 8 < 8K + 5`, plus `2n < 16K + 9`.
pub fn side_condition(n: u64, big_k: u64) -> SideCondition {
    let m = n.div_ceil(8);
    let n_le_8m = n <= 8 * m;
    let upper = 8 * m + 8 < 8 * big_k + 5;
    let even_below_odd = 2 * n < 16 * big_k + 9;
    SideCondition {
        m,
        n_le_8m,
        upper,
        even_below_odd,
        holds: n_le_8m && upper && even_below_odd,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D1Source {
    pub class: String,
    pub family: String,
    pub value: String,
    pub hits_target: bool,
}

/// Why `u1^n i_{16K+9}` is not a `d^1`-boundary: every odd-degree `E^1`
/// class in the source degree, with its `d^1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnCertificate {
    pub target: String,
    pub target_degree: u32,
    pub source_degree: u32,
    pub sources: Vec<D1Source>,
    /// `u1^n` is not divisible by 2 in `E(2)^*(RP^{2n})`.
    pub target_not_even: bool,
    pub certified: bool,
}

/// Enumerate the odd part of `E^1` for `RP^{2n} ∧ RP^{16K+9}`:
/// `v2^s α^k u1^i i_{16K+9}` (`0 < i ≤ n`) and `v2^s α^k u1^i z_{16K−33}`
/// (`0 ≤ i < n`). `d^1` is `v2^{-3}(1 − c)` on the `v2` factor, `u1`, `α`,
/// `i` are permanent cycles, and `d^1 z_{16K−33} = 0` by naturality.
pub fn column_certificate(n: u32, big_k: u32, alpha_cap: u32) -> Result<ColumnCertificate, ObstructError> {
    let sphere = 16 * big_k as i64 + 9;
    let z = 16 * big_k as i64 - 33;
    let deg = |s: u32, k: u32, i: u32, base: i64| (-6 * s as i64 - 32 * k as i64 - 16 * i as i64 + base).rem_euclid(48) as u32;
    let target_degree = deg(0, 0, n, sphere);
    let source_degree = (target_degree + 48 - 18) % 48;
    let mono = |s: u32, k: u32, i: u32| {
        let mut parts = Vec::new();
        if s > 0 {
            parts.push(format!("v2^{s}"));
        }
        if k > 0 {
            parts.push(format!("alpha^{k}"));
        }
        if i > 0 {
            parts.push(format!("u1^{i}"));
        }
        parts
    };
    let mut sources = Vec::new();
    for s in 0..8u32 {
        for k in 0..=alpha_cap {
            for i in 0..=n {
                for (family, base, ok) in [("i", sphere, i > 0), ("z", z, i < n)] {
                    if !ok || deg(s, k, i, base) != source_degree {
                        continue;
                    }
                    let name = {
                        let mut p = mono(s, k, i);
                        p.push(if family == "i" { format!("i{sphere}") } else { format!("z{z}") });
                        p.join("*")
                    };
                    let value = if s % 2 == 0 {
                        "0".to_string()
                    } else {
                        let mut p = mono((s + 5) % 8, k, i);
                        p.push(if family == "i" { format!("i{sphere}") } else { format!("z{z}") });
                        format!("2*{}", p.join("*"))
                    };
                    sources.push(D1Source {
                        class: name,
                        family: family.into(),
                        value,
                        // z-sources land in the z-part; i-sources land in 2·(i-part)
                        hits_target: false,
                    });
                }
            }
        }
    }
    let target_not_even = u_top_is_not_even(n, alpha_cap)?;
    Ok(ColumnCertificate {
        target: format!("u1^{n}*i{sphere}"),
        target_degree,
        source_degree,
        certified: target_not_even && sources.iter().all(|s| !s.hits_target),
        sources,
        target_not_even,
    })
}

/// `u^n ∉ 2·E(2)^*(RP^{2n})`: every `2 α^k u^j` (`j < n`) has its lowest
/// u-exponent part at `α^{k+1} u^{j+1}`, which has positive α-exponent, and
/// `2 u^n = 0`. Checked on all generators up to the α-cap.
fn u_top_is_not_even(n: u32, alpha_cap: u32) -> Result<bool, ObstructError> {
    let ring = make_ring(SpaceSpec::RPEven(n), Convention::Araki, Caps::default())?;
    for k in 0..=alpha_cap.min(ring.caps.alpha.saturating_sub(1)) {
        for j in 1..=n {
            let e = GradedSeries::monomial(ring.table(), &[("alpha", k as i64), ("u", j as i64)], TwoLocal::from_int(2))
                .map_err(RingError::from)?;
            let nf = projring::normal_form(&e, &ring)?;
            if j == n {
                if !nf.is_zero() {
                    return Ok(false);
                }
                continue;
            }
            let lowest = nf.monomials.iter().map(|m| m.e1).min();
            let low_alpha_ok = nf.monomials.iter().filter(|m| Some(m.e1) == lowest).all(|m| m.alpha >= 1);
            if lowest != Some(j + 1) || !low_alpha_ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub i: u32,
    pub j: u32,
    pub monomial: String,
    /// `j = 8K+5`: certified through the column argument.
    pub last_column: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gates {
    pub congruences: GateReport,
    pub side_condition: SideCondition,
    pub strategies_agree: bool,
    pub alpha_cap_stable: bool,
    pub certified_alpha_window: i64,
    pub only_degree_16_multiples: bool,
    pub no_alpha_u1_u2_terms: bool,
    pub no_pure_powers: bool,
    pub column: Option<ColumnCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub m: Option<u64>,
    pub alpha_m: Option<u32>,
    pub n: u64,
    pub k: u64,
    pub l: u32,
    pub big_k: u64,
    pub power: u64,
    pub space: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub budget_ms: u64,
    /// Wall-clock time; omitted unless requested so reports stay byte-stable.
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub params: ReportParams,
    pub gates: Gates,
    pub survivors: Vec<Survivor>,
    pub verdict: String,
    pub nonzero: bool,
    pub caps: ObstructCaps,
    pub timings: Timings,
}

/// Evaluate `(u1 +_F u2)^N` in `RP^{2n} × RP^{16K+10}` and certify.
pub fn evaluate_obstruction(
    p: &Parameters,
    choice: LChoice,
    caps: &ObstructCaps,
) -> Result<ObstructionReport, ObstructError> {
    let start = Instant::now();
    let congruences = check_gates(p);
    if !congruences.n_is_0_or_7_mod_8 {
        return Err(ObstructError::GateRefused(format!(
            "n = {} is not 0 or 7 mod 8, so u^(n+1) = 0 is not available",
            p.n
        )));
    }
    let side = side_condition(p.n, choice.big_k);
    if !side.holds {
        return Err(ObstructError::SideConditionFailed(format!(
            "need n <= 8M < 8M+8 < 8K+5 and 2n < 16K+9; got n = {}, M = {}, K = {}",
            p.n, side.m, choice.big_k
        )));
    }
    let n = u32::try_from(p.n).map_err(|_| ObstructError::CapExceeded("n too large".into()))?;
    let big_k = u32::try_from(choice.big_k).map_err(|_| ObstructError::CapExceeded("K too large".into()))?;
    let power = u32::try_from(choice.power).map_err(|_| ObstructError::CapExceeded("N too large".into()))?;
    let spec = SpaceSpec::ProductEvenOdd(n, big_k);

    let run = |alpha: u32| -> Result<projring::SumPower, ObstructError> {
        let ring = make_ring(spec, Convention::Araki, Caps { alpha, u: 0 })?;
        Ok(projring::fgl_sum_power_detailed(power, &ring, true)?)
    };
    let base = run(caps.alpha)?;
    let wider = run(caps.alpha + 4)?;
    let window = make_ring(spec, Convention::Araki, Caps { alpha: caps.alpha, u: 0 })?.alpha_exact_through();
    if window < 0 {
        return Err(ObstructError::CapTooSmall(format!(
            "alpha cap {} certifies no alpha-exponent in this ring (window {window})",
            caps.alpha
        )));
    }
    let nf = &base.normal_form;
    let certified = |s: &BTreeSet<Monomial>| -> BTreeSet<Monomial> {
        s.iter().copied().filter(|m| (m.alpha as i64) <= window).collect()
    };
    let strategies_agree = base.cross_check.as_ref().map(|c| c.monomials == nf.monomials).unwrap_or(false)
        && wider.cross_check.as_ref().map(|c| c.monomials == wider.normal_form.monomials).unwrap_or(false);
    let alpha_cap_stable = certified(&nf.monomials) == certified(&wider.normal_form.monomials);

    let top = 8 * big_k + 5;
    let kept = certified(&nf.monomials);
    let survivors: Vec<Survivor> = kept
        .iter()
        .filter(|m| m.alpha == 0 && m.v2 == 0 && m.e1 >= 1 && m.e2 >= 1)
        .map(|m| Survivor {
            i: m.e1,
            j: m.e2,
            monomial: m.render(true),
            last_column: m.e2 == top,
        })
        .collect();
    let only_degree_16_multiples = nf.monomials.iter().all(|m| m.v2 == 0);
    let no_alpha_u1_u2_terms = !nf.monomials.iter().any(|m| m.alpha > 0 && m.e2 == 1);
    let no_pure_powers = !nf.monomials.iter().any(|m| m.e1 == 0 || m.e2 == 0);
    let column = if survivors.iter().any(|s| s.last_column) {
        Some(column_certificate(n, big_k, caps.alpha.min(12))?)
    } else {
        None
    };
    let column_ok = column.as_ref().map(|c| c.certified).unwrap_or(true);
    let nonzero = !survivors.is_empty()
        && strategies_agree
        && alpha_cap_stable
        && column_ok
        && no_alpha_u1_u2_terms
        && no_pure_powers
        && survivors.len() == kept.len();
    let verdict = if nonzero {
        p.statement()
    } else {
        "inconclusive".to_string()
    };
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(ObstructionReport {
        params: ReportParams {
            m: p.m,
            alpha_m: p.alpha_m,
            n: p.n,
            k: p.k,
            l: choice.l,
            big_k: choice.big_k,
            power: choice.power,
            space: format!("RP^{} x RP^{}", 2 * p.n, 16 * choice.big_k + 9),
        },
        gates: Gates {
            congruences,
            side_condition: side,
            strategies_agree,
            alpha_cap_stable,
            certified_alpha_window: window,
            only_degree_16_multiples,
            no_alpha_u1_u2_terms,
            no_pure_powers,
            column,
        },
        survivors,
        verdict,
        nonzero,
        caps: *caps,
        timings: Timings {
            budget_ms: 60_000,
            elapsed_ms: Some(elapsed),
        },
    })
}

/// Full query: gates, `L`, evaluation.
pub fn run_query(
    p: &Parameters,
    requested_l: Option<u32>,
    caps: &ObstructCaps,
) -> Result<ObstructionReport, ObstructError> {
    let gates = check_gates(p);
    if !gates.passed {
        return Err(ObstructError::GateRefused(format!(
            "need (m, alpha(m)) = (6,2) or (1,0) mod 8, i.e. k = 2 mod 8 and n = 0 or 7 mod 8; got n = {}, k = {}{}",
            p.n,
            p.k,
            p.residues.map(|(a, b)| format!(", residues ({a}, {b})")).unwrap_or_default()
        )));
    }
    let choice = choose_l(p, requested_l, caps)?;
    evaluate_obstruction(p, choice, caps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl ObstructionReport {
    /// Drop wall-clock data so the output is byte-stable.
    pub fn without_wallclock(mut self) -> Self {
        self.timings.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "params": self.params,
            "gates": self.gates,
            "survivors": self.survivors,
            "verdict": self.verdict,
            "caps": self.caps,
            "timings": self.timings,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["monomial", "i", "j", "last_column"]).expect("in-memory write");
        for s in &self.survivors {
            w.write_record([s.monomial.clone(), s.i.to_string(), s.j.to_string(), s.last_column.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        if let (Some(m), Some(a)) = (p.m, p.alpha_m) {
            let _ = writeln!(out, "m = {m}, alpha(m) = {a}");
        }
        let _ = writeln!(out, "n = {}, k = {}, L = {}, K = {}, N = {}", p.n, p.k, p.l, p.big_k, p.power);
        let _ = writeln!(out, "ring: {} (alpha cap {})", p.space, self.caps.alpha);
        let g = &self.gates;
        let _ = writeln!(
            out,
            "gates: congruences {}, side condition M = {} {}, strategies agree {}, alpha-cap stable {}",
            pass(g.congruences.passed),
            g.side_condition.m,
            pass(g.side_condition.holds),
            g.strategies_agree,
            g.alpha_cap_stable
        );
        if let Some(c) = &g.column {
            let _ = writeln!(
                out,
                "last column: {} is not a d1-boundary ({} sources checked): {}",
                c.target,
                c.sources.len(),
                pass(c.certified)
            );
        }
        let _ = writeln!(out, "survivors ({}):", self.survivors.len());
        for s in &self.survivors {
            let _ = writeln!(out, "  {}", s.monomial);
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters() {
        let p = derive_parameters(6).unwrap();
        assert_eq!((p.alpha_m, p.n, p.k, p.residues), (Some(2), 7, 10, Some((6, 2))));
        let h = derive_parameters(4086).unwrap();
        assert_eq!((h.alpha_m, h.n, h.k), (Some(10), 4095, 8162));
        assert_eq!(h.dimensions(), ((1 << 13) - 2, (1 << 14) - 59));
        assert!(check_gates(&h).passed);
        let one = derive_parameters(1).unwrap();
        assert_eq!((one.n, one.k, one.residues), (1, 1, Some((1, 1))));
        assert!(!check_gates(&one).passed);
    }

    #[test]
    fn l_choice() {
        let p = derive_parameters(6).unwrap();
        let caps = ObstructCaps::default();
        assert_eq!(choose_l(&p, None, &caps).unwrap(), LChoice { l: 6, big_k: 2, power: 25 });
        assert_eq!(choose_l(&p, Some(7), &caps).unwrap(), LChoice { l: 7, big_k: 6, power: 57 });
        let h = derive_parameters(4086).unwrap();
        assert!(matches!(choose_l(&h, None, &caps), Err(ObstructError::CapExceeded(_))));
    }

    #[test]
    fn side_condition_for_desk_case() {
        let s = side_condition(7, 2);
        assert_eq!(s.m, 1);
        assert!(s.holds);
        assert!(!side_condition(7, 1).holds);
    }

    #[test]
    fn overrides() {
        let c = ObstructCaps::default().with_overrides("alpha=40, max_power=100").unwrap();
        assert_eq!((c.alpha, c.max_power), (40, 100));
        assert!(ObstructCaps::default().with_overrides("beta=1").is_err());
    }
}
