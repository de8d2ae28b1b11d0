//! The 2-typical formal group law of E(2) and its `(α, u)` rescaling.
//!
//! The law is built from the logarithm `log x = Σ l_n x^{2^n}` over
//! `Q[v1, v2]` (with `v_i = 0` for `i ≥ 3`), exponentiated by series
//! reversion, and then checked to be 2-integral. Two choices of 2-typical
//! generators are supported; Araki's makes `[2](x) = 2x +_F v1 x² +_F v2 x⁴`
//! hold on the nose.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactalg::{Bound, ExactAlgError, GeneratorTable, GradedSeries, TwoLocal};

type QSeries = GradedSeries<BigRational>;
type ZSeries = GradedSeries<TwoLocal>;

/// Default total-degree truncation for two-variable laws.
pub const DEFAULT_ORDER: u32 = 26;
/// Number of log coefficients computed by default.
pub const DEFAULT_LOG_DEPTH: usize = 4;
/// Largest log depth accepted by [`build_log`].
pub const MAX_LOG_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("log depth {0} is outside the supported range 0..={MAX_LOG_DEPTH}")]
    UnsupportedDepth(usize),
    #[error("log depth {depth} is exact only through degree {exact}, below the requested order {order}")]
    InsufficientLogDepth { depth: usize, exact: u32, order: u32 },
    #[error("coefficient of {0} is not 2-integral")]
    NonIntegralCoefficient(String),
    #[error("operation needs a law in {0} coordinates")]
    WrongCoordinates(&'static str),
    #[error(transparent)]
    Alg(#[from] ExactAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Hazewinkel,
    Araki,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Hazewinkel => "hazewinkel",
            Convention::Araki => "araki",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hazewinkel" => Ok(Convention::Hazewinkel),
            "araki" => Ok(Convention::Araki),
            other => Err(format!("unsupported convention `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    /// `x` of degree 2 over `Z_(2)[v1, v2]`.
    Classical,
    /// `u = v2³ x` of degree −16 over `Z_(2)[α]`, `α = v1 v2⁵`, graded mod 48.
    Rescaled,
}

/// Coefficients over `Q[v1, v2]`, cohomologically graded (`|v1| = -2`, `|v2| = -6`).
pub fn coefficient_table() -> Arc<GeneratorTable> {
    GeneratorTable::new(false)
        .with("v1", -2, Bound::Free)
        .and_then(|t| t.with("v2", -6, Bound::Free))
        .expect("static table")
        .build()
}

fn one_var_classical(order: u32) -> Arc<GeneratorTable> {
    GeneratorTable::new(false)
        .with("t", 2, Bound::Free)
        .and_then(|t| t.with("v1", -2, Bound::Free))
        .and_then(|t| t.with("v2", -6, Bound::Free))
        .and_then(|t| t.series(&["t"], order))
        .expect("static table")
        .build()
}

fn two_var_classical(order: u32) -> Arc<GeneratorTable> {
    GeneratorTable::new(false)
        .with("x", 2, Bound::Free)
        .and_then(|t| t.with("y", 2, Bound::Free))
        .and_then(|t| t.with("v1", -2, Bound::Free))
        .and_then(|t| t.with("v2", -6, Bound::Free))
        .and_then(|t| t.series(&["x", "y"], order))
        .expect("static table")
        .build()
}

/// Table for series in one variable `t` (degree −16) over `Z_(2)[α]`, mod 48.
pub fn one_var_rescaled(order: u32) -> Arc<GeneratorTable> {
    GeneratorTable::new(true)
        .with("t", -16, Bound::Free)
        .and_then(|t| t.with("alpha", 16, Bound::Free))
        .and_then(|t| t.series(&["t"], order))
        .expect("static table")
        .build()
}

fn two_var_rescaled(order: u32) -> Arc<GeneratorTable> {
    GeneratorTable::new(true)
        .with("x", -16, Bound::Free)
        .and_then(|t| t.with("y", -16, Bound::Free))
        .and_then(|t| t.with("alpha", 16, Bound::Free))
        .and_then(|t| t.series(&["x", "y"], order))
        .expect("static table")
        .build()
}

/// Logarithm coefficients `l_0, …, l_N` of the 2-typical law.
#[derive(Debug, Clone)]
pub struct BPLogData {
    pub convention: Convention,
    pub coefficients: Vec<QSeries>,
}

impl BPLogData {
    pub fn depth(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Largest total degree through which `log` is exact.
    pub fn exact_through(&self) -> u32 {
        (1u32 << (self.depth() + 1)) - 1
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.coefficients[0].table()
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Log coefficients from the 2-typical recursion, `v_i = 0` for `i ≥ 3`.
///
/// Hazewinkel: `2 l_n = Σ_{i<n} l_i v_{n-i}^{2^i}`.
/// Araki: `2 l_n = Σ_{i≤n} l_i v_{n-i}^{2^i}` with `v_0 = 2`.
pub fn build_log(convention: Convention, depth: usize) -> Result<BPLogData, FglError> {
    if depth > MAX_LOG_DEPTH {
        return Err(FglError::UnsupportedDepth(depth));
    }
    let table = coefficient_table();
    let v = |i: usize| -> Result<QSeries, ExactAlgError> {
        match i {
            1 => QSeries::var(&table, "v1"),
            2 => QSeries::var(&table, "v2"),
            _ => Ok(QSeries::zero(&table)),
        }
    };
    let mut ls: Vec<QSeries> = vec![QSeries::one(&table)];
    for n in 1..=depth {
        let mut rhs = QSeries::zero(&table);
        for (i, li) in ls.iter().enumerate() {
            let vi = v(n - i)?;
            if vi.is_zero() {
                continue;
            }
            rhs = rhs.add(&li.mul(&vi.pow(1 << i))?)?;
        }
        let divisor = match convention {
            Convention::Hazewinkel => q(2),
            Convention::Araki => q(2) - BigRational::from_integer(BigInt::from(2).pow(1u32 << n)),
        };
        ls.push(rhs.scale(&(q(1) / divisor)));
    }
    Ok(BPLogData {
        convention,
        coefficients: ls,
    })
}

/// `log(t)` in a one-variable classical table.
fn log_series(log: &BPLogData, table: &Arc<GeneratorTable>, var: &str) -> Result<QSeries, FglError> {
    let mut out = QSeries::zero(table);
    for (n, ln) in log.coefficients.iter().enumerate() {
        let xn = QSeries::monomial(table, &[(var, 1i64 << n)], q(1))?;
        out = out.add(&ln.retable(table)?.mul(&xn)?)?;
    }
    Ok(out)
}

/// Coefficients `e_k` (over the same table) of `exp = log^{-1}` in `t`.
fn exp_coefficients(log: &BPLogData, order: u32) -> Result<Vec<QSeries>, FglError> {
    let t1 = one_var_classical(order);
    let lg = log_series(log, &t1, "t")?;
    let ex = lg.reversion("t")?;
    let ti = t1.index_of("t")?;
    let ct = coefficient_table();
    (0..=order)
        .map(|k| Ok(ex.coefficient_of(ti, k).retable(&ct)?))
        .collect()
}

/// A truncated two-variable formal group law `F(x, y)`.
#[derive(Debug, Clone)]
pub struct FormalGroupLaw {
    pub convention: Convention,
    pub coordinates: Coordinates,
    pub order: u32,
    series: ZSeries,
}

impl FormalGroupLaw {
    /// `F` as a series in `x`, `y` over the coefficient generators.
    pub fn series(&self) -> &ZSeries {
        &self.series
    }

    /// Coefficient generator names for this coordinate system.
    pub fn coefficient_names(&self) -> &'static [&'static str] {
        match self.coordinates {
            Coordinates::Classical => &["v1", "v2"],
            Coordinates::Rescaled => &["alpha"],
        }
    }

    /// Coefficient of `x^i y^j` as a series over the law's table.
    pub fn coefficient(&self, i: u32, j: u32) -> ZSeries {
        let t = self.series.table();
        let xi = t.index_of("x").expect("x");
        let yi = t.index_of("y").expect("y");
        self.series.coefficient_of(xi, i).coefficient_of(yi, j)
    }

    /// `a +_F b` for series over any table that carries this law's
    /// coefficient generators; `a` and `b` must have no constant term.
    pub fn formal_sum(&self, a: &ZSeries, b: &ZSeries) -> Result<ZSeries, FglError> {
        let target = a.table();
        Ok(self
            .series
            .substitute(&[("x", a.clone()), ("y", b.clone())], target)?)
    }

    /// Iterated formal sum of the given series.
    pub fn formal_sum_all(&self, terms: &[ZSeries]) -> Result<ZSeries, FglError> {
        let mut it = terms.iter();
        let mut acc = it.next().cloned().ok_or(FglError::Alg(ExactAlgError::BadLeadingTerm))?;
        for t in it {
            acc = self.formal_sum(&acc, t)?;
        }
        Ok(acc)
    }
}

/// `F(x, y) = exp(log x + log y)` truncated at total degree `order`.
pub fn fgl_from_log(log: &BPLogData, order: u32) -> Result<FormalGroupLaw, FglError> {
    if order > log.exact_through() {
        return Err(FglError::InsufficientLogDepth {
            depth: log.depth(),
            exact: log.exact_through(),
            order,
        });
    }
    let exps = exp_coefficients(log, order)?;
    let t2 = two_var_classical(order);
    let z = log_series(log, &t2, "x")?.add(&log_series(log, &t2, "y")?)?;
    // Horner: exp(z) = z (e1 + z (e2 + ...)). The k-th partial sum is later
    // multiplied by z^k, so only its terms of xy-degree <= order - k matter.
    let (xi, yi) = (t2.index_of("x")?, t2.index_of("y")?);
    let mut acc = exps[order as usize].retable(&t2)?;
    for k in (1..order as usize).rev() {
        let keep = order - k as u32;
        let prod = acc.mul(&z)?;
        let low = prod.terms().iter().filter(|(m, _)| m[xi] + m[yi] <= keep).map(|(m, c)| (m.clone(), c.clone()));
        acc = QSeries::from_terms(&t2, low).add(&exps[k].retable(&t2)?)?;
    }
    let f = acc.mul(&z)?;
    let series = integral(&f)?;
    Ok(FormalGroupLaw {
        convention: log.convention,
        coordinates: Coordinates::Classical,
        order,
        series,
    })
}

fn integral(f: &QSeries) -> Result<ZSeries, FglError> {
    let table = Arc::clone(f.table());
    let mut out = ZSeries::zero(&table);
    for (m, c) in f.terms() {
        let z = TwoLocal::from_rational(c).map_err(|_| FglError::NonIntegralCoefficient(describe(&table, m)))?;
        out.add_term(m.clone(), z);
    }
    Ok(out)
}

fn describe(table: &GeneratorTable, mono: &[u32]) -> String {
    let parts: Vec<String> = mono
        .iter()
        .zip(table.generators())
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Standard law with the default convention and truncation.
pub fn standard_fgl(convention: Convention, order: u32) -> Result<FormalGroupLaw, FglError> {
    let depth = depth_for(order);
    fgl_from_log(&build_log(convention, depth)?, order)
}

/// Smallest log depth exact through `order`.
pub fn depth_for(order: u32) -> usize {
    let mut d = 0;
    while (1u32 << (d + 1)) - 1 < order {
        d += 1;
    }
    d.max(1)
}

/// The 2-series `[2](t)`, classical or rescaled according to `F`.
#[derive(Debug, Clone)]
pub struct TwoSeries {
    pub coordinates: Coordinates,
    pub series: ZSeries,
}

impl TwoSeries {
    /// Coefficient of `t^m` over the coefficient generators.
    pub fn coefficient(&self, m: u32) -> ZSeries {
        let ti = self.series.table().index_of("t").expect("t");
        self.series.coefficient_of(ti, m)
    }

    pub fn order(&self) -> u32 {
        self.series.table().series_order().unwrap_or(0)
    }
}

/// `[2](t) = F(t, t)`.
pub fn two_series(f: &FormalGroupLaw) -> Result<TwoSeries, FglError> {
    let table = match f.coordinates {
        Coordinates::Classical => one_var_classical(f.order),
        Coordinates::Rescaled => one_var_rescaled(f.order),
    };
    let t = ZSeries::var(&table, "t")?;
    Ok(TwoSeries {
        coordinates: f.coordinates,
        series: f.formal_sum(&t, &t)?,
    })
}

/// `[2](t) = exp(2 log t)` computed in one variable, without forming `F`.
/// Cheap enough for the high orders the obstruction rings need.
pub fn two_series_from_log(log: &BPLogData, order: u32, coordinates: Coordinates) -> Result<TwoSeries, FglError> {
    if order > log.exact_through() {
        return Err(FglError::InsufficientLogDepth {
            depth: log.depth(),
            exact: log.exact_through(),
            order,
        });
    }
    let t1 = one_var_classical(order);
    let lg = log_series(log, &t1, "t")?;
    let ex = lg.reversion("t")?;
    let two_lg = lg.scale(&q(2));
    let classical = integral(&ex.compose("t", &two_lg)?)?;
    let series = match coordinates {
        Coordinates::Classical => classical,
        Coordinates::Rescaled => rescale_one_var(&classical, order)?,
    };
    Ok(TwoSeries { coordinates, series })
}

/// Rescaled `[2](u)` at the given order for the given convention.
pub fn rescaled_two_series(convention: Convention, order: u32) -> Result<TwoSeries, FglError> {
    two_series_from_log(&build_log(convention, depth_for(order))?, order, Coordinates::Rescaled)
}

fn rescale_table_with_v2(names: &[&str], order: u32) -> Arc<GeneratorTable> {
    let mut t = GeneratorTable::new(true);
    for n in names {
        t = t.with(n, -16, Bound::Free).expect("distinct");
    }
    t.with("alpha", 16, Bound::Free)
        .and_then(|t| t.with("v2", -6, Bound::UnitOrder(8)))
        .and_then(|t| t.series(names, order))
        .expect("static table")
        .build()
}

/// Apply `x ↦ v2^{-3} x`, `v1 ↦ α v2^{-5}`, multiply by `v2³`, and check
/// that every power of `v2` cancels (using `v2⁸ = 1`).
fn rescale_generic(f: &ZSeries, vars: &[&str], order: u32, target: &Arc<GeneratorTable>) -> Result<ZSeries, FglError> {
    let with_v2 = rescale_table_with_v2(vars, order);
    let mut bindings = Vec::new();
    for v in vars {
        bindings.push((*v, ZSeries::monomial(&with_v2, &[(v, 1), ("v2", -3)], TwoLocal::one())?));
    }
    bindings.push(("v1", ZSeries::monomial(&with_v2, &[("alpha", 1), ("v2", -5)], TwoLocal::one())?));
    let sub = f.substitute(&bindings, &with_v2)?;
    let shifted = sub.mul(&ZSeries::monomial(&with_v2, &[("v2", 3)], TwoLocal::one())?)?;
    let v2i = with_v2.index_of("v2")?;
    if let Some((m, _)) = shifted.terms().iter().find(|(m, _)| m[v2i] != 0) {
        return Err(FglError::NonIntegralCoefficient(format!(
            "leftover v2 power in {}",
            describe(&with_v2, m)
        )));
    }
    Ok(shifted.retable(target)?)
}

fn rescale_one_var(f: &ZSeries, order: u32) -> Result<ZSeries, FglError> {
    rescale_generic(f, &["t"], order, &one_var_rescaled(order))
}

/// Rewrite a classical law in the coordinates `u = v2³ x`, `α = v1 v2⁵`
/// with `v2⁸ = 1`; the result lives over `Z_(2)[α]` graded mod 48.
pub fn rescale_to_er2(f: &FormalGroupLaw) -> Result<FormalGroupLaw, FglError> {
    if f.coordinates != Coordinates::Classical {
        return Err(FglError::WrongCoordinates("classical"));
    }
    let series = rescale_generic(&f.series, &["x", "y"], f.order, &two_var_rescaled(f.order))?;
    Ok(FormalGroupLaw {
        convention: f.convention,
        coordinates: Coordinates::Rescaled,
        order: f.order,
        series,
    })
}

/// First monomial (in exponent order) where two laws differ, with both
/// coefficients rendered.
pub fn first_difference(a: &FormalGroupLaw, b: &FormalGroupLaw) -> Option<(String, String, String)> {
    let table = a.series.table();
    let mut keys: Vec<&Vec<u32>> = a.series.terms().keys().chain(b.series.terms().keys()).collect();
    keys.sort_by_key(|m| {
        let xi = table.index_of("x").unwrap();
        let yi = table.index_of("y").unwrap();
        (m[xi] + m[yi], (*m).clone())
    });
    keys.dedup();
    keys.into_iter().find_map(|m| {
        let ca = a.series.coeff(m);
        let cb = b.series.coeff(m);
        (ca != cb).then(|| (describe(table, m), ca.to_string(), cb.to_string()))
    })
}

/// CSV rows `exponents,numerator,denominator` in lexicographic exponent order.
pub fn coefficients_csv(f: &FormalGroupLaw) -> Result<String, csv::Error> {
    let table = f.series.table();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = table.generators().iter().map(|g| g.name.clone()).collect();
    header.push("numerator".into());
    header.push("denominator".into());
    w.write_record(&header)?;
    for (m, c) in f.series.terms() {
        let mut row: Vec<String> = m.iter().map(|e| e.to_string()).collect();
        row.push(c.numerator().to_string());
        row.push(c.denominator().to_string());
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Whether every coefficient of the series is 2-integral (always true for
/// [`ZSeries`]; exposed for rational inputs).
pub fn is_two_integral(s: &QSeries) -> bool {
    s.terms().values().all(|c| TwoLocal::from_rational(c).is_ok())
}

/// Lowest-order term of `[2](t)` mod 2, as (power of t, coefficient support).
pub fn lowest_term_mod2(ts: &TwoSeries) -> Option<(u32, ZSeries)> {
    let ti = ts.series.table().index_of("t").ok()?;
    for m in 0..=ts.order() {
        let c = ts.series.coefficient_of(ti, m);
        let odd: Vec<_> = c.terms().iter().filter(|(_, v)| v.is_unit()).map(|(k, v)| (k.clone(), v.clone())).collect();
        if !odd.is_empty() {
            let reduced = ZSeries::from_terms(ts.series.table(), odd.into_iter().map(|(k, _)| (k, TwoLocal::one())));
            return Some((m, reduced));
        }
    }
    None
}
