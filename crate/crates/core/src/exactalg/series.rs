use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactAlgError, TwoLocal};

/// Coefficient ring for [`GradedSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Coeff for TwoLocal {
    fn zero() -> Self {
        TwoLocal::zero()
    }
    fn one() -> Self {
        TwoLocal::one()
    }
    fn from_i64(n: i64) -> Self {
        TwoLocal::from_int(n)
    }
    fn is_zero(&self) -> bool {
        TwoLocal::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// How large the exponent of a generator may get.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// Polynomial variable, no truncation of its own.
    Free,
    /// Exponents above the bound vanish (nilpotence / truncation).
    MaxExponent(u32),
    /// A unit with `g^order = 1`; exponents are reduced mod `order`.
    UnitOrder(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub bound: Bound,
}

/// Generator names, degrees and truncation data shared by a family of series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
    mod48: bool,
    series_vars: Vec<usize>,
    series_order: Option<u32>,
}

pub const PERIOD: i64 = 48;

impl GeneratorTable {
    pub fn new(mod48: bool) -> Self {
        GeneratorTable {
            gens: Vec::new(),
            mod48,
            series_vars: Vec::new(),
            series_order: None,
        }
    }

    pub fn with(mut self, name: &str, degree: i64, bound: Bound) -> Result<Self, ExactAlgError> {
        if self.gens.iter().any(|g| g.name == name) {
            return Err(ExactAlgError::DuplicateGenerator(name.to_string()));
        }
        self.gens.push(Generator {
            name: name.to_string(),
            degree,
            bound,
        });
        Ok(self)
    }

    /// Declare `vars` as power-series variables truncated at total degree `order`.
    pub fn series(mut self, vars: &[&str], order: u32) -> Result<Self, ExactAlgError> {
        let mut idx = Vec::with_capacity(vars.len());
        for v in vars {
            idx.push(self.index_of(v)?);
        }
        self.series_vars = idx;
        self.series_order = Some(order);
        Ok(self)
    }

    pub fn build(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn is_mod48(&self) -> bool {
        self.mod48
    }

    pub fn series_order(&self) -> Option<u32> {
        self.series_order
    }

    pub fn series_vars(&self) -> &[usize] {
        &self.series_vars
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ExactAlgError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ExactAlgError::UnknownVariable(name.to_string()))
    }

    /// Integer degree of an exponent vector.
    pub fn int_degree(&self, mono: &[u32]) -> i64 {
        mono.iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    /// Degree in the table's grading: reduced mod 48 in mod-48 mode.
    pub fn degree(&self, mono: &[u32]) -> i64 {
        let d = self.int_degree(mono);
        if self.mod48 {
            d.rem_euclid(PERIOD)
        } else {
            d
        }
    }

    /// Bring a signed exponent vector into canonical form; `None` if it vanishes.
    pub fn canonical(&self, exps: &[i64]) -> Result<Option<Vec<u32>>, ExactAlgError> {
        let mut out = Vec::with_capacity(exps.len());
        for (e, g) in exps.iter().zip(&self.gens) {
            let e = match g.bound {
                Bound::UnitOrder(o) => e.rem_euclid(o as i64) as u32,
                _ if *e < 0 => return Err(ExactAlgError::NegativeExponent(g.name.clone())),
                Bound::MaxExponent(m) if *e > m as i64 => return Ok(None),
                _ => *e as u32,
            };
            out.push(e);
        }
        Ok(self.within_order(&out).then_some(out))
    }

    fn within_order(&self, mono: &[u32]) -> bool {
        match self.series_order {
            Some(order) => self.series_vars.iter().map(|&i| mono[i]).sum::<u32>() <= order,
            None => true,
        }
    }

    /// Product of two canonical monomials, `None` if truncated away.
    fn mul_monos(&self, a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
        let mut out = Vec::with_capacity(a.len());
        for ((&x, &y), g) in a.iter().zip(b).zip(&self.gens) {
            let e = x + y;
            let e = match g.bound {
                Bound::UnitOrder(o) => e % o,
                Bound::MaxExponent(m) if e > m => return None,
                _ => e,
            };
            out.push(e);
        }
        self.within_order(&out).then_some(out)
    }

    /// Largest exponent a variable can carry before it is truncated away.
    pub fn exponent_cap(&self, var: usize) -> Option<u32> {
        let own = match self.gens[var].bound {
            Bound::MaxExponent(m) => Some(m),
            Bound::UnitOrder(o) => Some(o - 1),
            Bound::Free => None,
        };
        let series = if self.series_vars.contains(&var) {
            self.series_order
        } else {
            None
        };
        match (own, series) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Sparse truncated multivariate series with exact coefficients.
#[derive(Clone, PartialEq)]
pub struct GradedSeries<C: Coeff> {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> fmt::Debug for GradedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for GradedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (e, g) in mono.iter().zip(self.table.generators()) {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", g.name)?,
                    _ => write!(f, "*{}^{}", g.name, e)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> GradedSeries<C> {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        GradedSeries {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: C) -> Self {
        let mut s = Self::zero(table);
        s.add_term(vec![0; table.len()], c);
        s
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::constant(table, C::one())
    }

    /// `c * prod name^exp`; negative exponents are allowed on unit generators.
    pub fn monomial(table: &Arc<GeneratorTable>, powers: &[(&str, i64)], c: C) -> Result<Self, ExactAlgError> {
        let mut exps = vec![0i64; table.len()];
        for (name, e) in powers {
            exps[table.index_of(name)?] += e;
        }
        let mut s = Self::zero(table);
        if let Some(mono) = table.canonical(&exps)? {
            s.add_term(mono, c);
        }
        Ok(s)
    }

    pub fn var(table: &Arc<GeneratorTable>, name: &str) -> Result<Self, ExactAlgError> {
        Self::monomial(table, &[(name, 1)], C::one())
    }

    pub fn from_terms<I>(table: &Arc<GeneratorTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut s = Self::zero(table);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Vec<u32>, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[u32]) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the monomial given by generator names and exponents.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> Result<C, ExactAlgError> {
        let mut mono = vec![0u32; self.table.len()];
        for (name, e) in powers {
            mono[self.table.index_of(name)?] = *e;
        }
        Ok(self.coeff(&mono))
    }

    /// Add `c * mono` after truncation; `mono` must already be canonical.
    pub fn add_term(&mut self, mono: Vec<u32>, c: C) {
        if c.is_zero() || !self.table.within_order(&mono) {
            return;
        }
        if let Some(m) = self.table.canonical(&mono.iter().map(|&e| e as i64).collect::<Vec<_>>()).ok().flatten() {
            match self.terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().plus(&c);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
    }

    fn add_canonical(&mut self, mono: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<(), ExactAlgError> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(ExactAlgError::TableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_canonical(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GradedSeries {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.table);
        for (m, a) in &self.terms {
            out.add_canonical(m.clone(), a.times(c));
        }
        out
    }

    /// Product truncated to the table's bounds.
    pub fn mul(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = self.table.mul_monos(ma, mb) {
                    out.add_canonical(m, ca.times(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.table);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same table");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same table");
            }
        }
        result
    }

    /// Exponent of `var` in every term, as a sorted list.
    pub fn exponents_of(&self, var: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|m| m[var]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Part of the series with `var` to the power `e`, with that power removed.
    pub fn coefficient_of(&self, var: usize, e: u32) -> Self {
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            if m[var] == e {
                let mut m2 = m.clone();
                m2[var] = 0;
                out.add_canonical(m2, c.clone());
            }
        }
        out
    }

    /// Drop every term whose exponent of `var` exceeds `max`.
    pub fn truncate_var(&self, var: usize, max: u32) -> Self {
        GradedSeries {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[var] <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous degree, or `None` if the terms disagree (zero has no degree).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| self.table.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn map_coeffs<D: Coeff, E>(&self, mut f: impl FnMut(&C) -> Result<D, E>) -> Result<GradedSeries<D>, E> {
        let mut out = GradedSeries::zero(&self.table);
        for (m, c) in &self.terms {
            out.add_canonical(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Re-express over another table by generator name; every generator with a
    /// nonzero exponent must exist in `target`.
    pub fn retable(&self, target: &Arc<GeneratorTable>) -> Result<Self, ExactAlgError> {
        self.substitute(&[], target)
    }

    /// Replace the named variables by series over `target`; all other
    /// variables are carried over by name.
    pub fn substitute(&self, bindings: &[(&str, GradedSeries<C>)], target: &Arc<GeneratorTable>) -> Result<Self, ExactAlgError> {
        let src = &self.table;
        let mut bound: Vec<Option<&GradedSeries<C>>> = vec![None; src.len()];
        for (name, s) in bindings {
            let i = src.index_of(name)?;
            if !(Arc::ptr_eq(s.table(), target) || **s.table() == **target) {
                return Err(ExactAlgError::TableMismatch);
            }
            if src.series_vars.contains(&i) && !s.coeff(&vec![0; target.len()]).is_zero() {
                return Err(ExactAlgError::NonNilpotentSubstitution(name.to_string()));
            }
            bound[i] = Some(s);
        }
        // unbound generators map by name
        let mut carry: Vec<Option<usize>> = vec![None; src.len()];
        for (i, g) in src.generators().iter().enumerate() {
            if bound[i].is_none() {
                carry[i] = target.index_of(&g.name).ok();
            }
        }
        let mut powers: Vec<Vec<GradedSeries<C>>> = vec![Vec::new(); src.len()];
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0i64; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 || bound[i].is_some() {
                    continue;
                }
                match carry[i] {
                    Some(j) => exps[j] += e as i64,
                    None => return Err(ExactAlgError::UnknownVariable(src.generators()[i].name.clone())),
                }
            }
            let Some(base) = target.canonical(&exps)? else { continue };
            let mut term = GradedSeries::zero(target);
            term.add_canonical(base, c.clone());
            for (i, &e) in m.iter().enumerate() {
                let Some(b) = bound[i] else { continue };
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(GradedSeries::one(target));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(b)?;
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            for (mm, cc) in term.terms {
                out.add_canonical(mm, cc);
            }
        }
        Ok(out)
    }

    /// Compositional inverse in the series variable `var`: for
    /// `f = var + (higher order)` returns `g` with `g(f) = var`.
    pub fn reversion(&self, var: &str) -> Result<Self, ExactAlgError> {
        let t = self.table.index_of(var)?;
        let order = self
            .table
            .exponent_cap(t)
            .ok_or_else(|| ExactAlgError::UnboundedVariable(var.to_string()))?;
        let zero_mono = vec![0u32; self.table.len()];
        let mut t_mono = zero_mono.clone();
        t_mono[t] = 1;
        if !self.coefficient_of(t, 0).is_zero() || self.coefficient_of(t, 1) != Self::one(&self.table) {
            return Err(ExactAlgError::BadLeadingTerm);
        }
        // P_k = f^k; g = sum g_k t^k solved triangularly from sum g_k P_k = t
        let mut powers = vec![Self::one(&self.table), self.clone()];
        for k in 2..=order {
            let next = powers[k as usize - 1].mul(self)?;
            powers.push(next);
        }
        let mut g_coeffs: Vec<Self> = vec![Self::zero(&self.table), Self::one(&self.table)];
        for n in 2..=order {
            let mut acc = Self::zero(&self.table);
            for k in 1..n {
                let pk_n = powers[k as usize].coefficient_of(t, n);
                if pk_n.is_zero() || g_coeffs[k as usize].is_zero() {
                    continue;
                }
                acc = acc.add(&g_coeffs[k as usize].mul(&pk_n)?)?;
            }
            g_coeffs.push(acc.neg());
        }
        let mut g = Self::zero(&self.table);
        for (k, gk) in g_coeffs.into_iter().enumerate() {
            for (m, c) in gk.terms {
                let mut m2 = m;
                m2[t] += k as u32;
                g.add_term(m2, c);
            }
        }
        Ok(g)
    }

    /// `self(var := inner)` keeping the table.
    pub fn compose(&self, var: &str, inner: &Self) -> Result<Self, ExactAlgError> {
        self.substitute(&[(var, inner.clone())], &Arc::clone(&self.table))
    }
}

impl GradedSeries<BigRational> {
    /// Convert to 2-local coefficients, failing on an even denominator.
    pub fn to_two_local(&self) -> Result<GradedSeries<TwoLocal>, ExactAlgError> {
        self.map_coeffs(TwoLocal::from_rational)
    }
}

impl GradedSeries<TwoLocal> {
    pub fn to_rational(&self) -> GradedSeries<BigRational> {
        self.map_coeffs::<_, ()>(|c| Ok(c.to_rational())).expect("infallible")
    }

    /// Reduce coefficients mod 2, keeping the odd ones as 1.
    pub fn mod2_support(&self) -> Vec<Vec<u32>> {
        self.terms
            .iter()
            .filter(|(_, c)| c.is_unit())
            .map(|(m, _)| m.clone())
            .collect()
    }
}

/// `series_mul` as a free function for callers that prefer it.
pub fn series_mul<C: Coeff>(a: &GradedSeries<C>, b: &GradedSeries<C>) -> Result<GradedSeries<C>, ExactAlgError> {
    a.mul(b)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    let r = BigRational::new(BigInt::from(n), BigInt::from(d));
    if r.denom().is_negative() {
        -(-r)
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv_table() -> Arc<GeneratorTable> {
        GeneratorTable::new(true)
            .with("u", -16, Bound::Free)
            .unwrap()
            .with("alpha", 16, Bound::Free)
            .unwrap()
            .with("v2", -6, Bound::UnitOrder(8))
            .unwrap()
            .series(&["u"], 12)
            .unwrap()
            .build()
    }

    type S = GradedSeries<TwoLocal>;

    #[test]
    fn one_plus_u_times_one_minus_u() {
        let t = uv_table();
        let one = S::one(&t);
        let u = S::var(&t, "u").unwrap();
        let p = one.add(&u).unwrap().mul(&one.sub(&u).unwrap()).unwrap();
        let expect = one.sub(&u.mul(&u).unwrap()).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn degree_additivity_mod48() {
        let t = uv_table();
        let u = S::var(&t, "u").unwrap();
        let a = S::var(&t, "alpha").unwrap();
        assert_eq!(u.mul(&a).unwrap().homogeneous_degree(), Some(0));
        assert_eq!(u.homogeneous_degree(), Some(32));
    }

    #[test]
    fn unit_of_order_eight() {
        let t = uv_table();
        let a = S::monomial(&t, &[("v2", 5)], TwoLocal::one()).unwrap();
        let b = S::monomial(&t, &[("v2", 4)], TwoLocal::one()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), S::var(&t, "v2").unwrap());
        let inv = S::monomial(&t, &[("v2", -3)], TwoLocal::one()).unwrap();
        assert_eq!(inv, S::monomial(&t, &[("v2", 5)], TwoLocal::one()).unwrap());
    }

    #[test]
    fn table_mismatch_is_reported() {
        let t1 = uv_table();
        let t2 = GeneratorTable::new(false).with("u", 1, Bound::Free).unwrap().build();
        let a = S::var(&t1, "u").unwrap();
        let b = S::var(&t2, "u").unwrap();
        assert_eq!(a.mul(&b), Err(ExactAlgError::TableMismatch));
    }

    #[test]
    fn duplicate_generator_rejected() {
        let r = GeneratorTable::new(false).with("u", 1, Bound::Free).unwrap().with("u", 2, Bound::Free);
        assert_eq!(r.unwrap_err(), ExactAlgError::DuplicateGenerator("u".into()));
    }

    #[test]
    fn substitution_examples() {
        let src = GeneratorTable::new(true)
            .with("x2", 2, Bound::Free)
            .unwrap()
            .with("v1", -2, Bound::Free)
            .unwrap()
            .with("v2", -6, Bound::UnitOrder(8))
            .unwrap()
            .build();
        let dst = GeneratorTable::new(true)
            .with("u", -16, Bound::Free)
            .unwrap()
            .with("alpha", 16, Bound::Free)
            .unwrap()
            .with("v2", -6, Bound::UnitOrder(8))
            .unwrap()
            .build();
        let x2 = S::var(&src, "x2").unwrap();
        let img = S::monomial(&dst, &[("v2", -3), ("u", 1)], TwoLocal::one()).unwrap();
        let r = x2.substitute(&[("x2", img.clone())], &dst).unwrap();
        assert_eq!(r, img);
        assert_eq!(r.homogeneous_degree(), Some(2));

        let v1 = S::var(&src, "v1").unwrap();
        let a = S::monomial(&dst, &[("alpha", 1), ("v2", -5)], TwoLocal::one()).unwrap();
        let r = v1.substitute(&[("v1", a.clone())], &dst).unwrap();
        assert_eq!(r, a);
        assert_eq!(r.homogeneous_degree(), Some((-2i64).rem_euclid(48)));
    }

    #[test]
    fn substitute_scaled_variable() {
        let t = GeneratorTable::new(false)
            .with("t", 1, Bound::Free)
            .unwrap()
            .with("s", 1, Bound::Free)
            .unwrap()
            .series(&["t", "s"], 6)
            .unwrap()
            .build();
        let f = S::var(&t, "t").unwrap().add(&S::var(&t, "t").unwrap().pow(2)).unwrap();
        let two_s = S::monomial(&t, &[("s", 1)], TwoLocal::from_int(2)).unwrap();
        let r = f.substitute(&[("t", two_s)], &t).unwrap();
        let expect = S::monomial(&t, &[("s", 1)], TwoLocal::from_int(2))
            .unwrap()
            .add(&S::monomial(&t, &[("s", 2)], TwoLocal::from_int(4)).unwrap())
            .unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn non_nilpotent_substitution_rejected() {
        let t = GeneratorTable::new(false)
            .with("t", 1, Bound::Free)
            .unwrap()
            .series(&["t"], 6)
            .unwrap()
            .build();
        let f = S::var(&t, "t").unwrap();
        let bad = S::one(&t).add(&f).unwrap();
        assert!(matches!(
            f.substitute(&[("t", bad)], &t),
            Err(ExactAlgError::NonNilpotentSubstitution(_))
        ));
    }

    #[test]
    fn reversion_of_identity_and_bad_leading_term() {
        let t = GeneratorTable::new(false)
            .with("t", 1, Bound::Free)
            .unwrap()
            .series(&["t"], 8)
            .unwrap()
            .build();
        let f = S::var(&t, "t").unwrap();
        assert_eq!(f.reversion("t").unwrap(), f);
        let two_t = f.scale(&TwoLocal::from_int(2));
        assert_eq!(two_t.reversion("t"), Err(ExactAlgError::BadLeadingTerm));
    }
}
