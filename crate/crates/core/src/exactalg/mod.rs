//! Exact 2-local arithmetic and sparse graded series.
//!
//! Everything downstream is built on two types: [`TwoLocal`], the integers
//! localized at 2, and [`GradedSeries`], a sparse truncated multivariate
//! series over any [`Coeff`] ring (exact rationals while a logarithm is in
//! play, [`TwoLocal`] once the answer is known to be 2-integral).

mod series;
mod twolocal;

pub use series::{rational, series_mul, Bound, Coeff, Generator, GeneratorTable, GradedSeries, PERIOD};
pub use twolocal::{normalize, TwoLocal};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("value has an even denominator and is not 2-local")]
    EvenDenominator,
    #[error("division by a non-unit of Z_(2)")]
    DivisionByNonUnit,
    #[error("series belong to different generator tables")]
    TableMismatch,
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent on non-unit generator `{0}`")]
    NegativeExponent(String),
    #[error("substitution for `{0}` has a constant term; truncation cannot bound the result")]
    NonNilpotentSubstitution(String),
    #[error("variable `{0}` has no truncation bound")]
    UnboundedVariable(String),
    #[error("series does not start with the bare variable")]
    BadLeadingTerm,
}
