use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactAlgError;

/// An element of the integers localized at 2: `numerator / denominator` with
/// the denominator odd and positive, stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoLocal {
    num: BigInt,
    den: BigInt,
}

impl TwoLocal {
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Result<Self, ExactAlgError> {
        let mut num = num.into();
        let mut den = den.into();
        if den.is_zero() {
            return Err(ExactAlgError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.is_even() {
            return Err(ExactAlgError::EvenDenominator);
        }
        Ok(TwoLocal { num, den })
    }

    pub fn from_int<N: Into<BigInt>>(n: N) -> Self {
        TwoLocal {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// A unit of Z_(2), i.e. an element with odd numerator.
    pub fn is_unit(&self) -> bool {
        self.num.is_odd()
    }

    pub fn is_even(&self) -> bool {
        self.num.is_even()
    }

    /// 2-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            self.num.trailing_zeros()
        }
    }

    /// Residue mod 2 as 0 or 1.
    pub fn parity(&self) -> u8 {
        if self.num.is_odd() {
            1
        } else {
            0
        }
    }

    /// Exact division by 2; fails on units.
    pub fn half(&self) -> Result<Self, ExactAlgError> {
        if self.is_unit() {
            return Err(ExactAlgError::DivisionByNonUnit);
        }
        Ok(TwoLocal {
            num: &self.num >> 1usize,
            den: self.den.clone(),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactAlgError> {
        if !rhs.is_unit() {
            return Err(ExactAlgError::DivisionByNonUnit);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn from_rational(q: &BigRational) -> Result<Self, ExactAlgError> {
        Self::new(q.numer().clone(), q.denom().clone())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.den.is_one() {
            self.num.to_i64()
        } else {
            None
        }
    }
}

impl fmt::Debug for TwoLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TwoLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl PartialOrd for TwoLocal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TwoLocal {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

fn reduce(num: BigInt, den: BigInt) -> TwoLocal {
    // denominators stay odd under ring operations
    TwoLocal::new(num, den).expect("odd denominators are closed under ring operations")
}

impl<'a> Add<&'a TwoLocal> for &'a TwoLocal {
    type Output = TwoLocal;
    fn add(self, rhs: &TwoLocal) -> TwoLocal {
        if self.den == rhs.den {
            return reduce(&self.num + &rhs.num, self.den.clone());
        }
        reduce(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a TwoLocal> for &'a TwoLocal {
    type Output = TwoLocal;
    fn sub(self, rhs: &TwoLocal) -> TwoLocal {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a TwoLocal> for &'a TwoLocal {
    type Output = TwoLocal;
    fn mul(self, rhs: &TwoLocal) -> TwoLocal {
        if self.den.is_one() && rhs.den.is_one() {
            return TwoLocal {
                num: &self.num * &rhs.num,
                den: BigInt::one(),
            };
        }
        reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &TwoLocal {
    type Output = TwoLocal;
    fn neg(self) -> TwoLocal {
        TwoLocal {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for TwoLocal {
    type Output = TwoLocal;
    fn add(self, rhs: TwoLocal) -> TwoLocal {
        &self + &rhs
    }
}

impl Sub for TwoLocal {
    type Output = TwoLocal;
    fn sub(self, rhs: TwoLocal) -> TwoLocal {
        &self - &rhs
    }
}

impl Mul for TwoLocal {
    type Output = TwoLocal;
    fn mul(self, rhs: TwoLocal) -> TwoLocal {
        &self * &rhs
    }
}

impl Neg for TwoLocal {
    type Output = TwoLocal;
    fn neg(self) -> TwoLocal {
        -&self
    }
}

/// Convenience constructor mirroring the textbook `normalize(n, d)`.
pub fn normalize<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Result<TwoLocal, ExactAlgError> {
    TwoLocal::new(num, den)
}
