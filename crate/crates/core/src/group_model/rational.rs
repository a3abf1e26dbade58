//! Exact rational thresholds.
//!
//! Every invariance, density and disjointness predicate in this crate compares
//! integer counts against a rational threshold. Floating point is never used in
//! a predicate; [`Rational`] wraps an arbitrary-precision reduced fraction and
//! offers division-free comparisons against count ratios.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced fraction `p/q` with `q > 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational {input:?}: {reason}")]
pub struct ParseRationalError {
    input: String,
    reason: &'static str,
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `count / total` for non-negative counts; `total` must be positive.
    pub fn ratio(count: usize, total: usize) -> Self {
        assert!(total > 0, "ratio with zero total");
        Rational(BigRational::new(
            BigInt::from(count as u64),
            BigInt::from(total as u64),
        ))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `self * n` for an integer `n`.
    pub fn scale(&self, n: usize) -> Self {
        Rational(&self.0 * BigInt::from(n as u64))
    }

    /// Number of non-negative integers strictly below `self * total`, i.e.
    /// the least `c` with `c >= self * total`, clamped at zero.
    ///
    /// `count < self * total` holds exactly when `count < self.strict_cutoff(total)`,
    /// which lets hot loops compare plain integers.
    pub fn strict_cutoff(&self, total: usize) -> usize {
        let scaled = &self.0 * BigInt::from(total as u64);
        if !scaled.is_positive() {
            return 0;
        }
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let c = if r.is_zero() { q } else { q + 1 };
        c.to_usize().unwrap_or(usize::MAX)
    }

    /// `count < self * total`, exactly.
    pub fn exceeds_count(&self, count: usize, total: usize) -> bool {
        BigInt::from(count as u64) * self.0.denom() < self.0.numer() * BigInt::from(total as u64)
    }

    /// `count > self * total`, exactly.
    pub fn below_count(&self, count: usize, total: usize) -> bool {
        BigInt::from(count as u64) * self.0.denom() > self.0.numer() * BigInt::from(total as u64)
    }

    /// `(p, q)` when the value is non-negative and both parts fit in `u64`.
    pub fn to_u64_parts(&self) -> Option<(u64, u64)> {
        Some((self.0.numer().to_u64()?, self.0.denom().to_u64()?))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRationalError {
            input: s.to_string(),
            reason,
        };
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| err("bad numerator"))?;
        let q: BigInt = q.parse().map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}
