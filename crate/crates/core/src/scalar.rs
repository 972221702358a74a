//! Scalar abstraction shared by the polytope and smoothing code.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// True when arithmetic is exact and comparisons need no slack.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_f64_lossy(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Slack used for feasibility and equality tests.
    fn tolerance() -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_ratio(v as i64, 1)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn approx_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    /// `self >= other` up to tolerance.
    fn approx_ge(&self, other: &Self) -> bool {
        self.clone() - other.clone() >= -Self::tolerance()
    }

    fn pow_i(&self, e: i32) -> Self {
        let mut out = Self::one();
        let base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            out = out * base.clone();
        }
        out
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_f64(v).expect("finite value")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tolerance() -> Self {
        Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64_lossy(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_f64_lossy(v: f64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn tolerance() -> Self {
        1e-5
    }
}

/// Convert between scalar types through f64 unless both are exact.
pub fn convert<S: Scalar, T: Scalar>(s: &S) -> T {
    T::from_f64_lossy(s.to_f64())
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
