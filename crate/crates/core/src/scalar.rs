//! Scalar traits the library is generic over.
//!
//! Exact routes are written against [`Scalar`], a field with ordering. The
//! canonical instantiation is [`BigRational`]; `f64` and `f32` also satisfy it,
//! which is handy for quick floating estimates of the same formulas.
//! Eigenvalue and quadrature code is written against [`Real`] instead.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, Num, One, Signed, ToPrimitive, Zero};

/// An ordered field usable for the exact moment/cumulant machinery.
pub trait Scalar:
    Num + Clone + PartialOrd + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Nearest double; used at the boundary to the spectral routines.
    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self^k` by repeated squaring.
    fn powu(&self, k: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_f64(&self) -> f64 {
        // Scale down huge numerators/denominators before converting so the
        // quotient does not overflow to inf/inf.
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let bits = self.numer().bits().max(self.denom().bits());
                let shift = bits.saturating_sub(1000);
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    fn from_i64(n: i64) -> Self {
        n as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Floating point type for eigenvalue and quadrature work.
pub trait Real:
    Float + FloatConst + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("usize representable")
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with a possibly negative upper index, `C(n, k)` for
/// `k >= 0`, via the falling factorial. Zero for negative `k`.
pub fn binomial_signed(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        return binomial(n as u64, k as u64);
    }
    // C(n, k) = (-1)^k C(k - n - 1, k)
    let b = binomial((k - n - 1) as u64, k as u64);
    if k % 2 == 0 {
        b
    } else {
        -b
    }
}

/// Exact `n!`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `1/n!` with the convention that it vanishes for negative `n`.
pub fn reciprocal_factorial<T: Scalar>(n: i64) -> T {
    if n < 0 {
        T::zero()
    } else {
        T::one() / T::from_bigint(&factorial(n as u64))
    }
}

/// `(-1)^k` as a scalar.
pub fn sign_power<T: Scalar>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Parse an exact rational from `"n"` or `"p/q"` (surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let r: BigRational = s.parse().ok()?;
    if r.denom().is_zero() {
        None
    } else {
        Some(r)
    }
}

/// Render an exact rational as `p/q` (or `n` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
