//! Dense univariate polynomials over a [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::scalar::{binomial, Scalar};

/// `c_0 + c_1 t + ... + c_d t^d`, stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `t^n`
    pub fn monomial(n: usize) -> Self {
        Self::scaled_monomial(T::one(), n)
    }

    pub fn scaled_monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect();
        Self::new(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![T::zero()];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() / T::from_i64(k as i64 + 1)),
        );
        Self::new(coeffs)
    }

    /// Exact `∫_lo^hi p(t) dt`.
    pub fn integrate(&self, lo: &T, hi: &T) -> T {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    /// `p(alpha t + beta)` expanded in powers of `t`.
    pub fn compose_affine(&self, alpha: &T, beta: &T) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![T::zero(); d];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate().take(n + 1) {
                let b = T::from_bigint(&binomial(n as u64, i as u64));
                *slot = slot.clone()
                    + c.clone() * b * alpha.powu(i) * beta.powu(n - i);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Polynomial::<BigRational>::zero().degree(), None);
    }

    #[test]
    fn derivative_and_integral() {
        // t^4 -> 24 after four derivatives
        let p = Polynomial::<BigRational>::monomial(4);
        assert_eq!(p.nth_derivative(4), Polynomial::constant(q(24, 1)));
        assert!(p.nth_derivative(5).is_zero());
        assert_eq!(p.integrate(&q(-1, 1), &q(1, 1)), q(2, 5));
    }

    #[test]
    fn affine_composition_matches_pointwise() {
        let p = Polynomial::new(vec![q(1, 1), q(-2, 1), q(0, 1), q(3, 7)]);
        let c = p.compose_affine(&q(2, 1), &q(-1, 3));
        for x in [q(0, 1), q(1, 2), q(-5, 3)] {
            assert_eq!(c.eval(&x), p.eval(&(q(2, 1) * x.clone() - q(1, 3))));
        }
    }

    #[test]
    fn product_evaluates_pointwise() {
        let a = Polynomial::new(vec![q(1, 1), q(1, 1)]);
        let b = Polynomial::new(vec![q(-1, 1), q(1, 1)]);
        assert_eq!(&a * &b, Polynomial::new(vec![q(-1, 1), q(0, 1), q(1, 1)]));
    }
}
