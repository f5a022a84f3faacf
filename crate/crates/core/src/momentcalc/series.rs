//! Truncated formal power series.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`.
///
/// The truncation order `N` is part of the value: arithmetic between series
/// of different orders truncates to the smaller one.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> FormalSeries<T> {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c_0");
        FormalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        FormalSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// `z + O(z^{order+1})`
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `[z^k]`, zero beyond the truncation order is *not* implied: asking past
    /// the order panics.
    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::zero());
        FormalSeries { coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        FormalSeries { coeffs: out }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::zero(self.order());
        acc.coeffs[0] = T::one();
        (0..n).fold(acc, |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; requires `c_0 ≠ 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(T::one() / c0.clone());
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-acc / c0.clone());
        }
        Ok(FormalSeries { coeffs: out })
    }

    /// `self(inner(z))`; requires `inner` to have zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(inner.coeffs[0].is_zero(), "inner series must vanish at 0");
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        acc
    }

    /// Compositional inverse `g` with `self(g(z)) = z + O(z^{N+1})`.
    ///
    /// Built one coefficient at a time: once `g` is right through `z^{k-1}`,
    /// raising `g_k` by `δ` changes `[z^k] self(g)` by exactly `c_1 δ`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible("constant term is nonzero".into()));
        }
        let n = self.order();
        if n == 0 || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertible("linear coefficient is zero".into()));
        }
        let c1 = self.coeffs[1].clone();
        let mut g = Self::zero(n);
        g.coeffs[1] = T::one() / c1.clone();
        for k in 2..=n {
            let probe = self.compose(&g.truncate(k));
            let err = probe.coeffs[k].clone();
            g.coeffs[k] = -err / c1.clone();
        }
        Ok(g)
    }
}

/// Both sides of `k [z^k] g^n = n [z^{-n}] f^{-k}` for `g = f^{-1}` and
/// positive `k`, `n ≤ order`.
///
/// The right side is read off `f = z u(z)`: `[z^{-n}] f^{-k} = [z^{k-n}] u^{-k}`.
pub fn lagrange_inversion_sides<T: Scalar>(
    f: &FormalSeries<T>,
    k: usize,
    n: usize,
) -> Result<(T, T)> {
    let order = f.order();
    if k == 0 || n == 0 || k > order {
        return Err(Error::IndexOutOfRange(format!(
            "Lagrange check needs 1 <= k <= {order} and n >= 1 (got k={k}, n={n})"
        )));
    }
    let g = f.revert()?;
    let lhs = T::from_i64(k as i64) * g.pow(n).coeffs[k].clone();
    let rhs = if k < n {
        T::zero()
    } else {
        let u = FormalSeries::new(f.coeffs[1..].to_vec());
        let u_inv_k = u.reciprocal()?.pow(k);
        T::from_i64(n as i64) * u_inv_k.coeffs[k - n].clone()
    };
    Ok((lhs, rhs))
}

impl<T: Scalar> fmt::Display for FormalSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})z^{k}")?;
        }
        write!(f, " + O(z^{})", self.coeffs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn series(c: &[i64]) -> FormalSeries<Rational> {
        FormalSeries::new(c.iter().map(|&x| q(x)).collect())
    }

    /// First three orders of `f(g(z)) = z`, eliminated by hand.
    fn naive_revert_order3(f: &FormalSeries<Rational>) -> [Rational; 3] {
        // f = c1 z + c2 z^2 + c3 z^3, g = g1 z + g2 z^2 + g3 z^3
        // z^1: c1 g1 = 1
        // z^2: c1 g2 + c2 g1^2 = 0
        // z^3: c1 g3 + 2 c2 g1 g2 + c3 g1^3 = 0
        let (c1, c2, c3) = (f.coeff(1).clone(), f.coeff(2).clone(), f.coeff(3).clone());
        let g1 = Rational::from_i64(1) / c1.clone();
        let g2 = -(c2.clone() * g1.clone() * g1.clone()) / c1.clone();
        let g3 = -(q(2) * c2 * g1.clone() * g2.clone() + c3 * g1.powu(3)) / c1;
        [g1, g2, g3]
    }

    #[test]
    fn revert_examples() {
        assert_eq!(series(&[0, 1, 0, 0]).revert().unwrap(), series(&[0, 1, 0, 0]));
        assert_eq!(series(&[0, 1, 1, 0]).revert().unwrap(), series(&[0, 1, -1, 2]));
        let half = FormalSeries::new(vec![q(0), Rational::from_ratio(1, 2)]);
        assert_eq!(series(&[0, 2]).revert().unwrap(), half);
    }

    #[test]
    fn revert_matches_hand_elimination() {
        let f = FormalSeries::new(vec![q(0), q(3), Rational::from_ratio(-1, 2), q(5)]);
        let g = f.revert().unwrap();
        assert_eq!(g.coeffs()[1..], naive_revert_order3(&f));
    }

    #[test]
    fn revert_rejects_non_invertible() {
        assert!(matches!(series(&[1, 1, 0]).revert(), Err(Error::NotInvertible(_))));
        assert!(matches!(series(&[0, 0, 1]).revert(), Err(Error::NotInvertible(_))));
        assert!(series(&[0]).revert().is_err());
    }

    #[test]
    fn reverted_series_composes_to_identity_both_ways() {
        let f = series(&[0, 1, -2, 3, 5, -7, 1]);
        let g = f.revert().unwrap();
        assert_eq!(f.compose(&g), FormalSeries::identity(6));
        assert_eq!(g.compose(&f), FormalSeries::identity(6));
    }

    #[test]
    fn reciprocal_times_self_is_one() {
        let f = series(&[2, -1, 4, 0, 3]);
        let r = f.reciprocal().unwrap();
        let mut one = FormalSeries::zero(4);
        one.coeffs[0] = q(1);
        assert_eq!(f.mul(&r), one);
        assert!(series(&[0, 1]).reciprocal().is_err());
    }

    #[test]
    fn lagrange_identity_holds() {
        let f = series(&[0, 2, 1, -3, 4, 1, 0, 2]);
        for k in 1..=7 {
            for n in 1..=8 {
                let (l, r) = lagrange_inversion_sides(&f, k, n).unwrap();
                assert_eq!(l, r, "k={k} n={n}");
            }
        }
    }
}
