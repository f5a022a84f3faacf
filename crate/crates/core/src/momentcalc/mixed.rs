use super::{measure_cumulants, moments_from_cumulants};
use crate::linalg;
use crate::measures::AtomicMeasure;
use crate::scalar::{binomial, Scalar};

/// `E[m_{k,n-k}(a, b)]` for `k = 0..=n`, with `a ~ μ`, `b ~ ν` freely
/// independent, where `m_{i,j}` is the average over all orderings of the word
/// `a^i b^j`.
///
/// Uses `(t a + b)^n = Σ_k C(n,k) t^k m_{k,n-k}(a,b)`: the left side's
/// expectation is `m_n(tμ ⊞ ν)`, computed at `t = 1..=n+1` and inverted
/// through the Vandermonde system.
pub fn mixed_free_symmetric_moments<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    n: usize,
) -> Vec<T> {
    if n == 0 {
        return vec![T::one()];
    }
    let kappa_mu = measure_cumulants(mu, n);
    let kappa_nu = measure_cumulants(nu, n);
    let nodes: Vec<T> = (1..=n + 1).map(|t| T::from_i64(t as i64)).collect();
    let rhs: Vec<T> = nodes
        .iter()
        .map(|t| moments_from_cumulants(&kappa_mu.scale(t).add(&kappa_nu)).get(n))
        .collect();
    let vandermonde: Vec<Vec<T>> = nodes
        .iter()
        .map(|t| (0..=n).map(|k| t.powu(k)).collect())
        .collect();
    let coeffs = linalg::solve(vandermonde, rhs).expect("distinct nodes");
    coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / T::from_bigint(&binomial(n as u64, k as u64)))
        .collect()
}

/// The classically independent counterpart: `m_k(μ) m_{n-k}(ν)`.
pub fn mixed_classical_symmetric_moments<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    n: usize,
) -> Vec<T> {
    let a = mu.moments(n);
    let b = nu.moments(n);
    (0..=n).map(|k| a[k].clone() * b[n - k].clone()).collect()
}
