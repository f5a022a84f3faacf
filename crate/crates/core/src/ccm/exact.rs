use super::{BivariatePolynomial, CcmMoments};
use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::momentcalc::{free_convolve_moments, measure_cumulants, CompositionTable, MomentVector};
use crate::poly::Polynomial;
use crate::scalar::{factorial, reciprocal_factorial, sign_power, Scalar};
use crate::specialfn::{dd_power, NodeList};

fn fact<T: Scalar>(n: usize) -> T {
    T::from_bigint(&factorial(n as u64))
}

/// `I_l^μ(t^n)` from the composition table `M_{·,·}` of `μ`'s moments.
fn i_from_table<T: Scalar>(m_table: &CompositionTable<T>, l: usize, n: usize) -> T {
    if l > n {
        return T::zero();
    }
    let mut acc = T::zero();
    for k in 1..=(l + 2).min(n + 2) {
        let term = sign_power::<T>(k as i64 - 1)
            * fact::<T>(n + 2 - k)
            * fact::<T>(l + k)
            * reciprocal_factorial::<T>(k as i64)
            * reciprocal_factorial::<T>(l as i64 + 2 - k as i64)
            * m_table.get(n + 2, k);
        acc = acc + term;
    }
    acc * fact::<T>(n) * reciprocal_factorial::<T>((n + l + 3) as i64) * reciprocal_factorial::<T>((n - l) as i64)
}

fn moment_table<T: Scalar>(mu: &AtomicMeasure<T>, order: usize) -> CompositionTable<T> {
    CompositionTable::from_moments(&MomentVector::from_measure(mu, order))
}

/// `I_l^μ(t ↦ t^n)`, exact. Vanishes for `l > n`.
pub fn i_functional<T: Scalar>(mu: &AtomicMeasure<T>, l: usize, n: usize) -> T {
    i_from_table(&moment_table(mu, n + 2), l, n)
}

/// `I_l^μ(t^n)` for all `l, n ≤ order`, indexed `[l][n]`.
pub fn i_functional_table<T: Scalar>(mu: &AtomicMeasure<T>, order: usize) -> Vec<Vec<T>> {
    let table = moment_table(mu, order + 2);
    (0..=order)
        .map(|l| (0..=order).map(|n| i_from_table(&table, l, n)).collect())
        .collect()
}

pub(super) fn series_entry<T: Scalar>(i_mu: &[Vec<T>], i_nu: &[Vec<T>], n_mu: usize, n_nu: usize) -> T {
    // I_l annihilates t^n for l > n, so the series stops at min(n_mu, n_nu)
    (0..=n_mu.min(n_nu)).fold(T::zero(), |acc, l| {
        acc + sign_power::<T>(l as i64)
            * T::from_i64(2 * l as i64 + 3)
            * i_mu[l][n_mu].clone()
            * i_nu[l][n_nu].clone()
    })
}

/// `m̃_{μ,ν}(t_μ^{n_μ} t_ν^{n_ν}) = Σ_l (-1)^l (2l+3) I_l^μ(t^{n_μ}) I_l^ν(t^{n_ν})`.
pub fn ccm_moment_series<T: Scalar>(mu: &AtomicMeasure<T>, nu: &AtomicMeasure<T>, n_mu: usize, n_nu: usize) -> T {
    if mu.is_degenerate() || nu.is_degenerate() {
        return T::zero();
    }
    let top = n_mu.max(n_nu);
    let i_mu: Vec<Vec<T>> = i_functional_table(mu, top);
    let i_nu: Vec<Vec<T>> = i_functional_table(nu, top);
    series_entry(&i_mu, &i_nu, n_mu, n_nu)
}

pub(super) fn cumulant_composition_table<T: Scalar>(mu: &AtomicMeasure<T>, order: usize) -> CompositionTable<T> {
    CompositionTable::from_cumulants(&measure_cumulants(mu, order))
}

pub(super) fn cumulant_difference_entry<T: Scalar>(
    k_mu: &CompositionTable<T>,
    k_nu: &CompositionTable<T>,
    n_mu: usize,
    n_nu: usize,
) -> T {
    let (big_mu, big_nu) = (n_mu + 2, n_nu + 2);
    let prefactor = fact::<T>(n_mu) * fact::<T>(n_nu);
    let mut acc = T::zero();
    for a in 1..=big_mu {
        let ka = k_mu.get(big_mu, a);
        if ka.is_zero() {
            continue;
        }
        for b in 1..=big_nu {
            let kb = k_nu.get(big_nu, b);
            if kb.is_zero() {
                continue;
            }
            let (ra, rb) = ((big_mu - a) as i64, (big_nu - b) as i64);
            let bracket = reciprocal_factorial::<T>(ra + 1) * reciprocal_factorial::<T>(rb + 1)
                - reciprocal_factorial::<T>(ra + rb + 1);
            acc = acc
                + bracket
                    * reciprocal_factorial::<T>(a as i64)
                    * reciprocal_factorial::<T>(b as i64)
                    * ka.clone()
                    * kb;
        }
    }
    acc * prefactor
}

/// `m̃_{μ,ν}(t_μ^{n_μ} t_ν^{n_ν})` from the free cumulant tables
/// `K_{n_•+2, k}` of both measures.
pub fn ccm_moment_via_cumulant_difference<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    n_mu: usize,
    n_nu: usize,
) -> T {
    cumulant_difference_entry(
        &cumulant_composition_table(mu, n_mu + 2),
        &cumulant_composition_table(nu, n_nu + 2),
        n_mu,
        n_nu,
    )
}

/// `((aμ * bν)(p) - (aμ ⊞ bν)(p)) / (a² b²)`.
pub fn convolution_gap<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    a: &T,
    b: &T,
    p: &Polynomial<T>,
) -> Result<T> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroScale);
    }
    let (amu, bnu) = (mu.scale(a), nu.scale(b));
    let classical = amu.classical_convolve(&bnu).expectation_poly(p);
    let order = p.degree().unwrap_or(0);
    let free = free_convolve_moments(&amu, &bnu, order);
    let free_value = p
        .coeffs()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (n, c)| acc + c.clone() * free.get(n));
    let scale = a.clone() * a.clone() * b.clone() * b.clone();
    Ok((classical - free_value) / scale)
}

/// `m̃_{μ,ν}((x, y) ↦ p⁗(a x + b y))`, expanded into monomials and paired
/// with the exact moment table.
pub fn apply_ccm_to_shifted_poly<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    a: &T,
    b: &T,
    p: &Polynomial<T>,
) -> Result<T> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroScale);
    }
    let fourth = p.nth_derivative(4);
    let Some(degree) = fourth.degree() else {
        return Ok(T::zero());
    };
    let integrand = BivariatePolynomial::from_affine(&fourth, a, b);
    CcmMoments::series(mu, nu, degree).apply(&integrand)
}

/// `E f″(X) - E [X, X']_{f'}` for independent `X, X' ~ μ`, the functional
/// paired with `f⁗` at leading order in the small-`ν` expansion.
pub fn leading_order_functional<T: Scalar>(mu: &AtomicMeasure<T>, p: &Polynomial<T>) -> T {
    let second = p.nth_derivative(2);
    let first = p.derivative();
    let curvature = mu.expectation_poly(&second);
    let mut bracket = T::zero();
    for x in mu.atoms() {
        for y in mu.atoms() {
            let nodes = NodeList::new(vec![x.x.clone(), y.x.clone()]).expect("two nodes");
            let dd = first
                .coeffs()
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (m, c)| acc + c.clone() * dd_power(&nodes, m));
            bracket = bracket + x.p.clone() * y.p.clone() * dd;
        }
    }
    curvature - bracket
}
