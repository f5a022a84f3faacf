//! Moments, free cumulants and free additive convolution of truncated
//! moment sequences.
//!
//! Two independent routes produce free cumulants: reversion of the moment
//! series `ψ(z) = z(1 + Σ m_k z^k)`, and the closed-form linear map between
//! the composition sums `M_{n,k}` and `K_{n,k}`. The non-crossing partition
//! enumerator in [`nc`] is a third, brute-force route used as an oracle.

mod mixed;
pub mod nc;
mod series;

pub use mixed::{mixed_classical_symmetric_moments, mixed_free_symmetric_moments};
pub use nc::{nc_moments_oracle, NC_ORACLE_MAX_ORDER};
pub use series::{lagrange_inversion_sides, FormalSeries};

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::scalar::{binomial, Scalar};

/// Default truncation order for moment sequences.
pub const DEFAULT_ORDER: usize = 16;

/// Truncated moment sequence `m_1..m_N` (`m_0 = 1` is implicit).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T> {
    values: Vec<T>,
}

/// Truncated free cumulant sequence `κ_1..κ_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantVector<T> {
    values: Vec<T>,
}

macro_rules! truncated_sequence {
    ($ty:ident, $zeroth:expr) => {
        impl<T: Scalar> $ty<T> {
            /// From `[s_1, ..., s_N]`.
            pub fn new(values: Vec<T>) -> Self {
                $ty { values }
            }

            pub fn order(&self) -> usize {
                self.values.len()
            }

            /// Entries `s_1..s_N`.
            pub fn as_slice(&self) -> &[T] {
                &self.values
            }

            pub fn into_vec(self) -> Vec<T> {
                self.values
            }

            /// `s_k`, with the zeroth entry conventional; panics past the order.
            pub fn get(&self, k: usize) -> T {
                if k == 0 {
                    $zeroth
                } else {
                    self.values[k - 1].clone()
                }
            }

            pub fn truncate(&self, order: usize) -> Self {
                assert!(order <= self.order(), "cannot extend a truncated sequence");
                $ty::new(self.values[..order].to_vec())
            }

            pub fn add(&self, rhs: &Self) -> Self {
                let n = self.order().min(rhs.order());
                $ty::new(
                    (0..n)
                        .map(|i| self.values[i].clone() + rhs.values[i].clone())
                        .collect(),
                )
            }
        }
    };
}

truncated_sequence!(MomentVector, T::one());
truncated_sequence!(CumulantVector, T::zero());

impl<T: Scalar> MomentVector<T> {
    pub fn from_measure(mu: &AtomicMeasure<T>, order: usize) -> Self {
        let mut m = mu.moments(order);
        m.remove(0);
        MomentVector::new(m)
    }
}

impl<T: Scalar> CumulantVector<T> {
    /// `κ_k(aμ) = a^k κ_k(μ)`.
    pub fn scale(&self, a: &T) -> Self {
        CumulantVector::new(
            self.values
                .iter()
                .enumerate()
                .map(|(i, k)| k.clone() * a.powu(i + 1))
                .collect(),
        )
    }
}

/// Table of `P_{n,k} = Σ_{i_1+..+i_k = n, i_j ≥ 1} s_{i_1} ··· s_{i_k}` for
/// `0 ≤ k ≤ n ≤ N`, i.e. `[z^n] (Σ_{i≥1} s_i z^i)^k`.
///
/// Over moments this is `M_{n,k}`, over free cumulants `K_{n,k}`.
#[derive(Clone, Debug)]
pub struct CompositionTable<T> {
    max_n: usize,
    // rows[k][n]
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> CompositionTable<T> {
    /// Builds the table from `s_1..s_N`.
    pub fn new(seq: &[T]) -> Self {
        let max_n = seq.len();
        let mut rows = vec![vec![T::zero(); max_n + 1]; max_n + 1];
        rows[0][0] = T::one();
        for k in 1..=max_n {
            for n in k..=max_n {
                let mut acc = T::zero();
                for i in 1..=n - (k - 1) {
                    let prev = &rows[k - 1][n - i];
                    if !prev.is_zero() {
                        acc = acc + seq[i - 1].clone() * prev.clone();
                    }
                }
                rows[k][n] = acc;
            }
        }
        CompositionTable { max_n, rows }
    }

    pub fn from_moments(m: &MomentVector<T>) -> Self {
        Self::new(m.as_slice())
    }

    pub fn from_cumulants(kappa: &CumulantVector<T>) -> Self {
        Self::new(kappa.as_slice())
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `P_{n,k}`; zero when `k > n` or `k = 0 < n`. Panics past the order.
    pub fn get(&self, n: usize, k: usize) -> T {
        assert!(n <= self.max_n, "n = {n} beyond table order {}", self.max_n);
        if k > n {
            T::zero()
        } else {
            self.rows[k][n].clone()
        }
    }

    fn checked(&self, n: usize, k: usize) -> Result<T> {
        if k == 0 || k > n || n > self.max_n {
            return Err(Error::IndexOutOfRange(format!(
                "need 1 <= k <= n <= {} (got n={n}, k={k})",
                self.max_n
            )));
        }
        Ok(self.get(n, k))
    }
}

/// `M_{n,k}`: sum over compositions of `n` into `k` positive parts of
/// products of moments.
pub fn partial_sum_m<T: Scalar>(m: &MomentVector<T>, n: usize, k: usize) -> Result<T> {
    CompositionTable::from_moments(m).checked(n, k)
}

/// `K_{n,k}`, the same composition sum over free cumulants.
pub fn partial_sum_k<T: Scalar>(kappa: &CumulantVector<T>, n: usize, k: usize) -> Result<T> {
    CompositionTable::from_cumulants(kappa).checked(n, k)
}

fn check_nk(n: usize, k: usize, max_n: usize) -> Result<()> {
    if k == 0 || k > n || n > max_n {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= k <= n <= {max_n} (got n={n}, k={k})"
        )));
    }
    Ok(())
}

/// `M_{n,k} = Σ_{r=k}^{n} (k/r) C(n, r-k) K_{n,r}` from a `K` table.
pub fn mk_from_table<T: Scalar>(k_table: &CompositionTable<T>, n: usize, k: usize) -> Result<T> {
    check_nk(n, k, k_table.max_n())?;
    let mut acc = T::zero();
    for r in k..=n {
        let coeff = T::from_ratio(k as i64, r as i64)
            * T::from_bigint(&binomial(n as u64, (r - k) as u64));
        acc = acc + coeff * k_table.get(n, r);
    }
    Ok(acc)
}

/// `K_{n,k} = Σ_{r=k}^{n} (-1)^{k-r} (k/r) C(n+r-k-1, r-k) M_{n,r}` from an
/// `M` table.
pub fn km_from_table<T: Scalar>(m_table: &CompositionTable<T>, n: usize, k: usize) -> Result<T> {
    check_nk(n, k, m_table.max_n())?;
    let mut acc = T::zero();
    for r in k..=n {
        let mut coeff = T::from_ratio(k as i64, r as i64)
            * T::from_bigint(&binomial((n + r - k - 1) as u64, (r - k) as u64));
        if (r - k) % 2 == 1 {
            coeff = -coeff;
        }
        acc = acc + coeff * m_table.get(n, r);
    }
    Ok(acc)
}

/// `M_{n,k}` computed from free cumulants.
pub fn mk_transform<T: Scalar>(kappa: &CumulantVector<T>, n: usize, k: usize) -> Result<T> {
    mk_from_table(&CompositionTable::from_cumulants(kappa), n, k)
}

/// `K_{n,k}` computed from moments.
pub fn km_transform<T: Scalar>(m: &MomentVector<T>, n: usize, k: usize) -> Result<T> {
    km_from_table(&CompositionTable::from_moments(m), n, k)
}

/// `ψ(z) = z (1 + Σ_{k=1}^{N} m_k z^k)`, a series of order `N + 1`.
pub fn psi_series<T: Scalar>(m: &MomentVector<T>) -> FormalSeries<T> {
    let mut coeffs = Vec::with_capacity(m.order() + 2);
    coeffs.push(T::zero());
    coeffs.push(T::one());
    coeffs.extend(m.as_slice().iter().cloned());
    FormalSeries::new(coeffs)
}

/// Free cumulants by series reversion: `ψ^{-1}(z) = z / (1 + Σ κ_k z^k)`.
pub fn cumulants_from_moments<T: Scalar>(m: &MomentVector<T>) -> CumulantVector<T> {
    let n = m.order();
    if n == 0 {
        return CumulantVector::new(Vec::new());
    }
    let inverse = psi_series(m).revert().expect("ψ has unit linear term");
    // ψ^{-1}(z)/z, order N
    let quotient = FormalSeries::new(inverse.coeffs()[1..].to_vec());
    let r = quotient.reciprocal().expect("ψ^{-1}(z)/z starts with 1");
    CumulantVector::new(r.coeffs()[1..].to_vec())
}

/// Free cumulants from the closed form `κ_n = K_{n,1}`.
pub fn cumulants_via_km<T: Scalar>(m: &MomentVector<T>) -> CumulantVector<T> {
    let table = CompositionTable::from_moments(m);
    CumulantVector::new(
        (1..=m.order())
            .map(|n| km_from_table(&table, n, 1).expect("in range"))
            .collect(),
    )
}

/// Moments from free cumulants, `m_n = M_{n,1}`.
pub fn moments_from_cumulants<T: Scalar>(kappa: &CumulantVector<T>) -> MomentVector<T> {
    let table = CompositionTable::from_cumulants(kappa);
    MomentVector::new(
        (1..=kappa.order())
            .map(|n| mk_from_table(&table, n, 1).expect("in range"))
            .collect(),
    )
}

pub fn measure_cumulants<T: Scalar>(mu: &AtomicMeasure<T>, order: usize) -> CumulantVector<T> {
    cumulants_from_moments(&MomentVector::from_measure(mu, order))
}

/// Moments of `μ ⊞ ν` to order `N` by adding free cumulants.
pub fn free_convolve_moments<T: Scalar>(
    mu: &AtomicMeasure<T>,
    nu: &AtomicMeasure<T>,
    order: usize,
) -> MomentVector<T> {
    free_convolve_many(&[mu.clone(), nu.clone()], order)
}

/// Moments of `μ_1 ⊞ ... ⊞ μ_r`.
pub fn free_convolve_many<T: Scalar>(measures: &[AtomicMeasure<T>], order: usize) -> MomentVector<T> {
    let total = measures
        .iter()
        .map(|mu| measure_cumulants(mu, order))
        .reduce(|a, b| a.add(&b))
        .unwrap_or_else(|| CumulantVector::new(vec![T::zero(); order]));
    moments_from_cumulants(&total)
}

/// Free convolution at the level of moment sequences.
pub fn free_convolve_moment_vectors<T: Scalar>(
    a: &MomentVector<T>,
    b: &MomentVector<T>,
) -> MomentVector<T> {
    moments_from_cumulants(&cumulants_from_moments(a).add(&cumulants_from_moments(b)))
}
