//! Seeded generators for test corpora: random atomic measures, rationals and
//! Hermitian matrices.

use num_complex::Complex;
use rand::Rng;

use crate::measures::AtomicMeasure;
use crate::scalar::{Real, Scalar};
use crate::spectral::{ComplexMatrix, HermitianMatrix};

/// Measure with between `min_atoms` and `max_atoms` distinct atoms on the
/// grid `{i/4 : -8 ≤ i ≤ 8}` and integer weights `1..=9`, normalized.
pub fn random_measure<T: Scalar, R: Rng + ?Sized>(rng: &mut R, min_atoms: usize, max_atoms: usize) -> AtomicMeasure<T> {
    assert!(1 <= min_atoms && min_atoms <= max_atoms && max_atoms <= 17, "atom counts out of range");
    let count = rng.random_range(min_atoms..=max_atoms);
    let mut slots: Vec<i64> = (-8..=8).collect();
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let i = slots.swap_remove(rng.random_range(0..slots.len()));
        pairs.push((T::from_ratio(i, 4), T::from_i64(rng.random_range(1..=9))));
    }
    AtomicMeasure::new(pairs).expect("positive weights")
}

/// `p/q` with `|p| ≤ max_num` and `1 ≤ q ≤ max_den`.
pub fn random_rational<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> T {
    T::from_ratio(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

/// `p/q` avoiding the integers in `-avoid..=0`, for hypergeometric lower
/// parameters.
pub fn random_parameter<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64, avoid: i64) -> T {
    loop {
        let num = rng.random_range(-max_num..=max_num);
        let den = rng.random_range(1..=max_den);
        if num % den == 0 && (-avoid..=0).contains(&(num / den)) {
            continue;
        }
        return T::from_ratio(num, den);
    }
}

/// Hermitian matrix with real and imaginary parts uniform in `[-1, 1]`
/// before symmetrization.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix<T> {
    let entries = (0..dim * dim)
        .map(|_| {
            Complex::new(
                T::lit(rng.random_range(-1.0..=1.0)),
                T::lit(rng.random_range(-1.0..=1.0)),
            )
        })
        .collect();
    HermitianMatrix::new(ComplexMatrix::from_rows(entries))
}
