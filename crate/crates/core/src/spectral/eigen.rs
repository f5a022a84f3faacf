//! Eigenvalues of a general complex matrix: Householder reduction to upper
//! Hessenberg form, then single-shift QR with Givens rotations and deflation.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Iteration budget per unit of dimension.
pub const SWEEPS_PER_DIM: usize = 100;

/// All `d` eigenvalues with algebraic multiplicity, in no particular order.
pub fn general_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut h: Vec<Complex<T>> = m.entries().to_vec();
    hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n)
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn hessenberg<T: Real>(a: &mut [Complex<T>], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).fold(T::zero(), |acc, i| acc + a[i * n + k].norm_sqr()).sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| a[i * n + k]).collect();
        v[0] = v[0] - alpha;
        let vnorm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        v.iter_mut().for_each(|z| *z = *z / vnorm);
        let two = T::lit(2.0);
        // left: rows k+1.., all columns from k
        for j in k..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(zero::<T>(), |acc, (r, vr)| acc + vr.conj() * a[(k + 1 + r) * n + j]);
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r) * n + j] = a[(k + 1 + r) * n + j] - *vr * dot * two;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let dot = v
                .iter()
                .enumerate()
                .fold(zero::<T>(), |acc, (c, vc)| acc + a[i * n + k + 1 + c] * *vc);
            for (c, vc) in v.iter().enumerate() {
                a[i * n + k + 1 + c] = a[i * n + k + 1 + c] - dot * vc.conj() * two;
            }
        }
        for i in k + 2..n {
            a[i * n + k] = zero();
        }
    }
}

/// Eigenvalues of the 2x2 block `[[a, b], [c, d]]`.
fn eig2<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> (Complex<T>, Complex<T>) {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let delta = (a - d) * half;
    let root = (delta * delta + b * c).sqrt();
    let l1 = mean + root;
    let l2 = mean - root;
    // recompute the smaller root from the determinant when it cancels
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() && l1.norm() > T::zero() {
        (l1, det / l1)
    } else if l2.norm() > T::zero() {
        (det / l2, l2)
    } else {
        (l1, l2)
    }
}

fn hessenberg_qr<T: Real>(h: &mut [Complex<T>], n: usize) -> Result<Vec<Complex<T>>> {
    let eps = T::epsilon();
    let scale = h.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    let tiny = T::min_positive_value() / eps;
    let cap = SWEEPS_PER_DIM * n;
    let mut eigs = Vec::with_capacity(n);
    let mut iterations = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    let at = |i: usize, j: usize| i * n + j;
    loop {
        if hi == 0 {
            eigs.push(h[at(0, 0)]);
            break;
        }
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = h[at(lo, lo - 1)].norm();
            let diag = h[at(lo, lo)].norm() + h[at(lo - 1, lo - 1)].norm();
            let reference = if diag > T::zero() { diag } else { scale };
            if sub <= eps * reference || sub <= tiny {
                h[at(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs.push(h[at(hi, hi)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[at(lo, lo)], h[at(lo, hi)], h[at(hi, lo)], h[at(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            since_deflation = 0;
            continue;
        }
        if iterations >= cap {
            return Err(Error::EigenNonConvergence {
                dim: n,
                iterations,
                active: hi - lo + 1,
            });
        }
        iterations += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // exceptional shift to break cycles
            let s = h[at(hi, hi - 1)].norm() + h[at(hi - 1, hi - 2)].norm();
            h[at(hi, hi)] + Complex::new(s * T::lit(0.75), s * T::lit(0.4))
        } else {
            let (l1, l2) = eig2(
                h[at(hi - 1, hi - 1)],
                h[at(hi - 1, hi)],
                h[at(hi, hi - 1)],
                h[at(hi, hi)],
            );
            let d = h[at(hi, hi)];
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        for i in lo..=hi {
            h[at(i, i)] = h[at(i, i)] - shift;
        }
        let mut rotations: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = h[at(k, k)];
            let y = h[at(k + 1, k)];
            let (c, s) = givens(x, y);
            for j in k..=hi {
                let top = h[at(k, j)];
                let bot = h[at(k + 1, j)];
                h[at(k, j)] = top * c + s * bot;
                h[at(k + 1, j)] = -s.conj() * top + bot * c;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 2).min(hi) {
                let left = h[at(i, k)];
                let right = h[at(i, k + 1)];
                h[at(i, k)] = left * c + right * s.conj();
                h[at(i, k + 1)] = -left * s + right * c;
            }
        }
        for i in lo..=hi {
            h[at(i, i)] = h[at(i, i)] + shift;
        }
    }
    Ok(eigs)
}

/// `(c, s)` with real `c` such that `[[c, s], [-s̄, c]] [x; y] = [r; 0]`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), zero());
    }
    let ax = x.norm();
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}
