use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::Real;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Row-major entries; panics unless `entries.len()` is a perfect square.
    pub fn from_rows(entries: Vec<Complex<T>>) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "matrix must be square");
        ComplexMatrix { dim, data: entries }
    }

    pub fn from_real_rows(entries: &[T]) -> Self {
        Self::from_rows(entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(x, T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        assert_eq!(n, rhs.dim, "dimension mismatch");
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self - s I`
    pub fn shift(&self, s: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)].re = m[(i, i)].re - s;
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// `I, M, M², .., M^k`
    pub fn powers(&self, k: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(Self::identity(self.dim));
        for i in 1..=k {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Hermitian matrix; the constructor replaces the input by `(M + M*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    inner: ComplexMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Self {
        let n = m.dim();
        let mut out = ComplexMatrix::zeros(n);
        let half = T::lit(0.5);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * half;
            }
        }
        HermitianMatrix { inner: out }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        HermitianMatrix {
            inner: ComplexMatrix::diagonal(diag),
        }
    }

    /// `v v*`
    pub fn rank_one(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    /// `<M^k v, v>`
    pub fn quadratic_form_power(&self, v: &[Complex<T>], k: usize) -> Complex<T> {
        let n = self.dim();
        let mut w: Vec<Complex<T>> = v.to_vec();
        for _ in 0..k {
            w = (0..n)
                .map(|i| (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + self.inner[(i, j)] * w[j]))
                .collect();
        }
        w.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj())
    }
}
