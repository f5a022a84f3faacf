//! The density `ω_{A,B}(a, b) = (1/2π) Σ |Im λ_i((A - aI)(B - bI))|` of a
//! pair of Hermitian matrices, its trace-moment formula, and the quadrature
//! that checks one against the other.

mod eigen;
mod grid;
mod matrix;

use num_complex::Complex;
use num_traits::ToPrimitive;
use rayon::prelude::*;

pub use eigen::{general_eigenvalues, SWEEPS_PER_DIM};
pub use grid::{DensityGrid, Spacing};
pub use matrix::{ComplexMatrix, HermitianMatrix};

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::quadrature::{cosine_map, integrate_vec, QuadratureConfig};
use crate::scalar::{binomial, Real, Scalar};

/// Largest `k` or `l` accepted by [`omega_trace_moment`].
pub const OMEGA_TRACE_MOMENT_CAP: usize = 8;

/// `A = diag(x_1..x_d)` and `v = (√p_1..√p_d)`, so `<A^k v, v> = m_k(μ)`.
#[derive(Clone, Debug)]
pub struct MeasureEmbedding<T> {
    a: HermitianMatrix<T>,
    v: Vec<Complex<T>>,
}

impl<T: Real> MeasureEmbedding<T> {
    pub fn a(&self) -> &HermitianMatrix<T> {
        &self.a
    }

    pub fn v(&self) -> &[Complex<T>] {
        &self.v
    }

    /// `v v*`
    pub fn projector(&self) -> HermitianMatrix<T> {
        HermitianMatrix::rank_one(&self.v)
    }

    /// `<A^k v, v>`
    pub fn moment(&self, k: usize) -> T {
        self.a.quadratic_form_power(&self.v, k).re
    }

    pub fn omega_pair(&self) -> Result<OmegaPair<T>> {
        OmegaPair::new(self.a.clone(), self.projector())
    }
}

pub fn embed_measure<T: Real, S: Scalar>(mu: &AtomicMeasure<S>) -> MeasureEmbedding<T> {
    let xs: Vec<T> = mu.atoms().iter().map(|at| T::lit(Scalar::to_f64(&at.x))).collect();
    let v = mu
        .atoms()
        .iter()
        .map(|at| Complex::new(T::lit(Scalar::to_f64(&at.p)).sqrt(), T::zero()))
        .collect();
    MeasureEmbedding {
        a: HermitianMatrix::diagonal(&xs),
        v,
    }
}

/// `[min λ, max λ]` of a Hermitian matrix.
pub fn spectral_hull<T: Real>(m: &HermitianMatrix<T>) -> Result<(T, T)> {
    let eigs = general_eigenvalues(m.as_matrix())?;
    Ok(eigs.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), z| {
        (lo.min(z.re), hi.max(z.re))
    }))
}

/// A Hermitian pair with its spectral hulls and `AB` cached, for repeated
/// evaluation of `ω_{A,B}`.
#[derive(Clone, Debug)]
pub struct OmegaPair<T> {
    a: HermitianMatrix<T>,
    b: HermitianMatrix<T>,
    ab: ComplexMatrix<T>,
    a_hull: (T, T),
    b_hull: (T, T),
    norm_product: T,
}

impl<T: Real> OmegaPair<T> {
    pub fn new(a: HermitianMatrix<T>, b: HermitianMatrix<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: {} vs {}",
                a.dim(),
                b.dim()
            )));
        }
        let a_hull = spectral_hull(&a)?;
        let b_hull = spectral_hull(&b)?;
        let norm = |(lo, hi): (T, T)| lo.abs().max(hi.abs());
        let norm_product = norm(a_hull) * norm(b_hull);
        let ab = a.as_matrix().mul(b.as_matrix());
        Ok(OmegaPair {
            a,
            b,
            ab,
            a_hull,
            b_hull,
            norm_product,
        })
    }

    pub fn a(&self) -> &HermitianMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &HermitianMatrix<T> {
        &self.b
    }

    pub fn a_hull(&self) -> (T, T) {
        self.a_hull
    }

    pub fn b_hull(&self) -> (T, T) {
        self.b_hull
    }

    /// `‖A‖ ‖B‖` in operator norm.
    pub fn norm_product(&self) -> T {
        self.norm_product
    }

    fn in_box(&self, a: T, b: T) -> bool {
        a >= self.a_hull.0 && a <= self.a_hull.1 && b >= self.b_hull.0 && b <= self.b_hull.1
    }

    /// Eigenvalues of `(A - aI)(B - bI) = AB - bA - aB + ab I`.
    pub fn product_eigenvalues(&self, a: T, b: T) -> Result<Vec<Complex<T>>> {
        let n = self.a.dim();
        let am = self.a.as_matrix();
        let bm = self.b.as_matrix();
        let mut m = self.ab.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = m[(i, j)] - am[(i, j)] * b - bm[(i, j)] * a;
            }
            m[(i, i)].re = m[(i, i)].re + a * b;
        }
        general_eigenvalues(&m)
    }

    /// `ω_{A,B}(a, b)`; zero outside the product of spectral hulls.
    pub fn density(&self, a: T, b: T) -> Result<T> {
        if !self.in_box(a, b) {
            return Ok(T::zero());
        }
        let eigs = self.product_eigenvalues(a, b)?;
        let s = eigs.iter().fold(T::zero(), |acc, z| acc + z.im.abs());
        Ok(s / (T::PI() + T::PI()))
    }

    fn nonreal_threshold(&self) -> T {
        T::lit(1e-9).max(T::lit(1e4) * T::epsilon()) * (T::one() + self.norm_product)
    }

    /// Number of eigenvalues of `(A - aI)(B - bI)` with imaginary part above
    /// `max(1e-9, 1e4 ε)(1 + ‖A‖‖B‖)`, i.e. the number of conjugate pairs.
    pub fn nonreal_pair_count(&self, a: T, b: T) -> Result<usize> {
        let threshold = self.nonreal_threshold();
        let eigs = self.product_eigenvalues(a, b)?;
        Ok(eigs.iter().filter(|z| z.im > threshold).count())
    }

    /// Non-real pair count, the smallest gap between real eigenvalues and the
    /// smallest positive imaginary part (infinite when undefined).
    fn eigen_profile(&self, a: T, b: T) -> Result<(usize, T, T)> {
        let threshold = self.nonreal_threshold();
        let eigs = self.product_eigenvalues(a, b)?;
        let mut reals: Vec<T> = eigs.iter().filter(|z| z.im.abs() <= threshold).map(|z| z.re).collect();
        reals.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        let gap = reals.windows(2).fold(T::infinity(), |g, w| g.min(w[1] - w[0]));
        let upper = eigs.iter().filter(|z| z.im > threshold);
        let count = upper.clone().count();
        let min_im = upper.fold(T::infinity(), |m, z| m.min(z.im));
        Ok((count, gap, min_im))
    }

    /// Maximal `b`-intervals on which `ω(a, ·)` is positive and the number of
    /// non-real pairs is constant. `ω` has square-root behaviour at each end,
    /// so every interval is smooth under its own cosine substitution.
    ///
    /// The hull is scanned at 65 cosine-spaced points. Between scan points a
    /// transition can hide only where two real eigenvalues nearly collide or a
    /// pair nearly reaches the real axis, so local minima of those distances
    /// are searched before transitions are located by bisection.
    pub fn support_segments(&self, a: T) -> Result<Vec<(T, T)>> {
        let (alo, ahi) = self.a_hull;
        let (blo, bhi) = self.b_hull;
        if a < alo || a > ahi || !(bhi > blo) {
            return Ok(Vec::new());
        }
        const SCAN: usize = 64;
        let mut scan: Vec<(T, usize, T, T)> = Vec::with_capacity(SCAN + 8);
        for i in 0..=SCAN {
            let theta = T::PI() * T::from_usize(i) / T::from_usize(SCAN);
            let b = if i == SCAN { bhi } else { cosine_map(blo, bhi, theta).0 };
            let (c, gap, im) = self.eigen_profile(a, b)?;
            scan.push((b, c, gap, im));
        }
        let mut hidden = Vec::new();
        for i in 1..SCAN {
            let (_, c, gap, im) = scan[i];
            for (which, v) in [(0, gap), (1, im)] {
                let pick = |k: usize| if which == 0 { scan[k].2 } else { scan[k].3 };
                if v.is_finite() && v <= pick(i - 1) && v <= pick(i + 1) {
                    if let Some(found) = self.hidden_transition(a, scan[i - 1].0, scan[i + 1].0, c, which)? {
                        hidden.push(found);
                    }
                }
            }
        }
        for (b, c) in hidden {
            scan.push((b, c, T::zero(), T::zero()));
        }
        scan.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));

        let mut segments = Vec::new();
        let mut start: Option<T> = if scan[0].1 > 0 { Some(blo) } else { None };
        for w in scan.windows(2) {
            let ((mut lo, mut c, ..), (b1, c1, ..)) = (w[0], w[1]);
            // several transitions may share one scan interval
            while c != c1 {
                let (edge, hi, c_hi) = self.bisect_transition(a, lo, b1, c)?;
                if let Some(s) = start.take() {
                    if edge > s {
                        segments.push((s, edge));
                    }
                }
                if c_hi > 0 {
                    start = Some(edge);
                }
                (lo, c) = (hi, c_hi);
            }
        }
        if let Some(s) = start {
            if bhi > s {
                segments.push((s, bhi));
            }
        }
        Ok(segments)
    }

    /// Golden-section search on `[lo, hi]` for a point whose pair count
    /// differs from `count`, minimizing the real gap (`which == 0`) or the
    /// smallest imaginary part (`which == 1`).
    fn hidden_transition(&self, a: T, lo: T, hi: T, count: usize, which: usize) -> Result<Option<(T, usize)>> {
        let ratio = T::lit(0.618_033_988_749_894_9);
        let (mut x0, mut x1) = (lo, hi);
        let objective = |b: T| -> Result<(usize, T)> {
            let (c, gap, im) = self.eigen_profile(a, b)?;
            Ok((c, if which == 0 { gap } else { im }))
        };
        let mut p = x1 - ratio * (x1 - x0);
        let mut q = x0 + ratio * (x1 - x0);
        let (mut cp, mut fp) = objective(p)?;
        let (mut cq, mut fq) = objective(q)?;
        for _ in 0..48 {
            if cp != count {
                return Ok(Some((p, cp)));
            }
            if cq != count {
                return Ok(Some((q, cq)));
            }
            if fp <= fq {
                x1 = q;
                q = p;
                fq = fp;
                cq = cp;
                p = x1 - ratio * (x1 - x0);
                (cp, fp) = objective(p)?;
            } else {
                x0 = p;
                p = q;
                fp = fq;
                cp = cq;
                q = x0 + ratio * (x1 - x0);
                (cq, fq) = objective(q)?;
            }
        }
        Ok(None)
    }

    /// First point after `lo` where the pair count leaves `count_lo`; returns
    /// the edge, the right end of the final bracket and the count there.
    fn bisect_transition(&self, a: T, mut lo: T, mut hi: T, count_lo: usize) -> Result<(T, T, usize)> {
        let mut count_hi = self.nonreal_pair_count(a, hi)?;
        for _ in 0..64 {
            let mid = (lo + hi) * T::lit(0.5);
            if !(mid > lo && mid < hi) {
                break;
            }
            let c = self.nonreal_pair_count(a, mid)?;
            if c == count_lo {
                lo = mid;
            } else {
                hi = mid;
                count_hi = c;
            }
        }
        Ok(((lo + hi) * T::lit(0.5), hi, count_hi))
    }

    /// `∫ β_j(b) ω(a, b) db` for `j < nb`, segment by segment.
    pub fn integrate_slice<FB>(&self, a: T, beta: &FB, nb: usize, tol: T) -> Result<Vec<T>>
    where
        FB: Fn(T, &mut [T]),
    {
        let mut total = vec![T::zero(); nb];
        let segments = self.support_segments(a)?;
        if segments.is_empty() {
            return Ok(total);
        }
        let cfg = QuadratureConfig::new(tol / T::from_usize(segments.len())).with_initial_panels(2);
        for (s1, s2) in segments {
            let part = integrate_vec(
                |tb, o: &mut [T]| {
                    let (b, db) = cosine_map(s1, s2, tb);
                    let w = self.density(a, b)?;
                    if w == T::zero() {
                        return Ok(());
                    }
                    beta(b, o);
                    o.iter_mut().for_each(|x| *x = *x * w * db);
                    Ok(())
                },
                T::zero(),
                T::PI(),
                nb,
                &cfg,
            )?;
            for (t, p) in total.iter_mut().zip(part) {
                *t = *t + p;
            }
        }
        Ok(total)
    }

    /// `∫∫ a^k b^l ω` from traces of words in `A` and `B`.
    pub fn trace_moment(&self, k: usize, l: usize) -> Result<T> {
        if k > OMEGA_TRACE_MOMENT_CAP || l > OMEGA_TRACE_MOMENT_CAP {
            return Err(Error::OrderTooLarge {
                requested: k.max(l),
                limit: OMEGA_TRACE_MOMENT_CAP,
            });
        }
        let a_pow = self.a.as_matrix().powers(k + 2);
        let b_pow = self.b.as_matrix().powers(l + 2);
        let mut total = T::zero();
        for n in 1..=k.min(l) + 2 {
            let comp_a = compositions(k + 2, n);
            let comp_b = compositions(l + 2, n);
            let mut inner = Complex::new(T::zero(), T::zero());
            for ia in &comp_a {
                for jb in &comp_b {
                    let mut word = ComplexMatrix::identity(self.a.dim());
                    for (&i, &j) in ia.iter().zip(jb) {
                        word = word.mul(&a_pow[i]).mul(&b_pow[j]);
                    }
                    inner = inner + word.trace();
                }
            }
            let c = T::lit(binomial((k + l + 1) as u64, (n - 1) as u64).to_f64().unwrap_or(f64::INFINITY));
            let sign = if n % 2 == 1 { T::one() } else { -T::one() };
            total = total + sign * inner.re / c;
        }
        Ok(total / T::from_usize((k + l + 2) * (k + l + 3)))
    }

    /// `∫∫ α_i(a) β_j(b) ω(a, b) da db` for all `i < na`, `j < nb`, returned
    /// row-major in `i`. Both variables use the cosine substitution on their
    /// spectral hull.
    pub fn integrate_product<FA, FB>(
        &self,
        alpha: FA,
        na: usize,
        beta: FB,
        nb: usize,
        tol: T,
    ) -> Result<Vec<T>>
    where
        FA: Fn(T, &mut [T]),
        FB: Fn(T, &mut [T]),
    {
        let (alo, ahi) = self.a_hull;
        let (blo, bhi) = self.b_hull;
        if !(ahi > alo) || !(bhi > blo) {
            return Ok(vec![T::zero(); na * nb]);
        }
        // inner errors get amplified by |α| · dθ_a
        let mut abuf = vec![T::zero(); na];
        let mut alpha_max = T::one();
        for s in 0..=16 {
            alpha(alo + (ahi - alo) * T::from_usize(s) / T::from_usize(16), &mut abuf);
            alpha_max = abuf.iter().fold(alpha_max, |m, v| m.max(v.abs()));
        }
        let half_span = (ahi - alo) * T::lit(0.5);
        let inner_tol = tol * T::lit(0.05) / (T::PI() * half_span.max(T::one()) * alpha_max);
        let outer_cfg = QuadratureConfig::new(tol);
        integrate_vec(
            |ta, out: &mut [T]| {
                let (a, da) = cosine_map(alo, ahi, ta);
                if da == T::zero() {
                    return Ok(());
                }
                let inner = self.integrate_slice(a, &beta, nb, inner_tol)?;
                let mut av = vec![T::zero(); na];
                alpha(a, &mut av);
                for i in 0..na {
                    for j in 0..nb {
                        out[i * nb + j] = av[i] * inner[j] * da;
                    }
                }
                Ok(())
            },
            T::zero(),
            T::PI(),
            na * nb,
            &outer_cfg,
        )
    }

    /// `∫∫ a^k b^l ω` for all `k ≤ kmax`, `l ≤ lmax` by quadrature; entry
    /// `[k][l]`.
    pub fn quadrature_moments(&self, kmax: usize, lmax: usize, tol: T) -> Result<Vec<Vec<T>>> {
        let flat = self.integrate_product(
            |a, out| powers_into(a, out),
            kmax + 1,
            |b, out| powers_into(b, out),
            lmax + 1,
            tol,
        )?;
        Ok(flat.chunks(lmax + 1).map(<[T]>::to_vec).collect())
    }

    /// `ω` sampled on an `na × nb` grid over the product of spectral hulls.
    pub fn grid(&self, na: usize, nb: usize, spacing: Spacing) -> Result<DensityGrid<T>> {
        DensityGrid::sample_indexed((self.a_hull, self.b_hull), (na, nb), spacing, |_, _, a, b| self.density(a, b))
    }
}

fn powers_into<T: Real>(x: T, out: &mut [T]) {
    let mut p = T::one();
    for o in out.iter_mut() {
        *o = p;
        p = p * x;
    }
}

/// Compositions of `m` into exactly `n` positive parts.
pub fn compositions(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || n > m {
        return out;
    }
    rec(m, n, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn omega_density<T: Real>(a_mat: &HermitianMatrix<T>, b_mat: &HermitianMatrix<T>, a: T, b: T) -> Result<T> {
    OmegaPair::new(a_mat.clone(), b_mat.clone())?.density(a, b)
}

pub fn omega_trace_moment<T: Real>(
    a_mat: &HermitianMatrix<T>,
    b_mat: &HermitianMatrix<T>,
    k: usize,
    l: usize,
) -> Result<T> {
    OmegaPair::new(a_mat.clone(), b_mat.clone())?.trace_moment(k, l)
}

pub fn omega_quadrature_moment<T: Real>(
    a_mat: &HermitianMatrix<T>,
    b_mat: &HermitianMatrix<T>,
    k: usize,
    l: usize,
    tol: T,
) -> Result<T> {
    let pair = OmegaPair::new(a_mat.clone(), b_mat.clone())?;
    let flat = pair.integrate_product(
        |a, out| out[0] = a.powi(k as i32),
        1,
        |b, out| out[0] = b.powi(l as i32),
        1,
        tol,
    )?;
    Ok(flat[0])
}

pub fn nonreal_pair_count<T: Real>(embedding: &MeasureEmbedding<T>, a: T, b: T) -> Result<usize> {
    embedding.omega_pair()?.nonreal_pair_count(a, b)
}

/// `ω_μ = ω_{A, vv*}` for the embedding of `μ`, on an `na × nb` grid over
/// `Conv(supp μ) × [0, 1]`, rows evaluated in parallel.
pub fn omega_measure_grid<T: Real>(
    embedding: &MeasureEmbedding<T>,
    na: usize,
    nb: usize,
    spacing: Spacing,
) -> Result<DensityGrid<T>> {
    let pair = embedding.omega_pair()?;
    let boxed = (pair.a_hull(), (T::zero(), T::one()));
    DensityGrid::sample_indexed(boxed, (na, nb), spacing, |_, _, a, b| pair.density(a, b))
}

pub(crate) fn par_rows<T, F>(na: usize, nb: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> Result<T> + Sync,
{
    let rows: Vec<Result<Vec<T>>> = (0..na)
        .into_par_iter()
        .map(|i| (0..nb).map(|j| f(i, j)).collect())
        .collect();
    let mut out = Vec::with_capacity(na * nb);
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn bernoulli() -> MeasureEmbedding<f64> {
        embed_measure(&AtomicMeasure::<Rational>::bernoulli())
    }

    /// Hand-derived closed form for the Bernoulli embedding.
    fn bernoulli_closed_form(a: f64, b: f64) -> f64 {
        let disc = (1.0 - a * a) * (b - b * b) - a * a * (b - 0.5) * (b - 0.5);
        disc.max(0.0).sqrt() / std::f64::consts::PI
    }

    #[test]
    fn embedding_examples() {
        let e = bernoulli();
        let h = 0.5f64.sqrt();
        assert!(e.v().iter().all(|z| (z.re - h).abs() < 1e-15 && z.im == 0.0));
        let pt: MeasureEmbedding<f64> = embed_measure(&AtomicMeasure::dirac(Rational::from_ratio(7, 2)));
        assert_eq!(pt.a().dim(), 1);
        assert_eq!(pt.moment(1), 3.5);
        let mu = AtomicMeasure::new([
            (Rational::from_i64(0), Rational::from_ratio(2, 3)),
            (Rational::from_i64(1), Rational::from_ratio(1, 3)),
        ])
        .unwrap();
        let e: MeasureEmbedding<f64> = embed_measure(&mu);
        assert!((e.moment(3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn embedding_reproduces_moments() {
        let mu = AtomicMeasure::new([
            (Rational::from_ratio(-3, 2), Rational::from_i64(1)),
            (Rational::from_ratio(1, 4), Rational::from_i64(3)),
            (Rational::from_i64(2), Rational::from_i64(2)),
        ])
        .unwrap();
        let e: MeasureEmbedding<f64> = embed_measure(&mu);
        for k in 0..=12 {
            let exact = Scalar::to_f64(&mu.moment(k));
            assert!((e.moment(k) - exact).abs() <= 1e-12 * exact.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn bernoulli_density_matches_closed_form() {
        let pair = bernoulli().omega_pair().unwrap();
        let w = pair.density(0.0, 0.5).unwrap();
        assert!((w - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
        for a in [-0.9, -0.4, 0.0, 0.3, 0.77] {
            for b in [0.05, 0.3, 0.5, 0.81, 0.99] {
                let w = pair.density(a, b).unwrap();
                assert!((w - bernoulli_closed_form(a, b)).abs() < 1e-7, "a={a} b={b}");
            }
        }
        assert_eq!(pair.density(1.5, 0.5).unwrap(), 0.0);
        assert_eq!(pair.density(0.0, -0.1).unwrap(), 0.0);
    }

    #[test]
    fn commuting_pair_has_zero_density() {
        let a = HermitianMatrix::diagonal(&[1.0, -2.0, 0.5]);
        let b = HermitianMatrix::diagonal(&[3.0, 0.0, 1.0]);
        let pair = OmegaPair::new(a, b).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let w = pair.density(-2.0 + 3.0 * i as f64 / 9.0, 3.0 * j as f64 / 9.0).unwrap();
                assert_eq!(w, 0.0);
            }
        }
    }

    #[test]
    fn bernoulli_trace_moments() {
        let pair = bernoulli().omega_pair().unwrap();
        assert!((pair.trace_moment(0, 0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((pair.trace_moment(2, 0).unwrap() - 1.0 / 30.0).abs() < 1e-14);
        assert!((pair.trace_moment(0, 1).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert!(matches!(pair.trace_moment(9, 0), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn bernoulli_quadrature_total_mass() {
        let e = bernoulli();
        let v = omega_quadrature_moment(e.a(), &e.projector(), 0, 0, 1e-8).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn nonreal_pairs_for_bernoulli() {
        let e = bernoulli();
        assert_eq!(nonreal_pair_count(&e, 0.0, 0.5).unwrap(), 1);
        assert_eq!(nonreal_pair_count(&e, 3.0, 0.5).unwrap(), 0);
    }

    #[test]
    fn segments_cover_positive_density_across_double_transitions() {
        use rand::{Rng, SeedableRng};
        // between two scan points the pair count drops 2 -> 1 -> 0 here
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240611);
        rng.set_stream(5);
        let mut pair = None;
        for _ in 0..10 {
            let d = rng.random_range(2..=4);
            pair = Some(OmegaPair::new(
                crate::sampling::random_hermitian::<f64, _>(&mut rng, d),
                crate::sampling::random_hermitian(&mut rng, d),
            ));
        }
        let pair = pair.unwrap().unwrap();
        let (blo, bhi) = pair.b_hull();
        for a in [0.144562, 0.176171, 0.207779] {
            let segments = pair.support_segments(a).unwrap();
            for j in 0..=4000 {
                let b = blo + (bhi - blo) * j as f64 / 4000.0;
                if pair.density(a, b).unwrap() > 1e-10 {
                    assert!(segments.iter().any(|&(s, e)| s <= b && b <= e), "a={a}, b={b}: {segments:?}");
                }
            }
        }
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
        // C(m-1, n-1)
        assert_eq!(compositions(9, 4).len(), 56);
    }
}
