use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::Result;
use crate::measures::AtomicMeasure;
use crate::quadrature::{cosine_map, cosine_unmap, integrate_vec, CumulativeIntegral, QuadratureConfig};
use crate::scalar::{sign_power, Real, Scalar};
use crate::specialfn::{closed_form, gegenbauer_c32_poly};
use crate::spectral::{embed_measure, DensityGrid, OmegaPair, Spacing};

/// Coefficients of `C_l^{3/2}` in floating point, low degree first.
fn gegenbauer_coeffs<R: Real>(l: usize) -> Vec<R> {
    gegenbauer_c32_poly::<BigRational>(l)
        .coeffs()
        .iter()
        .map(|c| R::lit(Scalar::to_f64(c)))
        .collect()
}

fn horner<R: Real>(coeffs: &[R], x: R) -> R {
    coeffs.iter().rev().fold(R::zero(), |acc, &c| acc * x + c)
}

fn gegenbauer_family<R: Real>(lmax: usize) -> Vec<Vec<R>> {
    (0..=lmax).map(gegenbauer_coeffs).collect()
}

/// `∫∫ a^n C_l^{3/2}(2b - 1) ω_μ(a, b) da db` for `l ≤ lmax`, `n ≤ nmax`,
/// indexed `[l][n]`.
pub fn i_functional_spectral_table<R: Real, S: Scalar>(
    mu: &AtomicMeasure<S>,
    lmax: usize,
    nmax: usize,
    tol: R,
) -> Result<Vec<Vec<R>>> {
    let mut table = vec![vec![R::zero(); nmax + 1]; lmax + 1];
    if mu.is_degenerate() {
        return Ok(table);
    }
    let pair = embed_measure::<R, S>(mu).omega_pair()?;
    let family = gegenbauer_family::<R>(lmax);
    let flat = pair.integrate_product(
        |a, out: &mut [R]| {
            let mut p = R::one();
            for o in out.iter_mut() {
                *o = p;
                p = p * a;
            }
        },
        nmax + 1,
        |b, out: &mut [R]| {
            let x = b + b - R::one();
            for (o, c) in out.iter_mut().zip(&family) {
                *o = horner(c, x);
            }
        },
        lmax + 1,
        tol,
    )?;
    for (n, row) in flat.chunks(lmax + 1).enumerate() {
        for (l, v) in row.iter().enumerate() {
            table[l][n] = *v;
        }
    }
    Ok(table)
}

/// `I_l^μ(t^n)` by quadrature of `ω_μ` against `a^n C_l^{3/2}(2b - 1)`.
pub fn i_functional_spectral<R: Real, S: Scalar>(mu: &AtomicMeasure<S>, l: usize, n: usize, tol: R) -> Result<R> {
    if mu.is_degenerate() {
        return Ok(R::zero());
    }
    let pair = embed_measure::<R, S>(mu).omega_pair()?;
    let c = gegenbauer_coeffs::<R>(l);
    let flat = pair.integrate_product(
        |a, out: &mut [R]| out[0] = a.powi(n as i32),
        1,
        |b, out: &mut [R]| out[0] = horner(&c, b + b - R::one()),
        1,
        tol,
    )?;
    Ok(flat[0])
}

/// `m̃_{μ,ν}(t_μ^i t_ν^j)` for `i, j ≤ order` from the Gegenbauer series with
/// every `I_l` evaluated by quadrature.
pub fn ccm_moments_spectral<R: Real, S: Scalar>(
    mu: &AtomicMeasure<S>,
    nu: &AtomicMeasure<S>,
    order: usize,
    tol: R,
) -> Result<Vec<Vec<R>>> {
    let i_mu = i_functional_spectral_table(mu, order, order, tol)?;
    let i_nu = i_functional_spectral_table(nu, order, order, tol)?;
    Ok((0..=order)
        .map(|i| {
            (0..=order)
                .map(|j| {
                    (0..=i.min(j)).fold(R::zero(), |acc, l| {
                        acc + R::lit(sign_power::<f64>(l as i64) * (2 * l + 3) as f64) * i_mu[l][i] * i_nu[l][j]
                    })
                })
                .collect()
        })
        .collect())
}

/// Cumulative integrals of `h/(1 - y)` and `h/y` for `h = ω_ν(t_ν, ·)`,
/// one per support segment of `h`.
struct KernelProfile<R> {
    segments: Vec<(R, R, CumulativeIntegral<R>)>,
    total_right: R,
}

impl<R: Real> KernelProfile<R> {
    fn cumulative(&self, channel: usize, s: R) -> R {
        self.segments.iter().fold(R::zero(), |acc, (s1, s2, cum)| {
            if s <= *s1 {
                acc
            } else if s >= *s2 {
                acc + cum.total(channel)
            } else {
                acc + cum.up_to(channel, cosine_unmap(*s1, *s2, s))
            }
        })
    }

    /// `∫_0^s h(y)/(1 - y) dy`
    fn left(&self, s: R) -> R {
        self.cumulative(0, s)
    }

    /// `∫_s^1 h(y)/y dy`
    fn right(&self, s: R) -> R {
        self.total_right - self.cumulative(1, s)
    }

    fn edges(&self) -> impl Iterator<Item = R> + '_ {
        self.segments.iter().flat_map(|(s1, s2, _)| [*s1, *s2])
    }
}

/// The density `w_{μ,ν}` of the comparison measure,
/// `w(t_μ, t_ν) = ∫∫ min(1/((1-x)(1-y)), 1/(xy)) ω_μ(t_μ, x) ω_ν(t_ν, y) dx dy`.
///
/// The inner integral over `y` is tabulated once per `t_ν` as cumulative
/// integrals, after which the kernel reduces to
/// `H_1(1-x)/(1-x) + H_2(1-x)/x` with `H_1(s) = ∫_0^s h/(1-y)` and
/// `H_2(s) = ∫_s^1 h/y`.
#[derive(Clone, Debug)]
pub struct CcmDensity<R> {
    mu: Option<OmegaPair<R>>,
    nu: Option<OmegaPair<R>>,
    box_mu: (R, R),
    box_nu: (R, R),
}

impl<R: Real> CcmDensity<R> {
    pub fn new<S: Scalar>(mu: &AtomicMeasure<S>, nu: &AtomicMeasure<S>) -> Result<Self> {
        let hull = |m: &AtomicMeasure<S>| {
            let s = m.support();
            (R::lit(s.lo.to_f64()), R::lit(s.hi.to_f64()))
        };
        let pair = |m: &AtomicMeasure<S>| -> Result<Option<OmegaPair<R>>> {
            if m.is_degenerate() {
                Ok(None)
            } else {
                embed_measure::<R, S>(m).omega_pair().map(Some)
            }
        };
        Ok(CcmDensity {
            mu: pair(mu)?,
            nu: pair(nu)?,
            box_mu: hull(mu),
            box_nu: hull(nu),
        })
    }

    /// `Conv(supp μ)` and `Conv(supp ν)`.
    pub fn support_box(&self) -> ((R, R), (R, R)) {
        (self.box_mu, self.box_nu)
    }

    pub fn value(&self, t_mu: R, t_nu: R, tol: R) -> Result<R> {
        let (Some(pm), Some(pn)) = (&self.mu, &self.nu) else {
            return Ok(R::zero());
        };
        let profile = Self::profile(pn, t_nu, tol)?;
        let segments = pm.support_segments(t_mu)?;
        Self::value_with(pm, t_mu, &segments, &profile, tol)
    }

    fn profile(pn: &OmegaPair<R>, t_nu: R, tol: R) -> Result<KernelProfile<R>> {
        let segs = pn.support_segments(t_nu)?;
        let cfg = QuadratureConfig::new(tol * R::lit(0.1) / R::from_usize(segs.len().max(1))).with_initial_panels(2);
        let mut segments = Vec::with_capacity(segs.len());
        let mut total_right = R::zero();
        for (s1, s2) in segs {
            let cum = CumulativeIntegral::build(
                |theta, out: &mut [R]| {
                    let (y, dy) = cosine_map(s1, s2, theta);
                    if y <= R::zero() || y >= R::one() {
                        return Ok(());
                    }
                    let h = pn.density(t_nu, y)? * dy;
                    out[0] = h / (R::one() - y);
                    out[1] = h / y;
                    Ok(())
                },
                R::zero(),
                R::PI(),
                2,
                &cfg,
            )?;
            total_right = total_right + cum.total(1);
            segments.push((s1, s2, cum));
        }
        Ok(KernelProfile { segments, total_right })
    }

    fn value_with(pm: &OmegaPair<R>, t_mu: R, segments: &[(R, R)], profile: &KernelProfile<R>, tol: R) -> Result<R> {
        if segments.is_empty() || profile.segments.is_empty() {
            return Ok(R::zero());
        }
        // H_1, H_2 are not smooth where 1 - x hits an edge of supp h
        let cuts: Vec<R> = profile.edges().map(|e| R::one() - e).collect();
        let mut pieces = Vec::new();
        for &(x1, x2) in segments {
            let mut inner: Vec<R> = cuts.iter().copied().filter(|&c| c > x1 && c < x2).collect();
            inner.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let mut lo = x1;
            for c in inner.into_iter().chain(std::iter::once(x2)) {
                if c > lo {
                    pieces.push((lo, c));
                    lo = c;
                }
            }
        }
        let cfg = QuadratureConfig::new(tol / R::from_usize(pieces.len())).with_initial_panels(2);
        let mut total = R::zero();
        for (p1, p2) in pieces {
            let part = integrate_vec(
                |theta, out: &mut [R]| {
                    let (x, dx) = cosine_map(p1, p2, theta);
                    if x <= R::zero() || x >= R::one() {
                        return Ok(());
                    }
                    let f = pm.density(t_mu, x)?;
                    if f == R::zero() {
                        return Ok(());
                    }
                    let s = R::one() - x;
                    out[0] = f * dx * (profile.left(s) / s + profile.right(s) / x);
                    Ok(())
                },
                R::zero(),
                R::PI(),
                1,
                &cfg,
            )?;
            total = total + part[0];
        }
        Ok(total.max(R::zero()))
    }

    /// `w` on an `na × nb` grid over `Conv(supp μ) × Conv(supp ν)`. The
    /// `t_ν` profiles and `t_μ` segments are shared along columns and rows.
    pub fn grid(&self, na: usize, nb: usize, spacing: Spacing, tol: R) -> Result<DensityGrid<R>> {
        let ((alo, ahi), (blo, bhi)) = (self.box_mu, self.box_nu);
        let probe = DensityGrid::with_spacing(alo, ahi, blo, bhi, na, nb, spacing, vec![R::zero(); na * nb])?;
        let (Some(pm), Some(pn)) = (&self.mu, &self.nu) else {
            return Ok(probe);
        };
        let profiles: Vec<KernelProfile<R>> = (0..nb)
            .into_par_iter()
            .map(|j| Self::profile(pn, probe.b(j), tol))
            .collect::<Result<_>>()?;
        let segments: Vec<Vec<(R, R)>> = (0..na)
            .into_par_iter()
            .map(|i| pm.support_segments(probe.a(i)))
            .collect::<Result<_>>()?;
        DensityGrid::sample_indexed((self.box_mu, self.box_nu), (na, nb), spacing, |i, j, t_mu, _| {
            Self::value_with(pm, t_mu, &segments[i], &profiles[j], tol)
        })
    }
}

/// `w_{μ,ν}(t_μ, t_ν)`.
pub fn w_density<R: Real, S: Scalar>(
    mu: &AtomicMeasure<S>,
    nu: &AtomicMeasure<S>,
    t_mu: R,
    t_nu: R,
    tol: R,
) -> Result<R> {
    CcmDensity::new(mu, nu)?.value(t_mu, t_nu, tol)
}

/// `w_{μ,ν}` sampled on an `na × nb` grid over the support box.
pub fn ccm_density_grid<R: Real, S: Scalar>(
    mu: &AtomicMeasure<S>,
    nu: &AtomicMeasure<S>,
    na: usize,
    nb: usize,
    spacing: Spacing,
    tol: R,
) -> Result<DensityGrid<R>> {
    CcmDensity::new(mu, nu)?.grid(na, nb, spacing, tol)
}

/// `∫∫ min(x y, (1-x)(1-y)) C_k(2x-1) C_j(2y-1) dx dy` for `k, j ≤ kmax`:
/// the kernel `min(1/((1-x)(1-y)), 1/(xy))` paired with `C_k ⊗ C_j` under the
/// weight `x(1-x) y(1-y)`. The integrand is a polynomial on either side of
/// `x + y = 1`, so each side is integrated separately.
pub fn gegenbauer_kernel_table<R: Real>(kmax: usize, tol: R) -> Result<Vec<Vec<R>>> {
    let family = gegenbauer_family::<R>(kmax);
    let dim = (kmax + 1) * (kmax + 1);
    let cfg = QuadratureConfig::new(tol).with_initial_panels(1);
    let flat = integrate_vec(
        |x, out: &mut [R]| {
            let s = R::one() - x;
            let below = integrate_vec(
                |y, o: &mut [R]| {
                    let k = x * y;
                    for (j, c) in family.iter().enumerate() {
                        o[j] = k * horner(c, y + y - R::one());
                    }
                    Ok(())
                },
                R::zero(),
                s,
                kmax + 1,
                &cfg,
            )?;
            let above = integrate_vec(
                |y, o: &mut [R]| {
                    let k = s * (R::one() - y);
                    for (j, c) in family.iter().enumerate() {
                        o[j] = k * horner(c, y + y - R::one());
                    }
                    Ok(())
                },
                s,
                R::one(),
                kmax + 1,
                &cfg,
            )?;
            for (k, c) in family.iter().enumerate() {
                let ck = horner(c, x + x - R::one());
                for j in 0..=kmax {
                    out[k * (kmax + 1) + j] = ck * (below[j] + above[j]);
                }
            }
            Ok(())
        },
        R::zero(),
        R::one(),
        dim,
        &cfg,
    )?;
    Ok(flat.chunks(kmax + 1).map(<[R]>::to_vec).collect())
}

/// Closed form of the diagonal of [`gegenbauer_kernel_table`]:
/// `(-1)^k (2k+3) n_k²` with `n_k = ∫_0^1 x(1-x) C_k(2x-1)² dx`; off-diagonal
/// entries vanish.
pub fn gegenbauer_kernel_inner_product<T: Scalar>(k: usize) -> T {
    let norm = closed_form::gegenbauer_norm::<T>(k) / T::from_i64(8);
    sign_power::<T>(k as i64) * T::from_i64(2 * k as i64 + 3) * norm.clone() * norm
}
