//! Composite Gauss–Legendre quadrature with deterministic bisection.
//!
//! Every panel is compared against the sum over its two halves; panels whose
//! halves disagree by more than their share of the tolerance are split, always
//! left half first. The schedule depends only on the integrand values, so
//! results are reproducible bit for bit.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// 8-point Gauss–Legendre abscissae on `[-1, 1]`, ascending.
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_231_683_560_9,
    -0.796_666_477_413_626_739_591_553_9,
    -0.525_532_409_916_328_985_817_739_0,
    -0.183_434_642_495_649_804_939_476_1,
    0.183_434_642_495_649_804_939_476_1,
    0.525_532_409_916_328_985_817_739_0,
    0.796_666_477_413_626_739_591_553_9,
    0.960_289_856_497_536_231_683_560_9,
];

const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_259_152_531_4,
    0.222_381_034_453_374_470_544_356_0,
    0.313_706_645_877_887_287_337_962_2,
    0.362_683_783_378_361_982_965_150_4,
    0.362_683_783_378_361_982_965_150_4,
    0.313_706_645_877_887_287_337_962_2,
    0.222_381_034_453_374_470_544_356_0,
    0.101_228_536_290_376_259_152_531_4,
];

pub const GL_ORDER: usize = GL_NODES.len();

/// Tolerance and work limits for [`adaptive_panels`].
#[derive(Clone, Copy, Debug)]
pub struct QuadratureConfig<T> {
    /// Absolute tolerance on the whole integral (max over components).
    pub tol: T,
    /// Number of equal panels before any refinement.
    pub initial_panels: usize,
    /// Total number of accepted plus pending panels allowed.
    pub max_panels: usize,
}

impl<T: Real> QuadratureConfig<T> {
    pub fn new(tol: T) -> Self {
        QuadratureConfig {
            tol,
            initial_panels: 8,
            max_panels: 1 << 14,
        }
    }

    pub fn with_initial_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn with_max_panels(mut self, n: usize) -> Self {
        self.max_panels = n;
        self
    }
}

/// One accepted panel: its interval, the integrand at the 8 mapped nodes
/// (component-major, `values[c * 8 + i]`) and the per-component integral.
#[derive(Clone, Debug)]
pub struct Panel<T> {
    pub lo: T,
    pub hi: T,
    pub values: Vec<T>,
    pub integral: Vec<T>,
}

impl<T: Real> Panel<T> {
    fn evaluate<F>(f: &mut F, lo: T, hi: T, dim: usize) -> Result<Self>
    where
        F: FnMut(T, &mut [T]) -> Result<()>,
    {
        let half = (hi - lo) * T::lit(0.5);
        let mid = lo + half;
        let mut values = vec![T::zero(); dim * GL_ORDER];
        let mut integral = vec![T::zero(); dim];
        let mut buf = vec![T::zero(); dim];
        for (i, (&x, &w)) in GL_NODES.iter().zip(&GL_WEIGHTS).enumerate() {
            buf.iter_mut().for_each(|v| *v = T::zero());
            f(mid + half * T::lit(x), &mut buf)?;
            for c in 0..dim {
                values[c * GL_ORDER + i] = buf[c];
                integral[c] = integral[c] + T::lit(w) * half * buf[c];
            }
        }
        Ok(Panel {
            lo,
            hi,
            values,
            integral,
        })
    }

    /// `∫_lo^x` of the degree-7 interpolant of component `c`, for `x` in the panel.
    pub fn partial_integral(&self, c: usize, x: T) -> T {
        let half = (self.hi - self.lo) * T::lit(0.5);
        if half <= T::zero() {
            return T::zero();
        }
        let s = ((x - self.lo) / half - T::one()).max(-T::one()).min(T::one());
        let vals = &self.values[c * GL_ORDER..(c + 1) * GL_ORDER];
        // Legendre coefficients of the interpolant without the (2n+1)/2 factor
        let mut coeffs = [T::zero(); GL_ORDER];
        for (i, (&xi, &wi)) in GL_NODES.iter().zip(&GL_WEIGHTS).enumerate() {
            let p = legendre_values(T::lit(xi));
            for (n, cn) in coeffs.iter_mut().enumerate() {
                *cn = *cn + T::lit(wi) * vals[i] * p[n];
            }
        }
        // ∫_{-1}^s P_0 = s + 1, ∫_{-1}^s P_n = (P_{n+1}(s) - P_{n-1}(s)) / (2n+1)
        let p = legendre_values(s);
        let mut acc = coeffs[0] * T::lit(0.5) * (s + T::one());
        for n in 1..GL_ORDER {
            acc = acc + coeffs[n] * T::lit(0.5) * (p[n + 1] - p[n - 1]);
        }
        acc * half
    }
}

/// `P_0(s) .. P_8(s)` by the three-term recurrence.
fn legendre_values<T: Real>(s: T) -> [T; GL_ORDER + 1] {
    let mut p = [T::zero(); GL_ORDER + 1];
    p[0] = T::one();
    p[1] = s;
    for n in 1..GL_ORDER {
        let nf = T::from_usize(n);
        p[n + 1] = ((nf + nf + T::one()) * s * p[n] - nf * p[n - 1]) / (nf + T::one());
    }
    p
}

fn max_abs_diff<T: Real>(a: &[T], b: &[T], c: &[T]) -> T {
    a.iter()
        .zip(b.iter().zip(c))
        .map(|(&x, (&l, &r))| (x - (l + r)).abs())
        .fold(T::zero(), T::max)
}

/// Accepted panels covering `[lo, hi]` in ascending order, for a
/// `dim`-component integrand written into the output slice by `f`.
pub fn adaptive_panels<T, F>(
    mut f: F,
    lo: T,
    hi: T,
    dim: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<Panel<T>>>
where
    T: Real,
    F: FnMut(T, &mut [T]) -> Result<()>,
{
    if !(cfg.tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if !(hi > lo) {
        return Ok(Vec::new());
    }
    let total = hi - lo;
    let min_width = total * T::lit(1e-13);
    let n0 = cfg.initial_panels.max(1);
    let mut pending = Vec::with_capacity(n0);
    for i in (0..n0).rev() {
        let a = lo + total * T::from_usize(i) / T::from_usize(n0);
        let b = if i + 1 == n0 {
            hi
        } else {
            lo + total * T::from_usize(i + 1) / T::from_usize(n0)
        };
        pending.push(Panel::evaluate(&mut f, a, b, dim)?);
    }
    let mut accepted: Vec<Panel<T>> = Vec::new();
    while let Some(panel) = pending.pop() {
        if accepted.len() + pending.len() >= cfg.max_panels {
            pending.push(panel);
            return Err(budget_error(&accepted, &pending, &mut f, dim));
        }
        let mid = (panel.lo + panel.hi) * T::lit(0.5);
        let left = Panel::evaluate(&mut f, panel.lo, mid, dim)?;
        let right = Panel::evaluate(&mut f, mid, panel.hi, dim)?;
        let gap = max_abs_diff(&panel.integral, &left.integral, &right.integral);
        let share = cfg.tol * (panel.hi - panel.lo) / total;
        if gap <= share || panel.hi - panel.lo <= min_width {
            accepted.push(left);
            accepted.push(right);
        } else {
            pending.push(right);
            pending.push(left);
        }
    }
    Ok(accepted)
}

fn budget_error<T, F>(accepted: &[Panel<T>], pending: &[Panel<T>], f: &mut F, dim: usize) -> Error
where
    T: Real,
    F: FnMut(T, &mut [T]) -> Result<()>,
{
    let mut estimate = vec![T::zero(); dim];
    for p in accepted.iter().chain(pending) {
        for c in 0..dim {
            estimate[c] = estimate[c] + p.integral[c];
        }
    }
    // gap: how far the unresolved panels are from their bisected values
    let mut gap = T::zero();
    for p in pending {
        let mid = (p.lo + p.hi) * T::lit(0.5);
        match (
            Panel::evaluate(f, p.lo, mid, dim),
            Panel::evaluate(f, mid, p.hi, dim),
        ) {
            (Ok(l), Ok(r)) => gap = gap + max_abs_diff(&p.integral, &l.integral, &r.integral),
            _ => gap = T::infinity(),
        }
    }
    let best = estimate
        .iter()
        .copied()
        .fold(T::zero(), |m, v| if v.abs() > m.abs() { v } else { m });
    Error::QuadratureNonConvergence {
        estimate: best.to_f64().unwrap_or(f64::NAN),
        gap: gap.to_f64().unwrap_or(f64::NAN),
    }
}

/// `∫_lo^hi f` componentwise.
pub fn integrate_vec<T, F>(f: F, lo: T, hi: T, dim: usize, cfg: &QuadratureConfig<T>) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(T, &mut [T]) -> Result<()>,
{
    let panels = adaptive_panels(f, lo, hi, dim, cfg)?;
    Ok(sum_panels(&panels, dim))
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<T, F>(mut f: F, lo: T, hi: T, cfg: &QuadratureConfig<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let v = integrate_vec(
        |x, out: &mut [T]| {
            out[0] = f(x)?;
            Ok(())
        },
        lo,
        hi,
        1,
        cfg,
    )?;
    Ok(v[0])
}

fn sum_panels<T: Real>(panels: &[Panel<T>], dim: usize) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for p in panels {
        for c in 0..dim {
            out[c] = out[c] + p.integral[c];
        }
    }
    out
}

/// Accepted panels plus prefix sums, for evaluating `x ↦ ∫_lo^x f` anywhere.
#[derive(Clone, Debug)]
pub struct CumulativeIntegral<T> {
    lo: T,
    hi: T,
    dim: usize,
    panels: Vec<Panel<T>>,
    // prefix[k * dim + c] = ∫ of component c over panels[..k]
    prefix: Vec<T>,
}

impl<T: Real> CumulativeIntegral<T> {
    pub fn build<F>(f: F, lo: T, hi: T, dim: usize, cfg: &QuadratureConfig<T>) -> Result<Self>
    where
        F: FnMut(T, &mut [T]) -> Result<()>,
    {
        let panels = adaptive_panels(f, lo, hi, dim, cfg)?;
        let mut prefix = vec![T::zero(); (panels.len() + 1) * dim];
        for (k, p) in panels.iter().enumerate() {
            for c in 0..dim {
                prefix[(k + 1) * dim + c] = prefix[k * dim + c] + p.integral[c];
            }
        }
        Ok(CumulativeIntegral {
            lo,
            hi,
            dim,
            panels,
            prefix,
        })
    }

    pub fn panels(&self) -> &[Panel<T>] {
        &self.panels
    }

    pub fn total(&self, c: usize) -> T {
        self.prefix[self.panels.len() * self.dim + c]
    }

    /// `∫_lo^x` of component `c`; clamps `x` to the interval.
    pub fn up_to(&self, c: usize, x: T) -> T {
        if self.panels.is_empty() || x <= self.lo {
            return T::zero();
        }
        if x >= self.hi {
            return self.total(c);
        }
        let k = self.panels.partition_point(|p| p.hi <= x);
        if k >= self.panels.len() {
            return self.total(c);
        }
        self.prefix[k * self.dim + c] + self.panels[k].partial_integral(c, x)
    }

    /// Calls `visit(x, weight, values)` for every quadrature node, where
    /// `values[c]` is component `c` at that node.
    pub fn for_each_node(&self, mut visit: impl FnMut(T, T, &[T])) {
        let mut buf = vec![T::zero(); self.dim];
        for p in &self.panels {
            let half = (p.hi - p.lo) * T::lit(0.5);
            let mid = p.lo + half;
            for i in 0..GL_ORDER {
                for c in 0..self.dim {
                    buf[c] = p.values[c * GL_ORDER + i];
                }
                visit(mid + half * T::lit(GL_NODES[i]), half * T::lit(GL_WEIGHTS[i]), &buf);
            }
        }
    }
}

/// `x = lo + (hi - lo)(1 - cos θ)/2` for `θ ∈ [0, π]`, returning `(x, dx/dθ)`.
///
/// Square-root behaviour at either end of `[lo, hi]` becomes linear in θ.
pub fn cosine_map<T: Real>(lo: T, hi: T, theta: T) -> (T, T) {
    let half = (hi - lo) * T::lit(0.5);
    (lo + half * (T::one() - theta.cos()), half * theta.sin())
}

/// Inverse of [`cosine_map`].
pub fn cosine_unmap<T: Real>(lo: T, hi: T, x: T) -> T {
    let s = T::one() - (x - lo) / ((hi - lo) * T::lit(0.5));
    s.max(-T::one()).min(T::one()).acos()
}
