use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Node placement along each axis of a [`DensityGrid`]; both include the
/// box edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Spacing {
    /// Equally spaced; integrated with the trapezoid rule.
    #[default]
    Uniform,
    /// `lo + (hi - lo)(1 - cos(πi/(n-1)))/2`; integrated with the
    /// Clenshaw–Curtis rule, which tolerates square-root edges.
    Cosine,
}

/// Samples of a non-negative density on an `na × nb` grid. `values[i * nb + j]`
/// sits at `(a_i, b_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid<T> {
    pub a_lo: T,
    pub a_hi: T,
    pub b_lo: T,
    pub b_hi: T,
    na: usize,
    nb: usize,
    spacing: Spacing,
    values: Vec<T>,
}

impl<T: Real> DensityGrid<T> {
    /// A uniform grid.
    pub fn new(a_lo: T, a_hi: T, b_lo: T, b_hi: T, na: usize, nb: usize, values: Vec<T>) -> Result<Self> {
        Self::with_spacing(a_lo, a_hi, b_lo, b_hi, na, nb, Spacing::Uniform, values)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_spacing(
        a_lo: T,
        a_hi: T,
        b_lo: T,
        b_hi: T,
        na: usize,
        nb: usize,
        spacing: Spacing,
        values: Vec<T>,
    ) -> Result<Self> {
        if na < 2 || nb < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2x2 points, got {na}x{nb}")));
        }
        if values.len() != na * nb {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {na}x{nb} grid",
                values.len()
            )));
        }
        if ![a_lo, a_hi, b_lo, b_hi].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("grid box must be finite".into()));
        }
        if values.iter().any(|v| !(*v >= T::zero())) {
            return Err(Error::InvalidArgument("density values must be non-negative".into()));
        }
        Ok(DensityGrid {
            a_lo,
            a_hi,
            b_lo,
            b_hi,
            na,
            nb,
            spacing,
            values,
        })
    }

    /// Evaluates `f` at every point of a uniform grid, rows in parallel.
    /// Values are clamped at zero to absorb rounding below it.
    pub fn sample<F>(a_lo: T, a_hi: T, b_lo: T, b_hi: T, na: usize, nb: usize, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> Result<T> + Sync,
    {
        let boxed = ((a_lo, a_hi), (b_lo, b_hi));
        Self::sample_indexed(boxed, (na, nb), Spacing::Uniform, |_, _, a, b| f(a, b))
    }

    /// As [`DensityGrid::sample`] for any spacing; `f(i, j, a_i, b_j)`.
    pub fn sample_indexed<F>(boxed: ((T, T), (T, T)), (na, nb): (usize, usize), spacing: Spacing, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, T, T) -> Result<T> + Sync,
    {
        let ((a_lo, a_hi), (b_lo, b_hi)) = boxed;
        if na < 2 || nb < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2x2 points, got {na}x{nb}")));
        }
        let values = super::par_rows(na, nb, |i, j| {
            let v = f(i, j, coord(spacing, a_lo, a_hi, na, i), coord(spacing, b_lo, b_hi, nb, j))?;
            Ok(v.max(T::zero()))
        })?;
        Self::with_spacing(a_lo, a_hi, b_lo, b_hi, na, nb, spacing, values)
    }

    pub fn na(&self) -> usize {
        self.na
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn a(&self, i: usize) -> T {
        coord(self.spacing, self.a_lo, self.a_hi, self.na, i)
    }

    pub fn b(&self, j: usize) -> T {
        coord(self.spacing, self.b_lo, self.b_hi, self.nb, j)
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.nb + j]
    }

    /// `∫∫ density` over the box by the tensor rule matching the spacing.
    pub fn integral(&self) -> T {
        self.moment(0, 0)
    }

    /// `∫∫ a^k b^l density` by the tensor rule matching the spacing.
    pub fn moment(&self, k: usize, l: usize) -> T {
        let wa = weights(self.spacing, self.a_lo, self.a_hi, self.na);
        let wb = weights(self.spacing, self.b_lo, self.b_hi, self.nb);
        let mut acc = T::zero();
        for (i, wi) in wa.iter().enumerate() {
            let ai = *wi * self.a(i).powi(k as i32);
            for (j, wj) in wb.iter().enumerate() {
                acc = acc + ai * *wj * self.b(j).powi(l as i32) * self.value(i, j);
            }
        }
        acc
    }

    /// CSV with the given three column names, b varying fastest, 17
    /// significant digits.
    pub fn to_csv(&self, header: [&str; 3]) -> String {
        let mut out = String::with_capacity(64 * self.values.len());
        let _ = writeln!(out, "{},{},{}", header[0], header[1], header[2]);
        for i in 0..self.na {
            for j in 0..self.nb {
                let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", self.a(i), self.b(j), self.value(i, j));
            }
        }
        out
    }

    /// Inverse of [`DensityGrid::to_csv`]; returns the header names too. The
    /// spacing is recognized from the coordinates.
    pub fn from_csv(text: &str) -> Result<(Vec<String>, Self)> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        if header.len() != 3 {
            return Err(Error::Parse("expected three CSV columns".into()));
        }
        let mut rows: Vec<[T; 3]> = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 3 {
                return Err(Error::Parse(format!("row {}: expected 3 cells", n + 1)));
            }
            let mut row = [T::zero(); 3];
            for (slot, cell) in row.iter_mut().zip(cells) {
                let v: f64 = cell
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad number {cell:?}", n + 1)))?;
                *slot = T::lit(v);
            }
            rows.push(row);
        }
        let first_a = rows.first().ok_or_else(|| Error::Parse("no data rows".into()))?[0];
        let nb = rows.iter().take_while(|r| r[0] == first_a).count();
        if nb == 0 || rows.len() % nb != 0 {
            return Err(Error::Parse("rows do not form a rectangular grid".into()));
        }
        let na = rows.len() / nb;
        let last = rows[rows.len() - 1];
        let (a_lo, a_hi, b_lo, b_hi) = (first_a, last[0], rows[0][1], last[1]);
        let fits = |spacing: Spacing| {
            let close = |x: T, y: T, lo: T, hi: T| (x - y).abs() <= T::lit(1e-12) * (T::one() + (hi - lo).abs());
            (0..na).all(|i| close(rows[i * nb][0], coord(spacing, a_lo, a_hi, na, i), a_lo, a_hi))
                && (0..nb).all(|j| close(rows[j][1], coord(spacing, b_lo, b_hi, nb, j), b_lo, b_hi))
        };
        let spacing = [Spacing::Uniform, Spacing::Cosine]
            .into_iter()
            .find(|s| fits(*s))
            .ok_or_else(|| Error::Parse("grid coordinates are neither uniform nor cosine spaced".into()))?;
        let grid = Self::with_spacing(a_lo, a_hi, b_lo, b_hi, na, nb, spacing, rows.iter().map(|r| r[2]).collect())?;
        Ok((header, grid))
    }
}

pub(crate) fn coord<T: Real>(spacing: Spacing, lo: T, hi: T, n: usize, i: usize) -> T {
    if i + 1 == n {
        return hi;
    }
    let frac = T::from_usize(i) / T::from_usize(n - 1);
    match spacing {
        Spacing::Uniform => lo + (hi - lo) * frac,
        Spacing::Cosine => lo + (hi - lo) * (T::one() - (T::PI() * frac).cos()) * T::lit(0.5),
    }
}

/// Quadrature weights on `[lo, hi]` for the `n` nodes of `spacing`.
fn weights<T: Real>(spacing: Spacing, lo: T, hi: T, n: usize) -> Vec<T> {
    let m = n - 1;
    let h = (hi - lo) / T::from_usize(m);
    match spacing {
        Spacing::Uniform => (0..n)
            .map(|i| if i == 0 || i == m { h * T::lit(0.5) } else { h })
            .collect(),
        Spacing::Cosine => (0..n)
            .map(|i| {
                let theta = T::PI() * T::from_usize(i) / T::from_usize(m);
                let mut s = T::zero();
                for j in 1..=m / 2 {
                    let b = if 2 * j == m { T::one() } else { T::lit(2.0) };
                    let jj = T::from_usize(j);
                    s = s + b / (T::lit(4.0) * jj * jj - T::one()) * (T::lit(2.0) * jj * theta).cos();
                }
                let c = if i == 0 || i == m { T::one() } else { T::lit(2.0) };
                c / T::from_usize(m) * (T::one() - s) * (hi - lo) * T::lit(0.5)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_exact_for_bilinear() {
        let g = DensityGrid::sample(0.0, 2.0, -1.0, 1.0, 5, 7, |a: f64, b: f64| Ok(a * (b + 1.0))).unwrap();
        assert!((g.integral() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn cosine_grid_integrates_polynomials_and_square_root_edges() {
        let boxed = ((0.0, 2.0), (-1.0, 1.0));
        let g = DensityGrid::sample_indexed(boxed, (9, 8), Spacing::Cosine, |_, _, a: f64, b: f64| Ok(a.powi(7) * b * b))
            .unwrap();
        assert_eq!((g.a(0), g.a(8), g.b(0), g.b(7)), (0.0, 2.0, -1.0, 1.0));
        assert!((g.integral() - 32.0 * 2.0 / 3.0).abs() < 1e-12, "{}", g.integral());
        // semicircle area: square-root edges in both variables
        let disc = DensityGrid::sample_indexed(((-1.0, 1.0), (-1.0, 1.0)), (64, 64), Spacing::Cosine, |_, _, a: f64, b: f64| {
            Ok((1.0 - a * a).sqrt() * (1.0 - b * b).sqrt())
        })
        .unwrap();
        let want = (std::f64::consts::PI / 2.0).powi(2);
        assert!((disc.integral() - want).abs() < 1e-4);
    }

    #[test]
    fn csv_round_trip() {
        let g = DensityGrid::sample(-1.0, 1.0, 0.0, 1.0, 3, 4, |a: f64, b: f64| Ok((a * a + b).sqrt() / 7.0)).unwrap();
        let text = g.to_csv(["a", "b", "omega"]);
        assert!(text.starts_with("a,b,omega\n"));
        assert_eq!(text.lines().count(), 13);
        let (header, back) = DensityGrid::<f64>::from_csv(&text).unwrap();
        assert_eq!(header, ["a", "b", "omega"]);
        assert_eq!(back, g);
        let c = DensityGrid::sample_indexed(((-1.0, 1.0), (0.0, 1.0)), (5, 6), Spacing::Cosine, |_, _, a: f64, b: f64| {
            Ok(a * a + b)
        })
        .unwrap();
        let (_, back) = DensityGrid::<f64>::from_csv(&c.to_csv(["x", "y", "z"])).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(DensityGrid::new(0.0, 1.0, 0.0, 1.0, 1, 3, vec![0.0; 3]).is_err());
        assert!(DensityGrid::new(0.0, 1.0, 0.0, 1.0, 2, 2, vec![0.0, -1.0, 0.0, 0.0]).is_err());
        assert!(DensityGrid::new(0.0, f64::INFINITY, 0.0, 1.0, 2, 2, vec![0.0; 4]).is_err());
    }
}
