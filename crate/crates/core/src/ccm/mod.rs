//! The convolution comparison measure `m̃_{μ,ν}`: its moments by exact
//! routes, its density `w_{μ,ν}`, and the functionals both are built from.

mod density;
mod exact;

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::SupportInterval;
use crate::poly::Polynomial;
use crate::scalar::{binomial, format_rational, parse_rational, Scalar};

pub use density::{
    ccm_density_grid, ccm_moments_spectral, gegenbauer_kernel_inner_product, gegenbauer_kernel_table,
    i_functional_spectral, i_functional_spectral_table, w_density, CcmDensity,
};
pub use exact::{
    apply_ccm_to_shifted_poly, ccm_moment_series, ccm_moment_via_cumulant_difference, convolution_gap,
    i_functional, i_functional_table, leading_order_functional,
};

/// `Σ c_{i,j} x^i y^j` with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePolynomial<T> {
    coeffs: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> BivariatePolynomial<T> {
    pub fn zero() -> Self {
        BivariatePolynomial { coeffs: BTreeMap::new() }
    }

    /// `c x^i y^j`
    pub fn monomial(c: T, i: usize, j: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// `q(a x + b y)`, expanded binomially.
    pub fn from_affine(q: &Polynomial<T>, a: &T, b: &T) -> Self {
        let mut p = Self::zero();
        for (n, c) in q.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..=n {
                let coeff = c.clone()
                    * T::from_bigint(&binomial(n as u64, i as u64))
                    * a.powu(i)
                    * b.powu(n - i);
                p.add_term(i, n - i, coeff);
            }
        }
        p
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: T) {
        let entry = self.coeffs.entry((i, j)).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms `((i, j), c_{i,j})` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.coeffs.iter()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|(i, j)| i + j).max()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, ((i, j), c)| acc + c.clone() * x.powu(*i) * y.powu(*j))
    }
}

/// `m̃_{μ,ν}(t_μ^i t_ν^j)` for `0 ≤ i, j ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CcmMoments<T> {
    order: usize,
    // entries[i][j]
    entries: Vec<Vec<T>>,
}

impl<T: Scalar> CcmMoments<T> {
    pub fn from_entries(entries: Vec<Vec<T>>) -> Result<Self> {
        let order = entries.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty table".into()))?;
        if entries.iter().any(|row| row.len() != order + 1) {
            return Err(Error::InvalidArgument("moment table must be square".into()));
        }
        Ok(CcmMoments { order, entries })
    }

    /// Exact table from the Gegenbauer series route.
    pub fn series(mu: &crate::AtomicMeasure<T>, nu: &crate::AtomicMeasure<T>, order: usize) -> Self {
        if mu.is_degenerate() || nu.is_degenerate() {
            return Self::zeros(order);
        }
        let i_mu = i_functional_table(mu, order);
        let i_nu = i_functional_table(nu, order);
        let entries = (0..=order)
            .map(|i| (0..=order).map(|j| exact::series_entry(&i_mu, &i_nu, i, j)).collect())
            .collect();
        CcmMoments { order, entries }
    }

    /// Exact table from the cumulant-difference route.
    pub fn via_cumulants(mu: &crate::AtomicMeasure<T>, nu: &crate::AtomicMeasure<T>, order: usize) -> Self {
        let k_mu = exact::cumulant_composition_table(mu, order + 2);
        let k_nu = exact::cumulant_composition_table(nu, order + 2);
        let entries = (0..=order)
            .map(|i| (0..=order).map(|j| exact::cumulant_difference_entry(&k_mu, &k_nu, i, j)).collect())
            .collect();
        CcmMoments { order, entries }
    }

    pub fn zeros(order: usize) -> Self {
        CcmMoments {
            order,
            entries: vec![vec![T::zero(); order + 1]; order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i][j].clone()
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }

    /// `m̃(p)`; every monomial of `p` must lie inside the table.
    pub fn apply(&self, p: &BivariatePolynomial<T>) -> Result<T> {
        let mut acc = T::zero();
        for (&(i, j), c) in p.terms() {
            if i > self.order || j > self.order {
                return Err(Error::IndexOutOfRange(format!(
                    "monomial x^{i} y^{j} beyond table order {}",
                    self.order
                )));
            }
            acc = acc + c.clone() * self.entries[i][j].clone();
        }
        Ok(acc)
    }

    /// Whether the table is consistent with a positive measure on
    /// `box_mu × box_nu`: the moment matrix on monomials of degree `≤ degree`
    /// and the localizing matrices of `(t - lo)(hi - t)` in each variable on
    /// monomials of degree `≤ degree - 1` are positive semidefinite.
    pub fn is_positive_on(&self, box_mu: &SupportInterval<T>, box_nu: &SupportInterval<T>, degree: usize) -> Result<bool> {
        if 2 * degree > self.order {
            return Err(Error::IndexOutOfRange(format!(
                "degree {degree} needs a table of order {}, have {}",
                2 * degree,
                self.order
            )));
        }
        let monomials = |d: usize| -> Vec<(usize, usize)> {
            (0..=d).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect()
        };
        let moment = |i: usize, j: usize| self.entries[i][j].clone();
        let base = monomials(degree);
        let gram: Vec<Vec<T>> = base
            .iter()
            .map(|&(i1, j1)| base.iter().map(|&(i2, j2)| moment(i1 + i2, j1 + j2)).collect())
            .collect();
        if !crate::linalg::is_positive_semidefinite(&gram) {
            return Ok(false);
        }
        if degree == 0 {
            return Ok(true);
        }
        let local = monomials(degree - 1);
        for (axis, iv) in [(0, box_mu), (1, box_nu)] {
            // (t - lo)(hi - t) = -t^2 + (lo + hi) t - lo hi
            let (s, p) = (iv.lo.clone() + iv.hi.clone(), iv.lo.clone() * iv.hi.clone());
            let shifted = |i: usize, j: usize, e: usize| if axis == 0 { moment(i + e, j) } else { moment(i, j + e) };
            let mat: Vec<Vec<T>> = local
                .iter()
                .map(|&(i1, j1)| {
                    local
                        .iter()
                        .map(|&(i2, j2)| {
                            let (i, j) = (i1 + i2, j1 + j2);
                            -shifted(i, j, 2) + s.clone() * shifted(i, j, 1) - p.clone() * shifted(i, j, 0)
                        })
                        .collect()
                })
                .collect();
            if !crate::linalg::is_positive_semidefinite(&mat) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    nmu: usize,
    nnu: usize,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRecord {
    order: usize,
    entries: Vec<EntryRecord>,
}

impl CcmMoments<BigRational> {
    /// `{"order":N,"entries":[{"nmu":i,"nnu":j,"value":"p/q"}, ...]}`, with
    /// `i` varying slowest.
    pub fn to_json(&self) -> String {
        let rec = TableRecord {
            order: self.order,
            entries: (0..=self.order)
                .flat_map(|i| (0..=self.order).map(move |j| (i, j)))
                .map(|(i, j)| EntryRecord {
                    nmu: i,
                    nnu: j,
                    value: format_rational(&self.entries[i][j]),
                })
                .collect(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: TableRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = rec.order;
        let mut entries: Vec<Vec<Option<BigRational>>> = vec![vec![None; n + 1]; n + 1];
        for e in rec.entries {
            if e.nmu > n || e.nnu > n {
                return Err(Error::Parse(format!("entry ({}, {}) beyond order {n}", e.nmu, e.nnu)));
            }
            let v = parse_rational(&e.value).ok_or_else(|| Error::Parse(format!("not a rational: {:?}", e.value)))?;
            entries[e.nmu][e.nnu] = Some(v);
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, v)| v.ok_or_else(|| Error::Parse(format!("missing entry ({i}, {j})"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Measure, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn affine_expansion() {
        // (2x - y)^2 = 4x^2 - 4xy + y^2
        let p = BivariatePolynomial::from_affine(&Polynomial::monomial(2), &q(2, 1), &q(-1, 1));
        assert_eq!(p.coeff(2, 0), q(4, 1));
        assert_eq!(p.coeff(1, 1), q(-4, 1));
        assert_eq!(p.coeff(0, 2), q(1, 1));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&q(1, 1), &q(3, 1)), q(1, 1));
    }

    #[test]
    fn bernoulli_table_and_json() {
        let b = Measure::bernoulli();
        let t = CcmMoments::series(&b, &b, 2);
        assert_eq!(t.get(0, 0), q(1, 12));
        assert_eq!(t.get(2, 0), q(1, 60));
        let text = t.to_json();
        assert!(text.starts_with(r#"{"order":2,"entries":[{"nmu":0,"nnu":0,"value":"1/12"}"#));
        assert_eq!(CcmMoments::from_json(&text).unwrap(), t);
        assert!(CcmMoments::from_json(r#"{"order":1,"entries":[]}"#).is_err());
    }

    #[test]
    fn apply_rejects_monomials_outside_table() {
        let b = Measure::bernoulli();
        let t = CcmMoments::series(&b, &b, 1);
        assert!(t.apply(&BivariatePolynomial::monomial(q(1, 1), 2, 0)).is_err());
        assert_eq!(t.apply(&BivariatePolynomial::monomial(q(12, 1), 0, 0)).unwrap(), q(1, 1));
    }

    #[test]
    fn positivity_of_bernoulli_table() {
        let b = Measure::bernoulli();
        let t = CcmMoments::series(&b, &b, 6);
        assert!(t.is_positive_on(&b.support(), &b.support(), 3).unwrap());
        // a box too small to hold the measure fails the localizing test
        let tight = SupportInterval { lo: q(-1, 2), hi: q(1, 2) };
        assert!(!t.is_positive_on(&tight, &tight, 3).unwrap());
    }
}
