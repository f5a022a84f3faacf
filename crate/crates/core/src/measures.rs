//! Finitely supported probability measures with exact weights.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{binomial, format_rational, parse_rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T> {
    pub x: T,
    pub p: T,
}

/// Probability measure `Σ p_i δ_{x_i}`.
///
/// Locations are strictly increasing, weights are positive and sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T> {
    atoms: Vec<Atom<T>>,
}

/// Closed interval `[lo, hi]`, the convex hull of a support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> SupportInterval<T> {
    pub fn length(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.lo <= *t && *t <= self.hi
    }
}

impl<T: Scalar> AtomicMeasure<T> {
    /// Builds a measure from `(location, weight)` pairs.
    ///
    /// Duplicate locations are merged, weights normalized to total mass one
    /// and atoms sorted by location.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, T)>,
    {
        let mut atoms: Vec<Atom<T>> = Vec::new();
        for (x, p) in pairs {
            if !(p > T::zero()) {
                return Err(Error::InvalidMeasure(format!(
                    "weight {p} at location {x} is not positive"
                )));
            }
            if x.partial_cmp(&x).is_none() {
                return Err(Error::InvalidMeasure(format!("location {x} is not comparable")));
            }
            atoms.push(Atom { x, p });
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("checked comparable"));
        let mut merged: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.x == atom.x => last.p = last.p.clone() + atom.p,
                _ => merged.push(atom),
            }
        }
        let total = merged
            .iter()
            .fold(T::zero(), |acc, a| acc + a.p.clone());
        for a in &mut merged {
            a.p = a.p.clone() / total.clone();
        }
        Ok(AtomicMeasure { atoms: merged })
    }

    /// Point mass at `c`.
    pub fn dirac(c: T) -> Self {
        AtomicMeasure {
            atoms: vec![Atom { x: c, p: T::one() }],
        }
    }

    /// Symmetric Bernoulli measure `(δ_{-1} + δ_1)/2`.
    pub fn bernoulli() -> Self {
        Self::new([(-T::one(), T::one()), (T::one(), T::one())]).expect("valid")
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// A single atom; such measures have zero variance.
    pub fn is_degenerate(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn support(&self) -> SupportInterval<T> {
        SupportInterval {
            lo: self.atoms[0].x.clone(),
            hi: self.atoms[self.atoms.len() - 1].x.clone(),
        }
    }

    /// `m_k = Σ p_i x_i^k`.
    pub fn moment(&self, k: usize) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, a| acc + a.p.clone() * a.x.powu(k))
    }

    /// `[m_0, m_1, ..., m_n]`.
    pub fn moments(&self, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n + 1];
        for a in &self.atoms {
            let mut pw = a.p.clone();
            for slot in out.iter_mut() {
                *slot = slot.clone() + pw.clone();
                pw = pw * a.x.clone();
            }
        }
        out
    }

    pub fn mean(&self) -> T {
        self.moment(1)
    }

    pub fn variance(&self) -> T {
        let m1 = self.moment(1);
        self.moment(2) - m1.clone() * m1
    }

    /// Push-forward under `t ↦ a t`. `a = 0` collapses to `δ_0`.
    pub fn scale(&self, a: &T) -> Self {
        Self::new(self.atoms.iter().map(|at| (a.clone() * at.x.clone(), at.p.clone())))
            .expect("scaling preserves validity")
    }

    /// Push-forward under `t ↦ t + c`.
    pub fn translate(&self, c: &T) -> Self {
        AtomicMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|at| Atom {
                    x: at.x.clone() + c.clone(),
                    p: at.p.clone(),
                })
                .collect(),
        }
    }

    /// Classical convolution `μ * ν`: atoms at pairwise sums.
    pub fn classical_convolve(&self, other: &Self) -> Self {
        let pairs = self.atoms.iter().flat_map(|a| {
            other
                .atoms
                .iter()
                .map(move |b| (a.x.clone() + b.x.clone(), a.p.clone() * b.p.clone()))
        });
        Self::new(pairs).expect("products of positive weights are positive")
    }

    /// `∫ p dμ` for a polynomial `p`.
    pub fn expectation_poly(&self, p: &Polynomial<T>) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, a| acc + a.p.clone() * p.eval(&a.x))
    }

    /// `∫ f dμ` for an arbitrary function.
    pub fn expectation<F: Fn(&T) -> T>(&self, f: F) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |acc, a| acc + a.p.clone() * f(&a.x))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AtomicMeasure<U> {
        AtomicMeasure::new(self.atoms.iter().map(|a| (f(&a.x), f(&a.p))))
            .expect("mapped measure valid")
    }
}

/// Binomial expansion of `m_n(μ * ν)` from the moments of the factors.
pub fn classical_moment_from_factors<T: Scalar>(mu: &[T], nu: &[T], n: usize) -> T {
    (0..=n).fold(T::zero(), |acc, k| {
        acc + T::from_bigint(&binomial(n as u64, k as u64)) * mu[k].clone() * nu[n - k].clone()
    })
}

impl<T: Scalar> fmt::Display for AtomicMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|a| format!("{}:{}", a.x, a.p)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    x: RationalText,
    p: RationalText,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureRecord {
    atoms: Vec<AtomRecord>,
}

/// Rational as it appears in JSON: a `"p/q"` string, or a bare integer.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    fn parse(&self) -> Result<BigRational> {
        match self {
            RationalText::Text(s) => {
                parse_rational(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))
            }
            RationalText::Int(n) => Ok(BigRational::from_integer((*n).into())),
        }
    }
}

impl AtomicMeasure<BigRational> {
    /// Parses `{"atoms":[{"x":"-1","p":"1/2"}, ...]}`.
    ///
    /// Unlike [`AtomicMeasure::new`] this does not normalize: the weights must
    /// already sum to exactly one.
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: MeasureRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut pairs = Vec::with_capacity(rec.atoms.len());
        let mut total = BigRational::from_integer(0.into());
        for a in &rec.atoms {
            let x = a.x.parse()?;
            let p = a.p.parse()?;
            total += p.clone();
            pairs.push((x, p));
        }
        if !pairs.is_empty() && total != BigRational::from_integer(1.into()) {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}, expected 1",
                format_rational(&total)
            )));
        }
        Self::new(pairs)
    }

    pub fn to_json(&self) -> String {
        let rec = MeasureRecord {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomRecord {
                    x: RationalText::Text(format_rational(&a.x)),
                    p: RationalText::Text(format_rational(&a.p)),
                })
                .collect(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }
}
