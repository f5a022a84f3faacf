//! Classical versus free additive convolution of finitely supported
//! probability measures, and the convolution comparison measure `m̃_{μ,ν}`.
//!
//! Exact quantities are computed over [`Rational`] by combinatorial formulas;
//! the same quantities are recomputed from eigenvalue densities and
//! quadrature in [`spectral`] and [`ccm`] so every identity has two
//! independent routes.
//!
//! Most of the exact code is generic over [`Scalar`]; the aliases below fix
//! the scalar to exact rationals, which is what the identities need.

pub mod ccm;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod momentcalc;
pub mod poly;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod specialfn;
pub mod spectral;

pub use ccm::{BivariatePolynomial, CcmDensity, CcmMoments};
pub use error::{Error, Result};
pub use measures::{Atom, AtomicMeasure, SupportInterval};
pub use momentcalc::{CompositionTable, CumulantVector, FormalSeries, MomentVector};
pub use poly::Polynomial;
pub use scalar::{Real, Scalar};
pub use specialfn::NodeList;
pub use spectral::{DensityGrid, HermitianMatrix, MeasureEmbedding, OmegaPair, Spacing};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Measure = AtomicMeasure<Rational>;
pub type Series = FormalSeries<Rational>;
pub type Moments = MomentVector<Rational>;
pub type Cumulants = CumulantVector<Rational>;
pub type RationalPolynomial = Polynomial<Rational>;
