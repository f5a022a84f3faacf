use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("series not invertible: {0}")]
    NotInvertible(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("repeated node {0}: divided differences on confluent nodes need dd_power")]
    RepeatedNode(String),

    #[error("zero denominator in term {term} of terminating hypergeometric sum")]
    ZeroDenominator { term: usize },

    #[error("order {requested} exceeds the enumeration limit {limit}")]
    OrderTooLarge { requested: usize, limit: usize },

    #[error("eigenvalue iteration did not converge for a {dim}x{dim} matrix after {iterations} iterations (unreduced block {active})")]
    EigenNonConvergence {
        dim: usize,
        iterations: usize,
        active: usize,
    },

    #[error("quadrature did not converge: best estimate {estimate:e}, gap {gap:e}")]
    QuadratureNonConvergence { estimate: f64, gap: f64 },

    #[error("scaling factor must be nonzero")]
    ZeroScale,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
