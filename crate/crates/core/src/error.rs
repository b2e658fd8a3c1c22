use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ambient dimension {0} is not supported (at most {max})", max = crate::polytope::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("division by zero: negative exponent evaluated at a zero coordinate")]
    DivisionByZero,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("lifting is not generic: {0}")]
    DegenerateLifting(String),

    #[error("shift vector is not generic: lattice point {0:?} lies on a cell wall")]
    DeltaNotGeneric(Vec<i64>),

    #[error("mixed volume is zero; no finite torus root count is certified")]
    ZeroMixedVolume,

    #[error("block M11 is singular; the system is not generic enough for this lifting")]
    SingularM11,

    #[error("could not recover coordinate x{0} from the eigenvectors")]
    CoordinateRecoveryFailed(usize),

    #[error("eigenvalue iteration did not converge after {iterations} iterations ({} eigenvalues found)", partial.len())]
    NoConvergence {
        iterations: usize,
        partial: Vec<num_complex::Complex64>,
    },

    #[error("quotient dimension is unstable: {0}")]
    DimensionUnstable(String),

    #[error("multiplication maps do not commute")]
    NonCommuting,

    #[error("polynomial {index} has support outside the prescribed polytope")]
    SupportEscapes { index: usize },
}
