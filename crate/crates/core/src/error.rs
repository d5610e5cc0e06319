use thiserror::Error;

/// Errors raised by matrix construction, the spectral routines and the checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch, {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("matrix is not Hermitian: ||H - H*||_2 = {deviation:e} exceeds {allowed:e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("Gram matrix has eigenvalue {value:e} below the clamp threshold {threshold:e}")]
    NegativeEigenvalue { value: f64, threshold: f64 },

    #[error("{op}: operand `{which}` is the zero matrix, the angle is undefined")]
    ZeroOperand { op: &'static str, which: &'static str },

    #[error("{op}: expects a 2x2 matrix, got {rows}x{cols}")]
    Not2x2 {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{op}: operand `{which}` is not normal (||XX* - X*X||_2 = {defect:e})")]
    NotNormal {
        op: &'static str,
        which: &'static str,
        defect: f64,
    },

    #[error("unknown inequality id `{0}`")]
    UnknownId(String),

    #[error("inequality `{0}` has no ratio form with a sharp constant")]
    NoRatioForm(String),

    #[error("{op}: identity is degenerate ({reason})")]
    Degenerate {
        op: &'static str,
        reason: &'static str,
    },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
