use thiserror::Error;

/// Errors raised by the numerical routines and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {bound:.3e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds {bound:.3e}")]
    NotUnitary { residual: f64, bound: f64 },

    #[error("eigensolver failed (reconstruction residual {residual:.3e})")]
    EigenFailure { residual: f64 },

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dual gauge maximization did not converge (best lower bound {best:e})")]
    DualNotConverged { best: f64 },

    #[error("norm `{norm}` is not declared rotund; alignment requires a strictly convex norm")]
    NotRotund { norm: String },

    #[error("endpoints are antipodal (operator-norm gap {gap:e}); no unique short path")]
    Antipodal { gap: f64 },

    #[error("samples {index} and {} are {gap:e} apart in operator norm (must be < 2); refine the sampling", index + 1)]
    GapTooLarge { index: usize, gap: f64 },

    #[error("invalid norm selector `{selector}`: {reason}")]
    NormSelector { selector: String, reason: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
