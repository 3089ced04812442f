use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("overlapping pieces with different values on [{lo}, {hi})")]
    OverlapConflict { lo: String, hi: String },

    #[error("degenerate interval [{lo}, {hi})")]
    DegenerateInterval { lo: String, hi: String },

    #[error("length mismatch: {coeffs} coefficients for {fns} functions")]
    LengthMismatch { coeffs: usize, fns: usize },

    #[error("scale must be positive, got {0}")]
    NonpositiveScale(String),

    #[error("exact comparison requested on an inexact operand")]
    InexactOperand,

    #[error("lattice mismatch: b = {0} vs b = {1}")]
    LatticeMismatch(String, String),

    #[error("space carries no generator list")]
    MissingGenerators,

    #[error("generator fiber changes direction inside cell [{lo}, {hi}) (mixed modulation)")]
    VaryingFiber { lo: String, hi: String },

    #[error("unsupported support: {0}")]
    UnsupportedSupport(String),

    #[error("unbounded scale range: {0}")]
    UnboundedScaleRange(String),

    #[error("duplicate element (j = {j}, k = {k})")]
    DuplicateElements { j: i32, k: i64 },

    #[error("all coefficients are zero")]
    DegenerateCoefficients,

    #[error("window too large: {count} subsets exceeds the limit of {limit}")]
    WindowTooLarge { count: u128, limit: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
