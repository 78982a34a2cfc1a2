use thiserror::Error;

use crate::geometry::ValidityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (shape, length, symmetry, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The surface slope is unbounded at the round leading edge.
    #[error("derivative is singular at the leading edge (l = 0)")]
    LeadingEdgeSingularity,

    #[error("ill-posed least-squares fit: numerical rank {rank} < {columns} unknowns")]
    IllPosedFit { rank: usize, columns: usize },

    #[error("constraint matrix at l_int = {ell_int} is ill-conditioned (cond ~ {condition:.3e})")]
    Conditioning { ell_int: f64, condition: f64 },

    #[error("degenerate interval for coordinate {index}: center is zero")]
    DegenerateInterval { index: usize },

    #[error("coordinate {label} = {value} lies outside [{lower}, {upper}]")]
    OutOfRange {
        label: String,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("all {skipped} bootstrap replicates had rank-deficient designs")]
    BootstrapExhausted { skipped: usize },

    #[error("no eigenvalue rises above the floor; no active structure to select")]
    NoStructure,

    #[error("odd-polynomial expansion requires class exponents r1 = 1/2, r2 = 1 (got {r1}, {r2})")]
    UnsupportedExpansion { r1: f64, r2: f64 },

    #[error("shape is not a valid airfoil (min gap {:.3e})", .0.min_gap)]
    Infeasible(Box<ValidityReport>),

    #[error("evaluation of sample {index} failed: {message}")]
    Evaluation { index: usize, message: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate design conflicts with line {first_line}")]
    DuplicateConflict { line: usize, first_line: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Contract(_) => "contract",
            Error::Domain(_) => "domain",
            Error::LeadingEdgeSingularity => "singularity",
            Error::IllPosedFit { .. } => "ill_posed_fit",
            Error::Conditioning { .. } => "conditioning",
            Error::DegenerateInterval { .. } => "degenerate_interval",
            Error::OutOfRange { .. } => "out_of_range",
            Error::BootstrapExhausted { .. } => "bootstrap_exhausted",
            Error::NoStructure => "no_structure",
            Error::UnsupportedExpansion { .. } => "unsupported_expansion",
            Error::Infeasible(_) => "infeasible",
            Error::Evaluation { .. } => "evaluation",
            Error::Parse { .. } => "parse",
            Error::DuplicateConflict { .. } => "duplicate_conflict",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
