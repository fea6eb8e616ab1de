use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A component array or operator breaks one of the curvature-tensor symmetries.
    #[error("{symmetry} violated by {residual:.3e} (tolerance {tol:.1e})")]
    Symmetry {
        symmetry: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("tensor is not Einstein: traceless Ricci residual {residual:.3e} exceeds {tol:.1e}")]
    NotEinstein { residual: f64, tol: f64 },

    #[error("Einstein constant must be positive, got {lambda}")]
    NonPositiveLambda { lambda: f64 },

    #[error("Berger constraint `{constraint}` violated by {excess:.3e}")]
    InvalidBerger {
        constraint: &'static str,
        excess: f64,
    },

    #[error("index {index} out of range (expected 0..4)")]
    IndexOutOfRange { index: usize },

    #[error("k = {k} out of range (expected 1..=6)")]
    KOutOfRange { k: usize },

    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("{problem}: no feasible point at grid resolution {resolution:.3e} ({evaluated} points evaluated)")]
    Infeasible {
        problem: String,
        resolution: f64,
        evaluated: u64,
    },

    #[error("invalid optimization problem: {0}")]
    InvalidProblem(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("conflicting values for R({indices}): {first} vs {second}")]
    ConflictingComponent {
        indices: String,
        first: f64,
        second: f64,
    },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
