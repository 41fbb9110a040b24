use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the analyses.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// failing computation ran in.
#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Error {
    #[error("grid too coarse: {n} nodes, at least {min} required")]
    GridTooCoarse { n: usize, min: usize },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("alpha must be positive, got {0}")]
    InvalidAlpha(f64),

    #[error("profile length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("V' does not vanish at the walls: |V'(A1)| = {left:e}, |V'(A2)| = {right:e}, tolerance {tol:e}")]
    BoundaryConditionViolation { left: f64, right: f64, tol: f64 },

    #[error("singular linear system ({0})")]
    SingularSystem(String),

    #[error("spectral data does not describe a real field (asymmetry {asymmetry:e})")]
    NonRealField { asymmetry: f64 },

    #[error("field has non-zero mean ({mean:e})")]
    NonZeroMean { mean: f64 },

    #[error("no inflection point to test")]
    NoInflectionPoint,

    #[error("wavenumber must be positive, got {0}")]
    InvalidWavenumber(f64),

    #[error("eigensolver failed: {0}")]
    EigenSolver(String),

    #[error("steady state has no functional relation phi = F(omega): residual {residual:e} exceeds {threshold:e}")]
    AssumptionViolated { residual: f64, threshold: f64 },

    #[error("U'' vanishes identically; F' is undefined everywhere")]
    AllSingular,

    #[error("analytic ({analytic}) and numerical ({numeric}) minimum eigenvalues disagree")]
    DiscretizationMismatch { analytic: f64, numeric: f64 },

    #[error("no nontrivial solution: residual {residual:e}")]
    NoNontrivialSolution { residual: f64 },

    #[error("time step {dt} exceeds the CFL limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("non-finite values encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
