use crate::solver::EigenvalueHit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("matrix is not Hermitian: relative defect {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive definite (pivot {index})")]
    NotPositiveDefinite { index: usize },
    #[error("factorization has a zero pivot block; the matrix is singular")]
    SingularFactor,
    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("λ = {lambda} lies within the guard of the lower-right spectrum (nearest eigenvalue {nearest})")]
    InsideT22Spectrum { lambda: f64, nearest: f64 },
    #[error("D(λ) at λ = {lambda} is ill-conditioned (pivot ratio {ratio:e})")]
    IllConditioned { lambda: f64, ratio: f64 },
    #[error("endpoints {lo} and {hi} lie in different spectral gaps")]
    GapMismatch { lo: f64, hi: f64 },
    #[error("bisection budget of {budget} steps exhausted ({} hits found so far)", partial.len())]
    BisectionBudgetExceeded {
        budget: usize,
        partial: Vec<EigenvalueHit>,
    },
    #[error("lower-right block is not uniformly negative at λ = {lambda}")]
    NegativityViolated { lambda: f64 },
    #[error("negative-type hypothesis fails near λ = {lambda}")]
    TypeViolation { lambda: f64 },
    #[error("form {form} is not admissible for the {basis} basis")]
    IncompatibleForm {
        form: &'static str,
        basis: &'static str,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shooting roots moved by {shift:e} under step halving (tolerance {tol:e})")]
    StepTooCoarse { shift: f64, tol: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
