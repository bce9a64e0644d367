use thiserror::Error;

/// Errors raised by the kernels, state builders and propagators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e}, tolerance {tolerance:.1e})")]
    Symmetry { asymmetry: f64, tolerance: f64 },

    #[error("linear system has no unique solution (condition estimate {condition:.3e})")]
    NoUniqueSolution { condition: f64 },

    #[error("unphysical covariance matrix: smallest symplectic eigenvalue {nu_minus:.12} < 1")]
    Unphysical { nu_minus: f64 },

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error(
        "propagation lost physicality at tau = {tau} (nu_minus = {nu_minus:.12}); use smaller tau steps"
    )]
    PropagationAccuracy { tau: f64, nu_minus: f64 },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
