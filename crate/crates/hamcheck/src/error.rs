//! Error types shared across the symbolic and numeric layers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum JetError {
    #[error("cyclic substitution: replacement for {var} involves {var}")]
    CyclicSubstitution { var: String },
}

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("operator is not skew-symmetric; P + P* = {defect}")]
    NotSkew { defect: String },
    #[error("dimension mismatch: operator has {op_dim} independent variable(s), domain has {domain_dim}")]
    DimensionMismatch { op_dim: usize, domain_dim: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid size {n} is not a power of two >= 16")]
    BadGridSize { n: usize },
    #[error("non-finite value in grid data")]
    NonFinite,
    #[error("solution blew up at t = {t_last:.6}")]
    BlowUp { t_last: f64 },
    #[error("density involves {dim} independent variables; grid evaluation supports 1")]
    UnsupportedDimension { dim: usize },
    #[error("no grid binding for dependent variable {name}")]
    MissingBinding { name: String },
}

#[derive(Debug, Error)]
pub enum FindimError {
    #[error("implicit midpoint solve failed to converge at step {step} (residual {residual:.3e})")]
    NoConvergence { step: usize, residual: f64 },
    #[error("principal moments of inertia must be positive")]
    NonPositiveInertia,
}
