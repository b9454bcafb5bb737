//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("eigenvalue iteration failed to converge for a {dim}x{dim} matrix")]
    EigenConvergence { dim: usize },

    #[error("matrix is singular to tolerance: min |eigenvalue| {min_abs:.3e} < {tol:.3e}")]
    Singular { min_abs: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e} < -{tol:.3e}")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("not an effect: eigenvalue {eig:.6e} outside [0, 1] beyond the clamp tolerance")]
    NotEffect { eig: f64 },

    #[error("effect is not strictly positive: min eigenvalue {min_eig:.3e} < {tol:.3e}")]
    NotStrictlyPositive { min_eig: f64, tol: f64 },

    #[error("Moebius parameter must satisfy p < 1 (got p = {p})")]
    InvalidMoebiusParam { p: f64 },

    #[error("scalar {x} outside the domain [0, {sup}) of f_p for p = {p}")]
    ScalarOutsideDomain { x: f64, p: f64, sup: f64 },

    #[error(
        "spectrum outside the domain of f_p for p = {p}: eigenvalue {eig:.6e} violates [0, {bound:.6e}]"
    )]
    SpectrumOutsideDomain { eig: f64, p: f64, bound: f64 },

    #[error("positive real expected (got {value})")]
    NotPositiveReal { value: f64 },

    #[error("lambda = {lambda} too small; construction requires lambda > max(1, ||S||^2) = {bound}")]
    LambdaTooSmall { lambda: f64, bound: f64 },

    #[error("negative Moebius parameter required (got p = {p})")]
    ParameterNotNegative { p: f64 },

    #[error("contraction required: operator norm {norm} exceeds 1")]
    NormExceedsOne { norm: f64 },

    #[error("r must lie in (0, 1) (got r = {r})")]
    InvalidAltRatio { r: f64 },

    #[error("rank deficiency {rank_deficiency} must be < dim {dim}")]
    RankDeficiencyTooLarge { rank_deficiency: usize, dim: usize },

    #[error(
        "boundary sequence did not converge within n_max = {n_max}: last iterate delta {last_delta:.3e}"
    )]
    BoundaryNonConvergence { n_max: u64, last_delta: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid serialized value: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
