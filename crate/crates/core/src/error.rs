//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// The interpolation system for a stencil mask is singular (or nearly so)
    /// at the requested CFL number. Carries the offending c.
    #[error("singular interpolation system for mask {mask} at c = {cfl} (condition number {cond:.3e})")]
    SingularCfl { mask: String, cfl: f64, cond: f64 },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("scheme {scheme} does not support Dirichlet boundaries: {reason}")]
    UnsupportedBoundary { scheme: String, reason: String },

    #[error("Fourier symbol is singular at beta = {beta}: |det A| = {det_a:.3e}")]
    SingularSymbol { beta: f64, det_a: f64 },

    #[error("junction reconstruction is singular at c = {cfl} (requires |c - 1| > {tol:.1e})")]
    SingularCoupling { cfl: f64, tol: f64 },

    #[error("network validation failed:\n  {}", .0.join("\n  "))]
    InvalidNetwork(Vec<String>),

    #[error("state layout mismatch: {0}")]
    LayoutMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
