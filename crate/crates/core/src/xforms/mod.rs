//! Analytic transforms: Cauchy, shifted Boolean and ψ-transforms of input
//! laws, the subordination fixed point for `W = X + f(X) Y f(X)`, series
//! routes, density recovery and contour moments.

pub mod density;
pub mod law;
pub mod moments;
pub mod resolvent;
pub mod series;
pub mod solver;

pub use density::{stieltjes_density, DensityGrid, DensityOptions};
pub use law::{Law, PreparedLaw};
pub use moments::contour_moments;
pub use resolvent::{cauchy_divdiff, eta_tilde_resolvent, perturbed_cauchy, psi_resolvent, t_moments, PolyFn};
pub use series::{delta_series, multiplicative_coefficients, multiplicative_series, r_series, sigma_series, DeltaSeries};
pub use solver::{cauchy_w, convolve_additive, convolve_multiplicative, solve_delta, SolveOptions, SubordinationState};

use thiserror::Error;

use crate::alg::AlgError;
use crate::combinat::CombinatError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XformError {
    #[error("z = {re}{im:+}i is too close to the support for the requested accuracy")]
    Proximity { re: f64, im: f64 },
    #[error("branch ambiguity: {0}")]
    Branch(String),
    #[error("fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("subordination value {re}{im:+}i left the closed lower half-plane")]
    DomainViolation { re: f64, im: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid law: {0}")]
    InvalidLaw(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
}
