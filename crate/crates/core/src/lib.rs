//! Spectral distributions of `W = X + f(X) Y f(X)` for free self-adjoint
//! random variables `X` and `Y`.
//!
//! The crate computes the law of `W` along three routes that are checked
//! against each other:
//!
//! * [`combinat`]: exact rational moments from free and Boolean cumulants over
//!   noncrossing / interval partitions;
//! * [`xforms`]: Cauchy transforms through the subordination fixed point
//!   `δ = η̃_Y(η̃_T(δ))` with `T = f(X)(z-X)^{-1}f(X)`;
//! * [`alg`]: exact annihilating polynomials obtained by resultant
//!   elimination, with Newton-polygon branch selection and power-series
//!   moment extraction.
//!
//! [`rmt`] adds a random-matrix Monte Carlo cross-check and [`verify`]
//! bundles the end-to-end acceptance checks.

pub mod alg;
pub mod combinat;
pub mod numeric;
pub mod rational;
pub mod rmt;
pub mod verify;
pub mod xforms;
