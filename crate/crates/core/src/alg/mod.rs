//! Exact polynomial algebra: resultants, algebraic-number arithmetic,
//! squarefree stripping, Newton polygons, power-series branches, real-root
//! isolation and the elimination pipeline for `X + XYX`.

pub mod branch;
pub mod combine;
pub mod factor;
pub mod fixtures;
pub mod newton;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod series;

pub use branch::{select_branch, BranchTest};
pub use combine::{alg_combine, CombineOp};
pub use factor::{gcd, strip_factors, verify_factor_product, Stripped};
pub use newton::{critical_polynomial, newton_polygon, BranchSpec, Eta, NewtonPolygonData};
pub use poly::{MPoly, Var};
pub use resultant::{resultant, ResultantMethod};
pub use roots::{isolate_real_roots, RootInterval};
pub use series::series_solve;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("slope {0} is not on the lower Newton polygon")]
    InadmissibleSlope(String),
    #[error("invalid branch seed: {0}")]
    InvalidSeed(String),
    #[error("singular branch: {0}")]
    SingularBranch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("branch selection is ambiguous: passing candidates {passing:?}, specializations {specialized:?}")]
    Ambiguous {
        passing: Vec<usize>,
        specialized: Vec<String>,
    },
    #[error("stage {stage} mismatch: expected {expected}, got {got}")]
    StageMismatch {
        stage: String,
        expected: String,
        got: String,
    },
    #[error("fixture error: {0}")]
    Fixture(String),
}
