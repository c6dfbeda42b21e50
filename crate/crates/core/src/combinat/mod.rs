//! Exact combinatorics of set partitions and of free and Boolean cumulants.
//!
//! Everything here is exact; the routines that only add and multiply are
//! generic over the scalar so the numeric modules can reuse them with
//! complex entries.

pub mod cumulants;
pub mod partition;
pub mod wmoments;
pub mod words;

pub use cumulants::{
    boolean_cumulants_recursive, boolean_moments_recursive, cumulants_from_moments,
    free_moments_recursive, moments_from_cumulants, CumulantData, CumulantKind,
};
pub use partition::{enumerate_partitions, Family, Partition, PARTITION_CAP};
pub use wmoments::{alternating_boolean, kreweras_complement, moments_of_w, word_moment, XyWord};
pub use words::{
    alternating_moment_boolean, boolean_cumulant_entries, boolean_from_free, cond_exp_coeffs,
    free_mixed_moment, Entry, Letter, Operands, WORD_CAP,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatError {
    #[error("size {n} outside the supported range 1..={cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("missing data: {0}")]
    IncompleteData(String),
    #[error("malformed input: {0}")]
    Shape(String),
}
