//! Exact combinatorics of parabolic strata for the classical groups.
//!
//! The crate builds the root data of the classical families (GL, SL, PGL,
//! Sp, odd/even SO) in their standard `Z^n` coordinates, enumerates the
//! Weyl group as signed permutations, classifies subsets of simple roots
//! up to the Weyl action by exhaustive search, attaches Levi shapes and
//! residual Weyl groups to each class, and assembles the resulting
//! stratification both symbolically (virtual classes built from atom
//! expressions) and numerically (two-variable E-polynomials) where atom
//! tables permit.
//!
//! Everything is exact integer/rational arithmetic. All public operations
//! are pure functions over immutable data, safe for concurrent use.

pub mod eval;
pub mod levi;
pub mod motive;
pub mod partitions;
pub mod rootdata;
pub mod strata;
pub mod weyl;

pub mod cli;

use thiserror::Error;

/// Default cap on the rank parameter for exhaustive Weyl enumeration.
///
/// The worst case at the default (`B_8`/`C_8`) is ~2.6e9 element-subset
/// actions; callers may override via `--max-weyl` or `PARASTRAT_MAX_WEYL`.
pub const DEFAULT_MAX_WEYL: usize = 8;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {given} out of range for {family}: minimum is {min}")]
    RankOutOfRange {
        family: &'static str,
        given: usize,
        min: usize,
    },
    #[error("dimension mismatch: vectors of length {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{0:?} is not a root of this datum")]
    NotARoot(Vec<i64>),
    #[error("enumeration bound exceeded: group of order {required} (rank {rank} > bound {bound})")]
    EnumerationBound {
        rank: usize,
        bound: usize,
        required: u128,
    },
    #[error("negative argument: {0}")]
    NegativeArgument(String),
    #[error("invalid stratum label: {0}")]
    InvalidLabel(String),
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
    #[error("molien input is not a group: {0}")]
    NotAGroup(String),
    #[error("unknown built-in gamma tag {0:?}")]
    UnknownGamma(String),
    #[error("unsupported family pair for pairing: {0} vs {1}")]
    UnsupportedPair(&'static str, &'static str),
    #[error("torus/Weyl reference is reported for gl/sp/so-odd/so-even only, not {0}")]
    UnsupportedReference(&'static str),
    #[error("atom table: {0}")]
    AtomTable(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
