//! Degree reduction by augmenting sequences.
//!
//! For a threshold `k`, vertices of degree `k - 1` are *marked*. A layering
//! `B_0 = S_k, B_1, ..., B_h` of marked vertices records how far a search has
//! to climb from an edge between two unmarked vertices in different
//! components of `T \ (B_0 ∪ ... ∪ B_h)` to reach a vertex of degree `>= k`.
//! Each successful search yields an [`AugmentingSequence`] whose staged
//! insertion lowers `d_k` without adding vertices to `S_k`.

mod checks;
mod degred;
mod layering;
mod search;
mod sequence;

pub use checks::{check_blocking, check_components, components_from_scratch, BlockingViolation};
pub use degred::{aug_seq_deg_red, aug_seq_deg_red_with, DegRedOptions, DegRedReport};
pub use layering::{build_layering, h_max_for, LayeringState, UNLAYERED};
pub use sequence::{
    apply_sequence, validate_sequence, AugmentingSequence, ModificationReport, OrientedEdge,
    SequenceViolation, ValidationReport,
};

use thiserror::Error;

use crate::forest::ForestError;

#[derive(Debug, Error, PartialEq)]
pub enum AugmentError {
    #[error("degree threshold {0} is below 3")]
    ThresholdTooSmall(usize),
    #[error("no vertex has degree >= {0}")]
    EmptySk(usize),
    #[error("invalid augmenting sequence: {0}")]
    InvalidSequence(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Forest(#[from] ForestError),
}
