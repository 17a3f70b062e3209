//! Dynamic forests with per-vertex weights and path-minimum queries.
//!
//! [`LinkCutForest`] is the working structure; [`NaiveForest`] stores the
//! forest explicitly and scans paths, and exists to be compared against.

mod link_cut;
mod naive;

pub use link_cut::LinkCutForest;
pub use naive::NaiveForest;

use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("linking {0} and {1} would create a cycle")]
    WouldCreateCycle(VertexId, VertexId),
    #[error("({0}, {1}) is not a forest edge")]
    NotAForestEdge(VertexId, VertexId),
    #[error("{0} and {1} are in different trees")]
    NotConnected(VertexId, VertexId),
}

/// Operations shared by both forest implementations.
///
/// Path minima compare `(weight, vertex id)`, so ties go to the smallest id.
pub trait DynamicForest {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn link(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError>;

    fn cut(&mut self, u: VertexId, v: VertexId) -> Result<(), ForestError>;

    fn set_weight(&mut self, u: VertexId, weight: u32);

    fn weight(&self, u: VertexId) -> u32;

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool;

    /// Minimum-weight vertex on the tree path from `u` to `v`, endpoints included.
    fn path_min_vertex(&mut self, u: VertexId, v: VertexId) -> Result<(VertexId, u32), ForestError>;
}
