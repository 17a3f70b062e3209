//! Ground truth for tests: exact solving on tiny graphs, a plain local
//! search, a slow restatement of the degree-reduction loop, and generators.

mod baseline;
mod enumerate;
mod exact;
mod generate;
mod reference;

pub use baseline::local_search_baseline;
pub use enumerate::{canonical_form, connected_graphs};
pub use exact::{exact_mdst, EXACT_MAX_N};
pub use generate::{generate, GenKind, GenSpec, Generated};
pub use reference::reference_degred;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; exact search is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}
