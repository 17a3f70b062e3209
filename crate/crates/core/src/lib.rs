//! Near-minimum-degree spanning trees by augmenting sequences.

pub mod augment;
pub mod certificate;
pub mod driver;
pub mod dsu;
pub mod forest;
pub mod graph;
pub mod oracle;
pub mod tree;

pub use graph::{parse_graph, EdgeId, Graph, GraphError, GraphFormat, Neighbors, ParseError, VertexId};
pub use tree::{bfs_tree, SpanningTree, TreeError, TreePath};
pub use certificate::{build_certificate, verify_certificate, CertificateError, LowerBoundCertificate};
pub use driver::{improved_mdst, Phase, RunConfig, RunResult};
