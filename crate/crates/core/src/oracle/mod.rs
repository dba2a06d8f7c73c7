//! Independent ground truth: exponential-formula count tables and brute-force censuses.

pub mod brute;
pub mod counts;
pub mod graph;
pub mod kernel;
pub mod multigraph;
pub mod predicate;

pub use brute::{brute_census, brute_census_multigraph, census};
pub use counts::{connected_counts, ConnectedTable};
pub use graph::GraphInstance;
pub use multigraph::MultigraphInstance;
pub use predicate::Predicate;
