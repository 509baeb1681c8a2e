pub mod bitset;
pub mod cliques;
pub mod dichotomy;
pub mod error;
pub mod graph;
pub(crate) mod local_search;
pub mod multipartite;
pub mod oracle;
pub mod precision;
pub mod reducer;
pub mod turan;

pub use error::{Error, Result};
pub use graph::{Edge, Graph};
