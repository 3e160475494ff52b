//! Multiway rewriting over strings, ordered hypergraphs and first-order
//! terms, with causal networks, branchial structure, homotopy cells and
//! Knuth-Bendix completion.

pub mod causal;
pub mod completion;
pub mod error;
pub mod homotopy;
pub mod hypergraph;
pub mod multiway;
pub mod rewrite;
pub mod strings;
pub mod syntax;
pub mod term;

pub use error::{Error, Result};
