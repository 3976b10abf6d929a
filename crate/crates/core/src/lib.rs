//! Rare-event relations and symbolic ternary metrics on phylogenetic trees.
//!
//! The crate derives single-1 / zero relations and symbolic ternary metrics
//! from labeled or dated trees, validates raw relations and metrics, and
//! reconstructs the minimally resolved trees that explain them.

pub mod oracles;
pub mod quartets;
pub mod rare_events;
pub mod taxon;
pub mod ternary;
pub mod tree;

pub use taxon::{Color, Taxon};
pub use tree::{DatedTree, EdgeId, EdgeLabeledTree, Tree, TreeBuilder, TreeError, VertexId};
