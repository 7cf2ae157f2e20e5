//! File formats.

mod matrix;
mod newick;
mod weights;

pub use matrix::{parse_matrix, write_matrix};
pub use newick::{parse_newick, parse_newick_with_labels, to_dot, to_newick};
pub use weights::{looks_like_weights, parse_weights, weight_mode_for};
