//! Hierarchical clustering by quartet-tree search.
//!
//! Objects are placed at the leaves of an unrooted ternary tree. Every set of
//! four leaves is split by the tree into two sibling pairs, and each such
//! quartet topology has a cost; the tree cost is the sum over all quartets.
//! A tree is scored on a `[0, 1]` scale between the sum of per-quartet minima
//! and maxima, and the search looks for a tree of maximum score by randomized
//! hill climbing with fat-tailed multi-step mutations.
//!
//! - [`tree`] and [`quartet`]: the tree model and embedded quartet topologies
//! - [`table`]: quartet cost tables, tree cost and normalized score
//! - [`cost`]: cost tables from distance matrices or weighted topology sets
//! - [`search`]: the hill climber, stopping rules and run statistics
//! - [`oracle`]: exhaustive enumeration and exact optima for small `n`
//! - [`ncd`]: normalized compression distance matrices
//! - [`datagen`]: synthetic tree metrics and tagged-file corpora
//! - [`io`]: matrix, Newick, DOT and weight file formats

pub mod cost;
pub mod datagen;
mod error;
pub mod io;
pub mod ncd;
pub mod oracle;
pub mod quartet;
pub mod search;
pub mod table;
pub mod tree;

pub use cost::{costs_from_matrix, costs_from_weights, counterexample_table, DistanceMatrix, WeightMode, WeightedQuartetList};
pub use error::{Error, Result};
pub use quartet::{consistent_topology, embedded_quartet_set, Pairing, Quartet, Topology};
pub use search::{hill_climb, r_for_n, random_tree, search, search_with_agreement, SearchConfig, Termination};
pub use table::{score, tree_cost, QuartetCostTable, ScoredTree};
pub use tree::Tree;
