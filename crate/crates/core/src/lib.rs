//! Exact solver, bounds and graph families for the graph general position
//! problem: the largest vertex set in which no vertex lies on a geodesic
//! between two others.

mod bitset;
pub mod bounds;
pub mod error;
pub mod families;
pub mod geodesic;
pub mod graph;
pub mod reduction;
pub mod solver;

pub use error::{Error, Result};
pub use geodesic::{collinear_triples, is_between, verify_general_position, GeneralPositionSet, TripleSet};
pub use graph::{all_pairs_distances, build_graph, DistanceMatrix, Graph};
pub use solver::{gp_brute_force, gp_exact, gp_greedy, SolveOptions, SolveResult, SolveStatus};
