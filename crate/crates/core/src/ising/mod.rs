//! Ising problems and the encodings that produce them.

pub mod brute;
pub mod coloring;
pub mod graph;
pub mod instances;
pub mod problem;

pub use brute::{brute_force_ground_state, BRUTE_FORCE_LIMIT};
pub use coloring::{coloring_to_ising, decode_coloring, ColorAssignment, ColoringInstance, DecodeIssue};
pub use graph::{cubic8, parse_gset, parse_labelled_adjacency, random_graph, Edge, WeightMode, WeightedGraph};
pub use instances::{us_map_coloring, us_states_graph, US_STATES_ADJACENCY};
pub use problem::{cut_value, hamiltonian, maxcut_to_ising, Coupling, IsingProblem, ProblemBuilder, SpinConfig};
