//! Instances shipped with the crate.

use super::coloring::ColoringInstance;
use super::graph::{parse_labelled_adjacency, WeightedGraph};

/// Raw text of the bundled US-states adjacency list.
pub const US_STATES_ADJACENCY: &str = include_str!("../../data/us_states.txt");

/// The 51-vertex US map (50 states plus DC) with its state codes, in
/// alphabetical order. 110 undirected borders, i.e. 220 ordered adjacencies.
pub fn us_states_graph() -> (WeightedGraph, Vec<String>) {
    let (mut g, names) = parse_labelled_adjacency(US_STATES_ADJACENCY).expect("bundled adjacency list is valid");
    g.name = "us_states".into();
    (g, names)
}

/// Four-coloring of the US map.
pub fn us_map_coloring() -> ColoringInstance {
    ColoringInstance::new(us_states_graph().0, 4).expect("4 colors")
}
