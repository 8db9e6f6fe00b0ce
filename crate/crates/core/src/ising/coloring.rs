//! Graph coloring as an Ising problem.
//!
//! Each vertex `v` gets one spin per color, laid out as
//! `spin(v, c) = v * n_colors + c`. The penalty
//!
//! ```text
//! H = Σ_v (k - 2 + Σ_c s_vc)^2 + Σ_(u,v)∈E Σ_c (1 + s_uc)(1 + s_vc)
//! ```
//!
//! is zero exactly when every vertex has a single +1 spin and no edge joins two
//! vertices holding the same color. For `k = 4` the vertex term is
//! `(2 + s_R + s_G + s_B + s_Y)^2`. Expanding with `s^2 = 1` gives pairwise
//! couplings, fields and a constant, which are what the encoder emits.

use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use super::problem::{IsingProblem, SpinConfig};
use crate::error::{OimError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringInstance {
    pub graph: WeightedGraph,
    pub n_colors: usize,
}

impl ColoringInstance {
    pub fn new(graph: WeightedGraph, n_colors: usize) -> Result<Self> {
        if n_colors < 2 {
            return Err(OimError::invalid(format!("need at least 2 colors, got {n_colors}")));
        }
        Ok(ColoringInstance { graph, n_colors })
    }

    pub fn n_spins(&self) -> usize {
        self.graph.n() * self.n_colors
    }

    pub fn spin_index(&self, vertex: usize, color: usize) -> usize {
        vertex * self.n_colors + color
    }
}

/// Why a vertex failed to decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecodeIssue {
    NoColor { vertex: usize },
    MultipleColors { vertex: usize, colors: Vec<usize> },
    Conflict { u: usize, v: usize, color: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    /// Color per vertex. Undecodable vertices carry their lowest +1 color, or 0.
    pub colors: Vec<usize>,
    pub valid: bool,
    pub issues: Vec<DecodeIssue>,
}

pub fn coloring_to_ising(instance: &ColoringInstance) -> IsingProblem {
    let k = instance.n_colors;
    let a = k as f64 - 2.0;
    let mut b = IsingProblem::builder(instance.n_spins());
    for v in 0..instance.graph.n() {
        // (a + Σ s)^2 = a^2 + k + 2a Σ s + 2 Σ_{c<c'} s_c s_c'
        b.add_offset(a * a + k as f64);
        for c in 0..k {
            b.add_field(instance.spin_index(v, c), -2.0 * a);
            for c2 in (c + 1)..k {
                b.add_coupling(instance.spin_index(v, c), instance.spin_index(v, c2), -2.0);
            }
        }
    }
    for e in instance.graph.edges() {
        // (1 + s_u)(1 + s_v) = 1 + s_u + s_v + s_u s_v
        for c in 0..k {
            let (su, sv) = (instance.spin_index(e.i, c), instance.spin_index(e.j, c));
            b.add_offset(1.0);
            b.add_field(su, -1.0);
            b.add_field(sv, -1.0);
            b.add_coupling(su, sv, -1.0);
        }
    }
    let name = if instance.graph.name.is_empty() { format!("coloring_k{k}") } else { format!("{}_k{k}", instance.graph.name) };
    b.name(name);
    b.build().expect("encoder indices are in range")
}

pub fn decode_coloring(instance: &ColoringInstance, spins: &SpinConfig) -> Result<ColorAssignment> {
    if spins.len() != instance.n_spins() {
        return Err(OimError::Dimension { expected: instance.n_spins(), got: spins.len() });
    }
    let k = instance.n_colors;
    let s = spins.as_slice();
    let mut colors = Vec::with_capacity(instance.graph.n());
    let mut issues = Vec::new();
    let mut decoded = vec![false; instance.graph.n()];
    for v in 0..instance.graph.n() {
        let up: Vec<usize> = (0..k).filter(|&c| s[instance.spin_index(v, c)] == 1).collect();
        match up.as_slice() {
            [c] => {
                colors.push(*c);
                decoded[v] = true;
            }
            [] => {
                colors.push(0);
                issues.push(DecodeIssue::NoColor { vertex: v });
            }
            many => {
                colors.push(many[0]);
                issues.push(DecodeIssue::MultipleColors { vertex: v, colors: up.clone() });
            }
        }
    }
    for e in instance.graph.edges() {
        if decoded[e.i] && decoded[e.j] && colors[e.i] == colors[e.j] {
            issues.push(DecodeIssue::Conflict { u: e.i, v: e.j, color: colors[e.i] });
        }
    }
    Ok(ColorAssignment { colors, valid: issues.is_empty(), issues })
}
