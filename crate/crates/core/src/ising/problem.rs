//! Ising problems, spin configurations and the MAX-CUT encoding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use crate::error::{OimError, Result};

/// A configuration of `n` spins, each exactly -1 or +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(k) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(OimError::invalid(format!("spin {k} is {}, expected +1 or -1", spins[k])));
        }
        Ok(SpinConfig(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig(vec![1; n])
    }

    /// Configuration whose bit `k` of `bits` set means spin `k` is -1.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SpinConfig((0..n).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> f64 {
        f64::from(self.0[k])
    }

    pub fn flipped(&self) -> Self {
        SpinConfig(self.0.iter().map(|s| -s).collect())
    }

    pub(crate) fn from_raw(spins: Vec<i8>) -> Self {
        debug_assert!(spins.iter().all(|&s| s == 1 || s == -1));
        SpinConfig(spins)
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = OimError;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SpinConfig::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// One off-diagonal coupling `J_ij` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// `H(s) = -Σ_{i<j} J_ij s_i s_j - Σ_i h_i s_i + constant_offset`.
///
/// Couplings are stored once per unordered pair, sorted by `(i, j)`, and read
/// back symmetrically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct IsingProblem {
    n: usize,
    couplings: Vec<Coupling>,
    h: Vec<f64>,
    constant_offset: f64,
    pub name: String,
}

impl IsingProblem {
    pub fn builder(n: usize) -> ProblemBuilder {
        ProblemBuilder {
            n,
            couplings: BTreeMap::new(),
            h: vec![0.0; n],
            constant_offset: 0.0,
            name: String::new(),
            bad_index: None,
        }
    }

    /// Problem with no couplings and no fields.
    pub fn empty(n: usize) -> Self {
        IsingProblem::builder(n).build().expect("empty problem is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    pub fn has_fields(&self) -> bool {
        self.h.iter().any(|&x| x != 0.0)
    }

    /// `J_ij`, symmetric, zero on the diagonal and for absent pairs.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.binary_search_by(|c| (c.i, c.j).cmp(&key)).map(|k| self.couplings[k].value).unwrap_or(0.0)
    }

    /// Neighbour lists `(j, J_ij)` for every spin.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for c in &self.couplings {
            adj[c.i].push((c.j, c.value));
            adj[c.j].push((c.i, c.value));
        }
        adj
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Accumulates couplings, fields and constants; repeated pairs add up.
#[derive(Debug, Clone)]
pub struct ProblemBuilder {
    n: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    h: Vec<f64>,
    constant_offset: f64,
    name: String,
    bad_index: Option<usize>,
}

impl ProblemBuilder {
    pub fn add_coupling(&mut self, i: usize, j: usize, value: f64) -> &mut Self {
        let key = if i < j { (i, j) } else { (j, i) };
        *self.couplings.entry(key).or_insert(0.0) += value;
        self
    }

    pub fn add_field(&mut self, i: usize, value: f64) -> &mut Self {
        if let Some(h) = self.h.get_mut(i) {
            *h += value;
        } else {
            self.bad_index.get_or_insert(i);
        }
        self
    }

    pub fn add_offset(&mut self, value: f64) -> &mut Self {
        self.constant_offset += value;
        self
    }

    pub fn name(&mut self, name: impl Into<String>) -> &mut Self {
        self.name = name.into();
        self
    }

    pub fn build(&self) -> Result<IsingProblem> {
        if let Some(i) = self.bad_index {
            return Err(OimError::invalid(format!("field index {i} out of range for n = {}", self.n)));
        }
        let mut couplings = Vec::with_capacity(self.couplings.len());
        for (&(i, j), &value) in &self.couplings {
            if i == j {
                return Err(OimError::invalid(format!("diagonal coupling on spin {i}")));
            }
            if j >= self.n {
                return Err(OimError::invalid(format!("spin index out of range for n = {}", self.n)));
            }
            if !value.is_finite() {
                return Err(OimError::invalid(format!("non-finite coupling ({i}, {j})")));
            }
            if value != 0.0 {
                couplings.push(Coupling { i, j, value });
            }
        }
        if self.h.iter().any(|x| !x.is_finite()) || !self.constant_offset.is_finite() {
            return Err(OimError::invalid("fields and offset must be finite"));
        }
        Ok(IsingProblem {
            n: self.n,
            couplings,
            h: self.h.clone(),
            constant_offset: self.constant_offset,
            name: self.name.clone(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    #[serde(default)]
    name: String,
    n: usize,
    couplings: Vec<(usize, usize, f64)>,
    h: Vec<f64>,
    #[serde(default)]
    constant_offset: f64,
}

impl TryFrom<ProblemRepr> for IsingProblem {
    type Error = OimError;
    fn try_from(r: ProblemRepr) -> Result<Self> {
        if r.h.len() != r.n {
            return Err(OimError::Dimension { expected: r.n, got: r.h.len() });
        }
        let mut b = IsingProblem::builder(r.n);
        let mut seen = std::collections::HashSet::new();
        for (i, j, v) in r.couplings {
            let key = if i < j { (i, j) } else { (j, i) };
            if !seen.insert(key) {
                return Err(OimError::invalid(format!("duplicate coupling ({i}, {j})")));
            }
            b.add_coupling(i, j, v);
        }
        for (k, &v) in r.h.iter().enumerate() {
            b.add_field(k, v);
        }
        b.add_offset(r.constant_offset).name(r.name);
        b.build()
    }
}

impl From<IsingProblem> for ProblemRepr {
    fn from(p: IsingProblem) -> Self {
        ProblemRepr {
            name: p.name,
            n: p.n,
            couplings: p.couplings.iter().map(|c| (c.i, c.j, c.value)).collect(),
            h: p.h,
            constant_offset: p.constant_offset,
        }
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(OimError::Dimension { expected, got });
    }
    Ok(())
}

/// Ising energy of a spin configuration.
pub fn hamiltonian(problem: &IsingProblem, spins: &SpinConfig) -> Result<f64> {
    check_len(problem.n, spins.len())?;
    Ok(hamiltonian_unchecked(problem, spins.as_slice()))
}

pub(crate) fn hamiltonian_unchecked(problem: &IsingProblem, s: &[i8]) -> f64 {
    let pair: f64 = problem.couplings.iter().map(|c| c.value * f64::from(s[c.i] * s[c.j])).sum();
    let field: f64 = problem.h.iter().zip(s).map(|(h, &si)| h * f64::from(si)).sum();
    -pair - field + problem.constant_offset
}

/// MAX-CUT as Ising: `J_ij = -w_ij`, no fields, no offset.
pub fn maxcut_to_ising(graph: &WeightedGraph) -> IsingProblem {
    let mut b = IsingProblem::builder(graph.n());
    for e in graph.edges() {
        b.add_coupling(e.i, e.j, -e.w);
    }
    b.name(graph.name.clone());
    b.build().expect("graph edges are valid couplings")
}

/// Total weight of edges whose endpoints carry different spins.
pub fn cut_value(graph: &WeightedGraph, spins: &SpinConfig) -> Result<f64> {
    check_len(graph.n(), spins.len())?;
    let s = spins.as_slice();
    Ok(graph.edges().iter().filter(|e| s[e.i] != s[e.j]).map(|e| e.w).sum())
}
