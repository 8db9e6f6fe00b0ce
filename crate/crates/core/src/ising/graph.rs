//! Weighted undirected graphs, the G-set text format, and seeded generators.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OimError, Result};
use crate::rng::rng_from_seed;

/// A weighted edge with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected graph with canonically ordered, duplicate-free edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    pub name: String,
}

impl WeightedGraph {
    /// Builds a graph, canonicalising each edge to `i < j`.
    ///
    /// Self-loops, out-of-range endpoints, duplicate pairs and non-finite
    /// weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>, name: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(OimError::invalid(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(OimError::invalid(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if !w.is_finite() {
                return Err(OimError::invalid(format!("non-finite weight on edge ({a}, {b})")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((i, j)) {
                return Err(OimError::invalid(format!("duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, w });
        }
        Ok(WeightedGraph { n, edges: out, name: name.into() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.i == v || e.j == v).count()
    }

    /// Renders the graph in G-set format with 1-based indices.
    pub fn to_gset(&self) -> String {
        let mut s = String::with_capacity(16 * (self.edges.len() + 1));
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.i + 1, e.j + 1, e.w);
        }
        s
    }
}

/// Parses a G-set instance: a header `n m` followed by `m` lines `i j w`
/// with 1-based vertex indices. Blank lines and CRLF endings are accepted.
pub fn parse_gset(text: &str) -> Result<WeightedGraph> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| OimError::format(None, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(OimError::format(Some(hline), "header must be `n m`"));
    }
    let n: usize = parse_tok(head[0], hline, "vertex count")?;
    let m: usize = parse_tok(head[1], hline, "edge count")?;

    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let tok: Vec<&str> = text.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(OimError::format(Some(line), "edge line must be `i j w`"));
        }
        let a: usize = parse_tok(tok[0], line, "vertex index")?;
        let b: usize = parse_tok(tok[1], line, "vertex index")?;
        let w: f64 = parse_tok(tok[2], line, "weight")?;
        if a == 0 || b == 0 || a > n || b > n {
            return Err(OimError::format(Some(line), format!("vertex index out of [1, {n}]")));
        }
        if a == b {
            return Err(OimError::format(Some(line), format!("self-loop on vertex {a}")));
        }
        if !w.is_finite() {
            return Err(OimError::format(Some(line), "non-finite weight"));
        }
        let (i, j) = if a < b { (a - 1, b - 1) } else { (b - 1, a - 1) };
        if !seen.insert((i, j)) {
            return Err(OimError::format(Some(line), format!("duplicate edge ({a}, {b})")));
        }
        edges.push(Edge { i, j, w });
    }
    if edges.len() != m {
        return Err(OimError::format(None, format!("header declares {m} edges, found {}", edges.len())));
    }
    Ok(WeightedGraph { n, edges, name: String::new() })
}

/// Parses a labelled adjacency list: one `A B` pair of vertex names per line,
/// `#` starts a comment. Vertices are numbered in order of first appearance;
/// a line holding a single name declares an isolated vertex.
pub fn parse_labelled_adjacency(text: &str) -> Result<(WeightedGraph, Vec<String>)> {
    let mut names: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut pairs = Vec::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.as_slice() {
            [a] => {
                intern(a, &mut names);
            }
            [a, b] => {
                let ia = intern(a, &mut names);
                let ib = intern(b, &mut names);
                pairs.push((k + 1, ia, ib));
            }
            _ => return Err(OimError::format(Some(k + 1), "expected one or two vertex names")),
        }
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(pairs.len());
    for (line, a, b) in pairs {
        if a == b {
            return Err(OimError::format(Some(line), format!("self-loop on {}", names[a])));
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if !seen.insert((i, j)) {
            return Err(OimError::format(Some(line), format!("duplicate edge {} {}", names[a], names[b])));
        }
        edges.push(Edge { i, j, w: 1.0 });
    }
    let graph = WeightedGraph { n: names.len(), edges, name: String::new() };
    Ok((graph, names))
}

fn parse_tok<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| OimError::format(Some(line), format!("invalid {what} `{tok}`")))
}

/// How `random_graph` assigns edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Unit,
    /// +1 or -1 with equal probability.
    PmOne,
    /// Uniform real weight in `[lo, hi)`.
    UniformRange {
        lo: f64,
        hi: f64,
    },
}

/// Erdős–Rényi style graph: every vertex pair is included independently with
/// probability `density_percent / 100`.
pub fn random_graph(n: usize, density_percent: f64, weight_mode: WeightMode, seed: u64) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(OimError::invalid("random_graph needs n >= 2"));
    }
    if !(density_percent > 0.0 && density_percent <= 100.0) {
        return Err(OimError::invalid(format!("density {density_percent}% outside (0, 100]")));
    }
    if let WeightMode::UniformRange { lo, hi } = weight_mode {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(OimError::invalid("uniform weight range needs finite lo < hi"));
        }
    }
    let p = density_percent / 100.0;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let keep = p >= 1.0 || rng.random::<f64>() < p;
            if !keep {
                continue;
            }
            let w = match weight_mode {
                WeightMode::Unit => 1.0,
                WeightMode::PmOne => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
                WeightMode::UniformRange { lo, hi } => rng.random_range(lo..hi),
            };
            edges.push(Edge { i, j, w });
        }
    }
    let name = format!("rnd_{n}_{density_percent}_{seed}");
    Ok(WeightedGraph { n, edges, name })
}

/// The 8-vertex cubic graph: a ring where each vertex also connects to the
/// opposite one. Unit weights, 12 edges, maximum cut 10.
pub fn cubic8() -> WeightedGraph {
    let mut edges = Vec::with_capacity(12);
    for v in 0..8 {
        edges.push((v, (v + 1) % 8, 1.0));
    }
    for v in 0..4 {
        edges.push((v, v + 4, 1.0));
    }
    WeightedGraph::new(8, edges, "cubic8").expect("static graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let g = parse_gset("2 1\n1 2 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[Edge { i: 0, j: 1, w: 1.0 }]);
    }

    #[test]
    fn crlf_and_reversed_edges() {
        let g = parse_gset("3 2\r\n3 1 2\r\n\r\n2 3 -1\r\n").unwrap();
        assert_eq!(g.edges()[0], Edge { i: 0, j: 2, w: 2.0 });
        assert_eq!(g.edges()[1], Edge { i: 1, j: 2, w: -1.0 });
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            "2 1\n1 1 1\n",
            "3 2\n1 2 1\n2 1 1\n",
            "2 1\n1 3 1\n",
            "2 1\n0 1 1\n",
            "3 2\n1 2 1\n",
            "3 1\n1 2 1\n2 3 1\n",
            "2 1\n1 2\n",
            "2 1\n1 2 x\n",
            "",
        ] {
            assert!(matches!(parse_gset(bad), Err(OimError::Format { .. })), "accepted {bad:?}");
        }
    }

    #[test]
    fn cubic_graph_shape() {
        let g = cubic8();
        assert_eq!(g.edge_count(), 12);
        assert!((0..8).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn random_graph_modes() {
        let a = random_graph(20, 50.0, WeightMode::Unit, 11).unwrap();
        let b = random_graph(20, 50.0, WeightMode::Unit, 11).unwrap();
        assert_eq!(a, b);
        let full = random_graph(12, 100.0, WeightMode::Unit, 1).unwrap();
        assert_eq!(full.edge_count(), 66);
        let pm = random_graph(100, 10.0, WeightMode::PmOne, 5).unwrap();
        assert!(pm.edges().iter().all(|e| e.w == 1.0 || e.w == -1.0));
        // expected 495 edges; 5 sigma is about 105
        assert!((pm.edge_count() as f64 - 495.0).abs() < 105.0);
        let u = random_graph(30, 30.0, WeightMode::UniformRange { lo: 2.0, hi: 3.0 }, 5).unwrap();
        assert!(u.edges().iter().all(|e| (2.0..3.0).contains(&e.w)));
        assert!(random_graph(10, 0.0, WeightMode::Unit, 1).is_err());
        assert!(random_graph(10, 120.0, WeightMode::Unit, 1).is_err());
        assert!(random_graph(1, 50.0, WeightMode::Unit, 1).is_err());
    }

    #[test]
    fn labelled_adjacency() {
        let (g, names) = parse_labelled_adjacency("# c\nA B\nB C # x\nD\n").unwrap();
        assert_eq!(names, ["A", "B", "C", "D"]);
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(parse_labelled_adjacency("A B\nB A\n").is_err());
        assert!(parse_labelled_adjacency("A A\n").is_err());
    }
}
