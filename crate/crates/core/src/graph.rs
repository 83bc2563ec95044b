//! Bipartite graphs, set systems and the exact expansion arithmetic shared by
//! every solver in the crate.
//!
//! Vertices are dense 0-based indices. Left vertices live in `0..n`, right
//! vertices in `0..n_right`; the two index spaces are independent.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartite graph `(U, V, E)` with sorted, duplicate-free adjacency on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    n: usize,
    n_right: usize,
    adj_left: Vec<Vec<usize>>,
    adj_right: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from an edge list. Duplicate edges are rejected.
    pub fn from_edges(n: usize, n_right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj_left = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n_right {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n}x{n_right}"
                )));
            }
            adj_left[u].push(v);
        }
        for (u, list) in adj_left.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge at left vertex {u}")));
            }
        }
        Ok(Self::from_sorted_left(n, n_right, adj_left))
    }

    /// Builds a graph from edges, silently merging duplicates.
    pub fn from_edges_dedup(n: usize, n_right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj_left = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n_right {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n}x{n_right}"
                )));
            }
            adj_left[u].push(v);
        }
        for list in adj_left.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_left(n, n_right, adj_left))
    }

    /// Trusted constructor: every left list must already be sorted, deduplicated and in range.
    pub(crate) fn from_sorted_left(n: usize, n_right: usize, adj_left: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(adj_left.len(), n);
        let mut adj_right = vec![Vec::new(); n_right];
        for (u, list) in adj_left.iter().enumerate() {
            for &v in list {
                adj_right[v].push(u);
            }
        }
        Self { n, n_right, adj_left, adj_right }
    }

    pub fn empty(n: usize, n_right: usize) -> Self {
        Self::from_sorted_left(n, n_right, vec![Vec::new(); n])
    }

    /// Number of left vertices `|U|`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of right vertices `|V|`.
    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.adj_left.iter().map(Vec::len).sum()
    }

    pub fn left_neighbors(&self, u: usize) -> &[usize] {
        &self.adj_left[u]
    }

    pub fn right_neighbors(&self, v: usize) -> &[usize] {
        &self.adj_right[v]
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.adj_left[u].len()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.adj_right[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj_left[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj_left
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// Checks the structural invariants (symmetry, sortedness, ranges).
    pub fn validate(&self) -> Result<()> {
        if self.adj_left.len() != self.n || self.adj_right.len() != self.n_right {
            return Err(Error::InvalidGraph("adjacency length mismatch".into()));
        }
        for (u, list) in self.adj_left.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGraph(format!("left list {u} not strictly sorted")));
            }
            for &v in list {
                if v >= self.n_right || self.adj_right[v].binary_search(&u).is_err() {
                    return Err(Error::InvalidGraph(format!("asymmetric edge ({u}, {v})")));
                }
            }
        }
        for (v, list) in self.adj_right.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGraph(format!("right list {v} not strictly sorted")));
            }
            for &u in list {
                if u >= self.n || self.adj_left[u].binary_search(&v).is_err() {
                    return Err(Error::InvalidGraph(format!("asymmetric edge ({u}, {v})")));
                }
            }
        }
        Ok(())
    }

    /// `N(S)` as a sorted right-vertex list.
    pub fn neighborhood(&self, s: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.n_right];
        let mut out = Vec::new();
        for &u in s {
            for &v in &self.adj_left[u] {
                if !mark[v] {
                    mark[v] = true;
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn neighborhood_size(&self, s: &[usize]) -> usize {
        let mut mark = vec![false; self.n_right];
        let mut count = 0;
        for &u in s {
            for &v in &self.adj_left[u] {
                if !mark[v] {
                    mark[v] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Neighborhood size ignoring right vertices flagged in `masked`.
    pub fn masked_neighborhood_size(&self, s: &[usize], masked: &[bool]) -> usize {
        let mut mark = masked.to_vec();
        let mut count = 0;
        for &u in s {
            for &v in &self.adj_left[u] {
                if !mark[v] {
                    mark[v] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Left neighbors of a right-vertex set, sorted.
    pub fn left_neighborhood(&self, t: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        let mut out = Vec::new();
        for &v in t {
            for &u in &self.adj_right[v] {
                if !mark[u] {
                    mark[u] = true;
                    out.push(u);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Exact expansion `|N(S)| / |S|`.
    pub fn expansion(&self, s: &[usize]) -> Result<Expansion> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Expansion::new(self.neighborhood_size(s), s.len()))
    }

    /// Subgraph induced on the left set `keep` (in the given order) and all right vertices.
    pub fn induced_left(&self, keep: &[usize]) -> BipartiteGraph {
        let adj = keep.iter().map(|&u| self.adj_left[u].clone()).collect();
        Self::from_sorted_left(keep.len(), self.n_right, adj)
    }

    /// Drops every edge into a right vertex flagged in `masked`. Index spaces are unchanged.
    pub fn mask_right(&self, masked: &[bool]) -> BipartiteGraph {
        let adj = self
            .adj_left
            .iter()
            .map(|list| list.iter().copied().filter(|&v| !masked[v]).collect())
            .collect();
        Self::from_sorted_left(self.n, self.n_right, adj)
    }
}

/// Exact expansion ratio kept as the raw pair `|N(S)| / |S|`.
///
/// Ordering compares the rational values by cross multiplication; ties between
/// equal values with different representations compare equal.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Expansion {
    pub neighbors: usize,
    pub size: usize,
}

impl Expansion {
    pub fn new(neighbors: usize, size: usize) -> Self {
        assert!(size > 0, "expansion of an empty set");
        Self { neighbors, size }
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.neighbors as u64, self.size as u64)
    }

    pub fn as_f64(&self) -> f64 {
        self.neighbors as f64 / self.size as f64
    }
}

impl PartialEq for Expansion {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Expansion {}

impl PartialOrd for Expansion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expansion {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.neighbors as u128 * other.size as u128;
        let rhs = other.neighbors as u128 * self.size as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.neighbors, self.size)
    }
}

/// A chosen left set with its exact neighborhood size and expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub chosen: Vec<usize>,
    pub neighborhood_size: usize,
    pub expansion: Expansion,
}

impl Solution {
    /// Evaluates `chosen` (sorted internally) on `g`.
    pub fn evaluate(g: &BipartiteGraph, mut chosen: Vec<usize>) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        let neighborhood_size = g.neighborhood_size(&chosen);
        let expansion = if chosen.is_empty() {
            return Err(Error::EmptySet);
        } else {
            Expansion::new(neighborhood_size, chosen.len())
        };
        Ok(Self { chosen, neighborhood_size, expansion })
    }

    /// Re-evaluates on `g` and checks the stored figures.
    pub fn is_consistent(&self, g: &BipartiteGraph) -> bool {
        let n = g.neighborhood_size(&self.chosen);
        n == self.neighborhood_size
            && self.expansion.neighbors == n
            && self.expansion.size == self.chosen.len()
    }
}

/// Set system over `0..n_elements`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    n_elements: usize,
    sets: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Sets are sorted on construction; duplicate elements within a set are an error.
    pub fn new(n_elements: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = sets;
        for (i, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("set {i} has a repeated element")));
            }
            if set.last().is_some_and(|&e| e >= n_elements) {
                return Err(Error::InvalidGraph(format!("set {i} has an element out of range")));
            }
        }
        Ok(Self { n_elements, sets })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Size of the union of the chosen sets.
    pub fn union_size(&self, chosen: &[usize]) -> usize {
        let mut mark = vec![false; self.n_elements];
        let mut count = 0;
        for &i in chosen {
            for &e in &self.sets[i] {
                if !mark[e] {
                    mark[e] = true;
                    count += 1;
                }
            }
        }
        count
    }
}

/// SSBVE instance: choose exactly `k` left vertices minimizing `|N(S)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsbveInstance {
    pub graph: BipartiteGraph,
    pub k: usize,
}

impl SsbveInstance {
    pub fn new(graph: BipartiteGraph, k: usize) -> Result<Self> {
        if k == 0 || k > graph.n() {
            return Err(Error::InvalidBudget { k, max: graph.n() });
        }
        Ok(Self { graph, k })
    }
}

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Self loops and duplicate edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self loop at {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge at vertex {v}")));
            }
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// `N(S)`: every vertex adjacent to some member of `s` (members included when adjacent).
    pub fn neighborhood(&self, s: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.n()];
        let mut out = Vec::new();
        for &a in s {
            for &b in &self.adj[a] {
                if !mark[b] {
                    mark[b] = true;
                    out.push(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `|N(S) \ S|`.
    pub fn outer_boundary_size(&self, s: &[usize]) -> usize {
        let mut inside = vec![false; self.n()];
        for &a in s {
            inside[a] = true;
        }
        let mut mark = inside.clone();
        let mut count = 0;
        for &a in s {
            for &b in &self.adj[a] {
                if !mark[b] {
                    mark[b] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// `|E(S, S̄)|`.
    pub fn cut_size(&self, s: &[usize]) -> usize {
        let mut inside = vec![false; self.n()];
        for &a in s {
            inside[a] = true;
        }
        s.iter()
            .map(|&a| self.adj[a].iter().filter(|&&b| !inside[b]).count())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> BipartiteGraph {
        BipartiteGraph::from_edges(2, 1, &[(0, 0), (1, 0)]).unwrap()
    }

    #[test]
    fn neighborhood_of_empty_set_is_empty() {
        assert!(star().neighborhood(&[]).is_empty());
    }

    #[test]
    fn shared_neighbor() {
        let g = star();
        assert_eq!(g.neighborhood(&[0, 1]), vec![0]);
        assert_eq!(g.expansion(&[0, 1]).unwrap().as_ratio(), Ratio::new(1, 2));
    }

    #[test]
    fn expansion_examples() {
        let g = BipartiteGraph::from_edges(1, 2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.expansion(&[0]).unwrap().as_ratio(), Ratio::from_integer(2));
        let m = BipartiteGraph::from_edges(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let e = m.expansion(&[0, 1, 2]).unwrap();
        assert_eq!((e.neighbors, e.size), (3, 3));
        assert_eq!(e.as_ratio(), Ratio::from_integer(1));
        assert_eq!(m.expansion(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn duplicate_edges_rejected() {
        assert!(BipartiteGraph::from_edges(1, 1, &[(0, 0), (0, 0)]).is_err());
        assert!(BipartiteGraph::from_edges(1, 1, &[(0, 1)]).is_err());
    }

    #[test]
    fn expansion_ordering_is_by_value() {
        assert_eq!(Expansion::new(1, 2), Expansion::new(2, 4));
        assert!(Expansion::new(1, 3) < Expansion::new(1, 2));
        assert!(Expansion::new(0, 5) < Expansion::new(1, 100));
    }

    #[test]
    fn invalid_budget() {
        assert!(SsbveInstance::new(star(), 0).is_err());
        assert!(SsbveInstance::new(star(), 3).is_err());
        assert!(SsbveInstance::new(star(), 2).is_ok());
    }

    #[test]
    fn undirected_boundaries() {
        // path 0-1-2
        let g = UndirectedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.outer_boundary_size(&[0]), 1);
        assert_eq!(g.cut_size(&[1]), 2);
        assert_eq!(g.neighborhood(&[0, 1]), vec![0, 1, 2]);
        assert!(UndirectedGraph::from_edges(2, &[(0, 0)]).is_err());
    }
}
