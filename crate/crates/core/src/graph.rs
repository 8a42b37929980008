//! Simple undirected graphs with a canonical edge order.
//!
//! Edges are stored as pairs `(u, v)` with `u < v`, sorted
//! lexicographically. That order is the row order of every rigidity matrix
//! and the coordinate order of every stress vector built on the graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        Graph::new(raw.n, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.n, edges: g.edges }
    }
}

impl Graph {
    /// Builds a graph on vertices `0..n`. Pairs may come in either
    /// orientation; self-loops, duplicates and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Self { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        Self::from_sorted(n, all_pairs(n).collect())
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Self::from_sorted(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_sorted(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect())
    }

    /// The labeled graph on `n` vertices whose edge set is given by the bits
    /// of `mask`, bit `i` standing for the `i`-th pair in lexicographic
    /// order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_sorted(n, all_pairs(n).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of edge `uv` in the canonical order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    pub fn without_edge(&self, index: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(index);
        Self::from_sorted(self.n, edges)
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        Self::new(self.n, self.edges.iter().copied().chain(std::iter::once((u, v))))
    }

    /// The spanning subgraph keeping only the listed edge indices.
    pub fn edge_subgraph(&self, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Self::from_sorted(self.n, idx.into_iter().map(|i| self.edges[i]).collect())
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.n;
        let edges = self.edges.iter().copied().chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::new(self.n + other.n, edges).expect("disjoint union of valid graphs")
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Indices of the edges with both endpoints in `x`.
    pub fn edges_within(&self, x: &VertexSet) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| x.contains(u) && x.contains(v))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_clique(&self, x: &VertexSet) -> bool {
        let s = x.as_slice();
        s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_avoiding(&vec![false; self.n])
    }

    /// Connectivity of the graph with the `removed` vertices deleted. The
    /// empty graph counts as connected.
    fn is_connected_avoiding(&self, removed: &[bool]) -> bool {
        let Some(start) = (0..self.n).find(|&v| !removed[v]) else {
            return true;
        };
        let mut seen = removed.to_vec();
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Vertex `k`-connectivity: more than `k` vertices and no separating set
    /// of fewer than `k` vertices. Decided by trying every candidate cut.
    pub fn is_k_connected(&self, k: usize) -> bool {
        assert!(k >= 1, "connectivity order must be at least 1");
        if self.n <= k {
            return false;
        }
        let mut removed = vec![false; self.n];
        (0..k).all(|size| self.no_cut_of_size(size, 0, &mut removed))
    }

    fn no_cut_of_size(&self, size: usize, from: usize, removed: &mut [bool]) -> bool {
        if size == 0 {
            return self.is_connected_avoiding(removed);
        }
        for v in from..self.n {
            removed[v] = true;
            let ok = self.no_cut_of_size(size - 1, v + 1, removed);
            removed[v] = false;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Every `k`-clique, each reported once as an increasing vertex set, in
    /// lexicographic order.
    pub fn find_cliques(&self, k: usize) -> Vec<VertexSet> {
        assert!(k >= 1, "clique size must be at least 1");
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        let candidates: Vec<usize> = (0..self.n).collect();
        self.extend_cliques(k, &candidates, &mut current, &mut out, false);
        out
    }

    /// Whether any `k`-clique exists; stops at the first one.
    pub fn has_clique(&self, k: usize) -> bool {
        assert!(k >= 1, "clique size must be at least 1");
        let mut out = Vec::new();
        let candidates: Vec<usize> = (0..self.n).collect();
        self.extend_cliques(k, &candidates, &mut Vec::with_capacity(k), &mut out, true);
        !out.is_empty()
    }

    fn extend_cliques(
        &self,
        k: usize,
        candidates: &[usize],
        current: &mut Vec<usize>,
        out: &mut Vec<VertexSet>,
        first_only: bool,
    ) {
        if current.len() == k {
            out.push(VertexSet(current.clone()));
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < k - current.len() {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&w| self.has_edge(v, w)).collect();
            current.push(v);
            self.extend_cliques(k, &next, current, out, first_only);
            current.pop();
            if first_only && !out.is_empty() {
                return;
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// All pairs `u < v` of `0..n` in lexicographic order.
pub fn all_pairs(n: usize) -> impl Iterator<Item = Edge> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Largest `n` accepted by [`enumerate_graphs`].
pub const MAX_ENUMERATION_N: usize = 8;

/// Number of labeled graphs on `n` vertices, `2^C(n,2)`.
pub fn labeled_graph_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// Every labeled graph on `n` vertices, in increasing order of edge mask,
/// optionally restricted to the connected ones. No isomorphism reduction.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::EnumerationScope(n));
    }
    Ok((0..labeled_graph_count(n))
        .map(move |mask| Graph::from_mask(n, mask))
        .filter(move |g| !connected_only || g.is_connected()))
}

/// A strictly increasing set of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGraph(format!("vertex set {vertices:?} is not strictly increasing")));
        }
        if let Some(&v) = vertices.last().filter(|&&v| v >= n) {
            return Err(Error::IndexOutOfRange { index: v, bound: n });
        }
        Ok(Self(vertices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn brute_cliques(g: &Graph, k: usize) -> Vec<VertexSet> {
        let n = g.n();
        let mut out: Vec<VertexSet> = (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| VertexSet((0..n).filter(|&v| s >> v & 1 == 1).collect()))
            .filter(|x| g.is_clique(x))
            .collect();
        out.sort();
        out
    }

    fn brute_k_connected(g: &Graph, k: usize) -> bool {
        let n = g.n();
        if n <= k {
            return false;
        }
        (0u32..1 << n).filter(|s| (s.count_ones() as usize) < k).all(|s| {
            let removed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
            g.is_connected_avoiding(&removed)
        })
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(matches!(Graph::new(3, [(1, 1)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(3, [(0, 1), (1, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(Error::InvalidGraph(_))));
        let g = Graph::new(4, [(3, 2), (0, 1), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (2, 3)]);
        assert_eq!(g.edge_index(3, 2), Some(2));
        assert_eq!(g.edge_index(1, 3), None);
    }

    #[test]
    fn clique_examples() {
        assert_eq!(Graph::complete(4).find_cliques(3).len(), 4);
        assert!(Graph::cycle(5).find_cliques(3).is_empty());
        let k5e = Graph::complete(5).without_edge(0);
        let found = k5e.find_cliques(4);
        assert_eq!(found, brute_cliques(&k5e, 4));
        assert_eq!(found.len(), 2);
        assert!(k5e.has_clique(4));
        assert!(!Graph::cycle(5).has_clique(3));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(3, false).unwrap().count(), 8);
        assert_eq!(enumerate_graphs(3, true).unwrap().count(), 4);
        assert_eq!(enumerate_graphs(1, false).unwrap().count(), 1);
        assert_eq!(enumerate_graphs(5, false).unwrap().count(), 1024);
        // Connected labeled graphs, OEIS A001187.
        assert_eq!(enumerate_graphs(4, true).unwrap().count(), 38);
        assert_eq!(enumerate_graphs(5, true).unwrap().count(), 728);
        assert!(matches!(enumerate_graphs(9, false), Err(Error::EnumerationScope(9))));
    }

    #[test]
    fn connectivity_examples() {
        assert!(Graph::cycle(4).is_k_connected(2));
        assert!(!Graph::path(4).is_k_connected(2));
        let k5e = Graph::complete(5).without_edge(3);
        assert!(k5e.is_k_connected(3));
        assert!(brute_k_connected(&k5e, 3));
        assert!(!Graph::complete(3).is_k_connected(3));
        assert!(!Graph::complete(1).is_k_connected(1));
        assert!(Graph::complete(2).is_k_connected(1));
    }

    #[test]
    fn vertex_set_validation() {
        assert!(VertexSet::new(vec![0, 2, 5], 6).is_ok());
        assert!(VertexSet::new(vec![2, 2], 6).is_err());
        assert!(matches!(VertexSet::new(vec![1, 6], 6), Err(Error::IndexOutOfRange { index: 6, bound: 6 })));
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=7).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), 0u64..(1u64 << pairs))
        })
        .prop_map(|(n, mask)| Graph::from_mask(n, mask))
    }

    proptest! {
        #[test]
        fn cliques_match_brute_force(g in small_graph(), k in 1usize..=7) {
            prop_assume!(k <= g.n());
            prop_assert_eq!(g.find_cliques(k), brute_cliques(&g, k));
            prop_assert_eq!(g.has_clique(k), !brute_cliques(&g, k).is_empty());
        }

        #[test]
        fn connectivity_matches_brute_force(g in small_graph(), k in 1usize..=4) {
            prop_assert_eq!(g.is_k_connected(k), brute_k_connected(&g, k));
        }
    }
}
