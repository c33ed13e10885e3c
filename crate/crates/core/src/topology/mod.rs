//! Undirected connected graphs, the special families used by the lower-bound
//! constructions, and the plain-text edge-list format.

mod edge_list;
mod generators;

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use edge_list::{read_edge_list, write_edge_list};
pub use generators::{
    make_pair_chain, make_path, make_random_connected, make_star_permutation, sample_derangement,
    PairChainLayout, StarPermutationLayout, DEFAULT_RETRY_BUDGET,
};

/// Dense 0-based station index. Node 0 is the originator unless overridden.
pub type NodeId = usize;

/// Undirected, connected, simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    diameter: OnceLock<usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an undirected edge set, rejecting self-loops,
    /// duplicates, out-of-range endpoints and disconnected results.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let graph = Self::from_edges_unchecked(n, edges)?;
        if !graph.is_connected() {
            return Err(Error::Validation(format!(
                "graph on {n} nodes is not connected (node {} unreachable from 0)",
                graph.first_unreachable().unwrap_or(0)
            )));
        }
        Ok(graph)
    }

    /// Same as [`Graph::from_edges`] but without the connectivity check.
    /// Used by generators that test connectivity themselves.
    pub(crate) fn from_edges_unchecked(
        n: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one node"));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) references a node outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!(
                    "duplicate edge ({}, {})",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Graph {
            adjacency,
            edge_count,
            diameter: OnceLock::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.first_unreachable().is_none()
    }

    fn first_unreachable(&self) -> Option<NodeId> {
        let dist = self.raw_bfs(0);
        dist.iter().position(|d| d.is_none())
    }

    fn raw_bfs(&self, src: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Exact hop distances from `src`.
    pub fn bfs_from(&self, src: NodeId) -> Result<Vec<usize>> {
        if src >= self.node_count() {
            return Err(Error::invalid(format!("source {src} out of range")));
        }
        self.raw_bfs(src)
            .into_iter()
            .enumerate()
            .map(|(v, d)| {
                d.ok_or_else(|| Error::Validation(format!("node {v} unreachable from {src}")))
            })
            .collect()
    }

    /// Exact diameter via all-pairs BFS; cached after the first call.
    pub fn diameter(&self) -> Result<usize> {
        if let Some(&d) = self.diameter.get() {
            return Ok(d);
        }
        let mut best = 0;
        for src in 0..self.node_count() {
            let ecc = self.bfs_from(src)?.into_iter().max().unwrap_or(0);
            best = best.max(ecc);
        }
        Ok(*self.diameter.get_or_init(|| best))
    }

    /// Re-checks the structural invariants: symmetry, simplicity, connectivity.
    pub fn validate(&self) -> Result<()> {
        for (u, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!(
                    "adjacency of {u} is not strictly sorted"
                )));
            }
            for &v in list {
                if v == u {
                    return Err(Error::Validation(format!("self-loop at node {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Validation(format!(
                        "edge ({u}, {v}) is not symmetric"
                    )));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::Validation("graph is not connected".into()));
        }
        Ok(())
    }
}
