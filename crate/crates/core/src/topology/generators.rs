use rand::seq::SliceRandom;
use rand::Rng;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Rejection attempts allowed when conditioning G(n, p) on connectivity.
pub const DEFAULT_RETRY_BUDGET: usize = 1000;

/// Path 0 - 1 - ... - (n-1).
pub fn make_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("path needs n >= 1"));
    }
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Erdős–Rényi G(n, p) conditioned on connectivity by rejection.
pub fn make_random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    make_random_connected_with_budget(n, p, rng, DEFAULT_RETRY_BUDGET)
}

pub fn make_random_connected_with_budget<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
    retry_budget: usize,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("G(n,p) needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    for _ in 0..retry_budget.max(1) {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges_unchecked(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailure {
        attempts: retry_budget.max(1),
        reason: format!("G({n}, {p}) never came out connected; p is too small for n"),
    })
}

/// Uniform fixed-point-free permutation of `0..m`, by rejection.
pub fn sample_derangement<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Vec<usize>> {
    if m < 2 {
        return Err(Error::invalid(format!("no derangement of size {m}")));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        perm.shuffle(rng);
        if perm.iter().enumerate().all(|(i, &p)| i != p) {
            return Ok(perm);
        }
    }
}

/// Node numbering of the star-permutation family on `n` nodes: the hub is 0,
/// `s_i = i` and `x_i = half + i` for `i` in `1..=half`, `half = (n-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarPermutationLayout {
    pub half: usize,
}

impl StarPermutationLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) || n < 5 {
            return Err(Error::invalid(format!(
                "star-permutation graph needs odd n with (n-1)/2 >= 2, got {n}"
            )));
        }
        Ok(Self { half: (n - 1) / 2 })
    }

    pub const HUB: NodeId = 0;

    /// `i` in `1..=half`.
    pub fn s(&self, i: usize) -> NodeId {
        i
    }

    /// `i` in `1..=half`.
    pub fn x(&self, i: usize) -> NodeId {
        self.half + i
    }

    pub fn s_nodes(&self) -> std::ops::RangeInclusive<NodeId> {
        1..=self.half
    }

    pub fn x_nodes(&self) -> std::ops::RangeInclusive<NodeId> {
        self.half + 1..=2 * self.half
    }
}

/// Lower-bound family G_π: hub joined to every s-node, and each x_i joined to
/// s_i and s_π(i) for a uniformly sampled derangement π.
pub fn make_star_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph> {
    let layout = StarPermutationLayout::new(n)?;
    let pi = sample_derangement(layout.half, rng)?;
    let mut edges = Vec::with_capacity(3 * layout.half);
    for i in 1..=layout.half {
        edges.push((StarPermutationLayout::HUB, layout.s(i)));
        edges.push((layout.s(i), layout.x(i)));
        edges.push((layout.x(i), layout.s(pi[i - 1] + 1)));
    }
    Graph::from_edges(n, edges)
}

/// Node numbering of the pair chain: `c_i = 3i`, and for segment `i` in
/// `1..=segments`, `x_i = 3i - 2`, `y_i = 3i - 1`. The originator is `c_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairChainLayout {
    pub segments: usize,
}

impl PairChainLayout {
    pub fn c(&self, i: usize) -> NodeId {
        3 * i
    }

    pub fn x(&self, i: usize) -> NodeId {
        3 * i - 2
    }

    pub fn y(&self, i: usize) -> NodeId {
        3 * i - 1
    }

    pub fn node_count(&self) -> usize {
        3 * self.segments + 1
    }
}

/// Chain c_0 .. c_segments where each consecutive pair of c-nodes is bridged by
/// two parallel relays x_i, y_i (not adjacent to each other).
///
/// The gadget is a reconstruction: only its role in the two-energy lower
/// bound is known, namely symmetric relay pairs sharing a downstream c-node.
pub fn make_pair_chain(segments: usize) -> Result<Graph> {
    if segments == 0 {
        return Err(Error::invalid("pair chain needs at least one segment"));
    }
    let layout = PairChainLayout { segments };
    let mut edges = Vec::with_capacity(4 * segments);
    for i in 1..=segments {
        for relay in [layout.x(i), layout.y(i)] {
            edges.push((layout.c(i - 1), relay));
            edges.push((relay, layout.c(i)));
        }
    }
    Graph::from_edges(layout.node_count(), edges)
}
