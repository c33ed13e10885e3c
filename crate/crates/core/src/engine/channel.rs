use crate::topology::{Graph, NodeId};

/// What a station does in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundAction {
    Transmit,
    Listen,
}

/// Channel feedback. Without collision detection a collision is
/// indistinguishable from silence, so both map to `Nothing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feedback {
    Received,
    Nothing,
}

/// Per-node feedback for one round: `v` receives iff it listens and exactly
/// one of its neighbors transmits.
pub fn resolve_round(graph: &Graph, transmitters: &[NodeId]) -> Vec<Feedback> {
    let mut resolver = ChannelResolver::new(graph.node_count());
    let mut feedback = vec![Feedback::Nothing; graph.node_count()];
    for v in resolver.resolve(graph, transmitters).received {
        feedback[v] = Feedback::Received;
    }
    feedback
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub(crate) struct RoundOutcome {
    pub received: Vec<NodeId>,
    /// Some listening node had two or more transmitting neighbors.
    pub collided: bool,
}

/// Sparse resolver with reusable scratch buffers; cost is proportional to
/// the total degree of the transmitters.
#[derive(Debug)]
pub(crate) struct ChannelResolver {
    hits: Vec<u32>,
    transmitting: Vec<bool>,
    touched: Vec<NodeId>,
}

impl ChannelResolver {
    pub fn new(n: usize) -> Self {
        Self {
            hits: vec![0; n],
            transmitting: vec![false; n],
            touched: Vec::new(),
        }
    }

    pub fn resolve(&mut self, graph: &Graph, transmitters: &[NodeId]) -> RoundOutcome {
        for &t in transmitters {
            self.transmitting[t] = true;
        }
        for &t in transmitters {
            for &w in graph.neighbors(t) {
                if self.hits[w] == 0 {
                    self.touched.push(w);
                }
                self.hits[w] += 1;
            }
        }
        let mut outcome = RoundOutcome::default();
        self.touched.sort_unstable();
        for &w in &self.touched {
            if !self.transmitting[w] {
                match self.hits[w] {
                    1 => outcome.received.push(w),
                    _ => outcome.collided = true,
                }
            }
            self.hits[w] = 0;
        }
        self.touched.clear();
        for &t in transmitters {
            self.transmitting[t] = false;
        }
        outcome
    }
}
