//! Synchronous round simulator for the collision channel without collision
//! detection. Energy counts transmit rounds only; listening is free.
//!
//! Stations are oblivious once informed: at its reception round a station
//! fixes its entire transmit schedule from its private random stream, so the
//! engine only needs the schedules of informed stations. Rounds in which no
//! station transmits cannot inform anyone and are skipped unless
//! [`TrialOptions::skip_idle`] is off.

mod channel;
mod rng;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use channel::{resolve_round, Feedback, RoundAction};
pub use rng::{derive_rng, StationRng};

use crate::error::{Error, Result};
use crate::protocols::StationSchedule;
use crate::topology::{Graph, NodeId};
use channel::ChannelResolver;

/// Round number. The originator is informed at round -1; round 0 is the
/// first round anyone can act in.
pub type Round = i64;

/// Round at which the originator holds the message.
pub const ORIGIN_RECEPTION: Round = -1;

/// Behavior of an informed station, expressed as the schedule it commits to
/// when it first receives the message.
pub trait StationProtocol: Send + Sync {
    /// Schedule of a station informed at `reception_round`. Every transmit
    /// round must be strictly later than `reception_round`.
    fn build_schedule(&self, reception_round: Round, rng: &mut StationRng) -> StationSchedule;
}

impl<P: StationProtocol + ?Sized> StationProtocol for &P {
    fn build_schedule(&self, reception_round: Round, rng: &mut StationRng) -> StationSchedule {
        (**self).build_schedule(reception_round, rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOptions {
    /// Rounds `>= max_rounds` are never executed.
    pub max_rounds: Round,
    pub skip_idle: bool,
    pub trace: bool,
}

impl TrialOptions {
    pub fn new(max_rounds: Round) -> Self {
        Self {
            max_rounds,
            skip_idle: true,
            trace: false,
        }
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_skip_idle(mut self, skip_idle: bool) -> Self {
        self.skip_idle = skip_idle;
        self
    }
}

/// One non-idle round of the trace log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub round: Round,
    pub transmitters: Vec<NodeId>,
    pub newly_informed: Vec<NodeId>,
}

fn join_ids(ids: &[NodeId]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for TraceEntry {
    /// `round=<r> tx=<ids> new=<ids>`, with `-` for an empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round={} tx={} new={}",
            self.round,
            join_ids(&self.transmitters),
            join_ids(&self.newly_informed)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    /// Reception round per node; `Some(-1)` for the originator, `None` if never informed.
    pub reception_round: Vec<Option<Round>>,
    /// Transmit rounds per node, collided transmissions included.
    pub energy: Vec<u64>,
    /// Round in which the last node was informed (0 when nobody had to be).
    pub completion_round: Option<Round>,
    /// Last round of the last station to finish; `None` if the horizon cut schedules short.
    pub termination_round: Option<Round>,
    pub success: bool,
    /// Rounds in which some listener heard two or more transmitters.
    pub collision_rounds: u64,
    pub trace: Option<Vec<TraceEntry>>,
}

impl TrialResult {
    pub fn max_energy(&self) -> u64 {
        self.energy.iter().copied().max().unwrap_or(0)
    }

    pub fn mean_energy(&self) -> f64 {
        if self.energy.is_empty() {
            return 0.0;
        }
        self.energy.iter().sum::<u64>() as f64 / self.energy.len() as f64
    }

    pub fn informed_count(&self) -> usize {
        self.reception_round.iter().filter(|r| r.is_some()).count()
    }
}

/// Runs one broadcast from `origin`. Station `v` draws its schedule from
/// [`derive_rng`]`(seed, v)`.
///
/// Running out of rounds is not an error: the result has `success == false`.
///
/// # Panics
///
/// If the protocol schedules a transmission at or before its reception round.
pub fn run_trial<P: StationProtocol + ?Sized>(
    graph: &Graph,
    protocol: &P,
    origin: NodeId,
    seed: u64,
    options: TrialOptions,
) -> Result<TrialResult> {
    let n = graph.node_count();
    if origin >= n {
        return Err(Error::invalid(format!("origin {origin} outside [0, {n})")));
    }
    if options.max_rounds < 1 {
        return Err(Error::invalid("max_rounds must be at least 1"));
    }

    let mut reception: Vec<Option<Round>> = vec![None; n];
    let mut energy = vec![0u64; n];
    reception[origin] = Some(ORIGIN_RECEPTION);

    // Nobody to inform: the station knows n = 1 and has nothing to do.
    if n == 1 {
        return Ok(TrialResult {
            reception_round: reception,
            energy,
            completion_round: Some(0),
            termination_round: Some(0),
            success: true,
            collision_rounds: 0,
            trace: options.trace.then(Vec::new),
        });
    }

    let mut pending: BinaryHeap<Reverse<(Round, NodeId)>> = BinaryHeap::new();
    let mut last_finish = ORIGIN_RECEPTION;
    let mut activate = |v: NodeId,
                        at: Round,
                        pending: &mut BinaryHeap<Reverse<(Round, NodeId)>>| {
        let mut rng = derive_rng(seed, v);
        let schedule = protocol.build_schedule(at, &mut rng);
        if let Some(&first) = schedule.transmit_rounds().first() {
            assert!(
                first > at,
                "protocol scheduled node {v} to transmit in round {first}, not after its reception round {at}"
            );
        }
        last_finish = last_finish.max(schedule.finish_round());
        pending.extend(schedule.transmit_rounds().iter().map(|&r| Reverse((r, v))));
    };
    activate(origin, ORIGIN_RECEPTION, &mut pending);

    let mut resolver = ChannelResolver::new(n);
    let mut informed = 1;
    let mut collision_rounds = 0;
    let mut trace = options.trace.then(Vec::new);
    let mut transmitters = Vec::new();
    let mut clock: Round = 0;
    let exhausted = loop {
        let Some(&Reverse((next, _))) = pending.peek() else {
            break true;
        };
        let round = if options.skip_idle { next } else { clock };
        if round >= options.max_rounds {
            break false;
        }
        clock = round + 1;

        transmitters.clear();
        while let Some(&Reverse((r, v))) = pending.peek() {
            if r != round {
                break;
            }
            pending.pop();
            transmitters.push(v);
        }
        for &v in &transmitters {
            assert!(
                matches!(reception[v], Some(r) if r < round),
                "uninformed node {v} transmitted in round {round}"
            );
            energy[v] += 1;
        }

        let outcome = resolver.resolve(graph, &transmitters);
        if outcome.collided {
            collision_rounds += 1;
        }
        let mut newly = Vec::new();
        for v in outcome.received {
            if reception[v].is_none() {
                reception[v] = Some(round);
                informed += 1;
                newly.push(v);
            }
        }
        for &v in &newly {
            activate(v, round, &mut pending);
        }
        if let Some(trace) = trace.as_mut() {
            if !transmitters.is_empty() {
                trace.push(TraceEntry {
                    round,
                    transmitters: transmitters.clone(),
                    newly_informed: newly,
                });
            }
        }
    };

    let success = informed == n;
    let completion_round = success.then(|| {
        reception
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
            .max(0)
    });
    Ok(TrialResult {
        reception_round: reception,
        energy,
        completion_round,
        termination_round: exhausted.then_some(last_finish),
        success,
        collision_rounds,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::FixedPattern;
    use crate::topology::{make_path, make_star_permutation, StarPermutationLayout};
    use rand::SeedableRng;

    #[test]
    fn single_node_is_trivially_complete() {
        let g = make_path(1).unwrap();
        let r = run_trial(
            &g,
            &FixedPattern::new(vec![0, 3]),
            0,
            1,
            TrialOptions::new(100),
        )
        .unwrap();
        assert!(r.success);
        assert_eq!(r.completion_round, Some(0));
        assert_eq!(r.energy, vec![0]);
    }

    #[test]
    fn k2_first_transmission_informs() {
        let g = make_path(2).unwrap();
        for offset in [0, 4, 17] {
            let p = FixedPattern::new(vec![offset]);
            let r = run_trial(&g, &p, 0, 5, TrialOptions::new(1000)).unwrap();
            assert_eq!(r.reception_round[1], Some(offset as Round));
            assert_eq!(r.completion_round, Some(offset as Round));
            assert!(r.success);
        }
    }

    #[test]
    fn path_relays_hop_by_hop() {
        let g = make_path(4).unwrap();
        let r = run_trial(
            &g,
            &FixedPattern::new(vec![0]),
            0,
            1,
            TrialOptions::new(100),
        )
        .unwrap();
        assert_eq!(r.reception_round, vec![Some(-1), Some(0), Some(1), Some(2)]);
        assert_eq!(r.energy, vec![1, 1, 1, 1]);
        assert_eq!(r.termination_round, Some(3));
    }

    #[test]
    fn horizon_yields_failure_value() {
        let g = make_path(4).unwrap();
        let r = run_trial(&g, &FixedPattern::new(vec![0]), 0, 1, TrialOptions::new(2)).unwrap();
        assert!(!r.success);
        assert_eq!(r.completion_round, None);
        assert_eq!(r.termination_round, None);
        assert_eq!(r.reception_round[3], None);
    }

    #[test]
    fn identical_patterns_cannot_break_symmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g = make_star_permutation(7, &mut rng).unwrap();
        let layout = StarPermutationLayout::new(7).unwrap();
        let r = run_trial(
            &g,
            &FixedPattern::new(vec![0, 2]),
            0,
            1,
            TrialOptions::new(100),
        )
        .unwrap();
        for s in layout.s_nodes() {
            assert_eq!(r.reception_round[s], Some(0));
        }
        for x in layout.x_nodes() {
            assert_eq!(r.reception_round[x], None);
        }
        assert!(!r.success);
        assert!(r.collision_rounds > 0);
    }

    struct Eager;

    impl StationProtocol for Eager {
        fn build_schedule(&self, reception_round: Round, _: &mut StationRng) -> StationSchedule {
            StationSchedule::new(reception_round, vec![reception_round], reception_round)
        }
    }

    #[test]
    #[should_panic(expected = "not after its reception round")]
    fn transmitting_in_reception_round_is_a_bug() {
        let g = make_path(3).unwrap();
        let _ = run_trial(&g, &Eager, 0, 1, TrialOptions::new(10));
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = make_path(3).unwrap();
        let p = FixedPattern::new(vec![0]);
        assert!(run_trial(&g, &p, 3, 1, TrialOptions::new(10)).is_err());
        assert!(run_trial(&g, &p, 0, 1, TrialOptions::new(0)).is_err());
    }

    #[test]
    fn trace_lines() {
        let g = make_path(3).unwrap();
        let r = run_trial(
            &g,
            &FixedPattern::new(vec![0]),
            0,
            1,
            TrialOptions::new(10).with_trace(true),
        )
        .unwrap();
        let lines: Vec<String> = r.trace.unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(
            lines,
            [
                "round=0 tx=0 new=1",
                "round=1 tx=1 new=2",
                "round=2 tx=2 new=-"
            ]
        );
    }
}
