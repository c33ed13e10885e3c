//! Classic Decay broadcast, kept as an energy baseline: `2⌈log n⌉` aligned
//! windows of `2⌈log n⌉` rounds; in each window the station transmits in the
//! first `X` rounds, `X` being the index of the first fair-coin 1 (capped at
//! the window length).

use serde::{Deserialize, Serialize};

use super::params::ceil_log2;
use super::{next_boundary_after, StationSchedule, Tape};
use crate::engine::Round;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayParams {
    pub n: u64,
    pub window: u64,
    pub windows: u64,
}

impl DecayParams {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "decay baseline needs n >= 2, got {n}"
            )));
        }
        let l = 2 * ceil_log2(n);
        Ok(Self {
            n,
            window: l,
            windows: l,
        })
    }
}

pub fn decay_baseline_schedule<T: Tape + ?Sized>(
    params: &DecayParams,
    reception_round: Round,
    tape: &mut T,
) -> StationSchedule {
    let mut start = next_boundary_after(reception_round, params.window);
    let mut rounds = Vec::new();
    for _ in 0..params.windows {
        let mut active = 1;
        while active < params.window && !tape.coin() {
            active += 1;
        }
        rounds.extend((0..active as Round).map(|i| start + i));
        start += params.window as Round;
    }
    StationSchedule::new(reception_round + 1, rounds, start - 1)
}
