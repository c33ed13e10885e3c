//! Green-Decay Broadcast.
//!
//! Time is cut into phase windows of `3k` rounds; window `w` has phase index
//! `w mod ll`, and `ll` consecutive windows starting at index 0 form an epoch.
//! Each window has three `k`-round sub-slots A, B, C:
//!
//! * a station in state `new` (its first window, unless that window has index
//!   0) runs Balls-into-Bins in A, then turns `normal` and samples `my_phase`;
//! * a `normal` station in an index-0 window runs Balls-into-Bins in B and
//!   re-samples `my_phase`;
//! * any station whose `my_phase` equals the window index runs Green-Decay in C.

use serde::{Deserialize, Serialize};

use super::green_decay::green_decay_offsets;
use super::params::{ceil_guarded, ceil_log2};
use super::{next_boundary_after, StationSchedule, Tape};
use crate::engine::Round;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbParams {
    pub n: u64,
    /// Phases per epoch, `⌈log log n⌉`.
    pub ll: u64,
    /// Sub-slot length, `24⌈log n⌉ + 1`.
    pub k: u64,
    /// Phase window length `3k`.
    pub t_ph: u64,
    /// Phase windows executed per station, `2⌈log n⌉ + 2`.
    pub repeats: u64,
}

pub fn gb_params(n: u64) -> Result<GbParams> {
    if n < 4 {
        return Err(Error::invalid(format!("gb needs n >= 4, got {n}")));
    }
    let ceil_log_n = ceil_log2(n);
    let ll = ceil_guarded((n as f64).log2().log2()).max(1);
    let k = 24 * ceil_log_n + 1;
    Ok(GbParams {
        n,
        ll,
        k,
        t_ph: 3 * k,
        repeats: 2 * ceil_log_n + 2,
    })
}

impl GbParams {
    /// Hard per-station cap: at most one Balls-into-Bins and one Green-Decay
    /// (two transmissions) per epoch touched, plus the joining phase.
    pub fn energy_cap(&self) -> u64 {
        1 + 3 * (self.repeats.div_ceil(self.ll) + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    New,
    Normal,
}

pub fn gb_build_schedule<T: Tape + ?Sized>(
    params: &GbParams,
    reception_round: Round,
    tape: &mut T,
) -> StationSchedule {
    let k = params.k as Round;
    let mut position = reception_round;
    let mut state = State::New;
    let mut my_phase = 0;
    let mut rounds = Vec::new();
    for _ in 0..params.repeats {
        let start = next_boundary_after(position, params.t_ph);
        let phase = (start / params.t_ph as Round) as u64 % params.ll;
        if phase == 0 && state == State::New {
            state = State::Normal;
        }
        if state == State::New {
            rounds.push(start + tape.uniform_below(params.k) as Round);
        } else if phase == 0 {
            rounds.push(start + k + tape.uniform_below(params.k) as Round);
        }
        if phase == 0 || state == State::New {
            state = State::Normal;
            my_phase = tape.uniform_below(params.ll);
        }
        if phase == my_phase {
            let slot_c = start + 2 * k;
            rounds.extend(
                green_decay_offsets(params.k, tape)
                    .into_iter()
                    .map(|o| slot_c + o as Round),
            );
        }
        position = start + 3 * k - 1;
    }
    StationSchedule::new(reception_round + 1, rounds, position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{RngTape, ScriptedTape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn params_n32() {
        let p = gb_params(32).unwrap();
        assert_eq!((p.ll, p.k, p.t_ph, p.repeats), (3, 121, 363, 12));
    }

    #[test]
    fn params_n_2_16() {
        let p = gb_params(1 << 16).unwrap();
        assert_eq!((p.ll, p.k, p.t_ph, p.repeats), (4, 385, 1155, 34));
    }

    #[test]
    fn params_reject_small_n() {
        assert!(gb_params(3).is_err());
        assert_eq!(gb_params(4).unwrap().ll, 1);
    }

    #[test]
    fn joining_at_phase_zero_skips_sub_slot_a() {
        let p = gb_params(32).unwrap();
        // origin joins window 0 (phase 0): BiB in B at offset 7; my_phase = 2
        let mut tape = ScriptedTape::new()
            .uniforms([7, 2])
            .uniform_fallback(0)
            .coin_fallback(false);
        let s = gb_build_schedule(&p, -1, &mut tape);
        let k = p.k as Round;
        let first_window: Vec<_> = s.transmit_rounds().iter().filter(|&&r| r < 3 * k).collect();
        assert_eq!(first_window, vec![&(k + 7)]);
    }

    #[test]
    fn joining_mid_epoch_uses_sub_slot_a_once() {
        let p = gb_params(32).unwrap();
        let k = p.k as Round;
        // informed during window 1 (phase 1): next window is 2 (phase 2)
        let reception = 3 * k + 5;
        let mut tape = ScriptedTape::new()
            .uniforms([4, 2])
            .uniform_fallback(1)
            .coin_fallback(false);
        let s = gb_build_schedule(&p, reception, &mut tape);
        let w2 = 2 * 3 * k;
        // BiB in A of window 2, and my_phase = 2 gives Green-Decay in C of window 2
        assert_eq!(&s.transmit_rounds()[..2], &[w2 + 4, w2 + 2 * k]);
        // window 3 is phase 0: normal BiB in B
        let w3 = 3 * 3 * k;
        assert_eq!(s.transmit_rounds()[2], w3 + k + 1);
    }

    #[test]
    fn my_phase_sampled_at_join_and_each_epoch_start() {
        let p = gb_params(32).unwrap();
        let k = p.k as Round;
        for reception in [-1, 5, 3 * k + 1, 6 * k + 7, 8 * k] {
            let mut tape = ScriptedTape::new().uniform_fallback(0).coin_fallback(true);
            let s = gb_build_schedule(&p, reception, &mut tape);
            let first = next_boundary_after(reception, p.t_ph) / p.t_ph as Round;
            let windows = first..first + p.repeats as Round;
            let epoch_starts = windows.clone().filter(|w| (*w as u64).is_multiple_of(p.ll)).count();
            let joined_mid_epoch = !(first as u64).is_multiple_of(p.ll);
            let phase_draws = tape.uniform_calls.iter().filter(|&&b| b == p.ll).count();
            assert_eq!(phase_draws, epoch_starts + usize::from(joined_mid_epoch));
            assert!(s.energy() <= p.energy_cap());
        }
    }

    #[test]
    fn energy_cap_holds_for_random_tapes() {
        for n in [4u64, 32, 1024] {
            let p = gb_params(n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n);
            for reception in (-1..(4 * p.ll as Round * p.t_ph as Round)).step_by(37) {
                let s = gb_build_schedule(&p, reception, &mut RngTape(&mut rng));
                assert!(s.energy() <= p.energy_cap(), "n={n} energy={}", s.energy());
                assert!(s.transmit_rounds()[0] > reception);
            }
        }
    }
}
