//! Balls-into-Bins Broadcast with energy parameter φ and failure budget ε.
//!
//! Each of `repeats` iterations waits for the next phase boundary
//! (a multiple of `t_ph = a·k`), draws a level `x ~ Geo(φ / n^(1/φ))`, skips
//! `(min(x, a) - 1)·k` rounds and transmits once at a uniform offset of the
//! following `k`-round slot. Energy is therefore exactly `repeats`.

use serde::{Deserialize, Serialize};

use super::params::{ceil_guarded, ceil_root};
use super::{next_boundary_after, StationSchedule, Tape};
use crate::engine::Round;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GgbParams {
    pub n: u64,
    pub phi: f64,
    pub eps: f64,
    /// Number of levels a phase is split into.
    pub a: u64,
    /// Balls-into-Bins slot length, `24⌈n^(1/φ)⌉ + 1`.
    pub k: u64,
    /// Phase length `a·k`.
    pub t_ph: u64,
    /// Iterations, hence transmissions, per station.
    pub repeats: u64,
    /// Continue probability `φ / n^(1/φ)` of the level draw.
    pub continue_prob: f64,
}

/// Computes the GGB constants.
///
/// Hard errors: `n < 4`, `φ < 1`, `ε ∉ (0, 1)`, or `φ·log φ >= log n` (the
/// level count `a` is then undefined). Values of φ outside the range where the
/// time analysis applies are accepted; see [`GgbParams::range_notes`].
pub fn ggb_params(n: u64, phi: f64, eps: f64) -> Result<GgbParams> {
    if n < 4 {
        return Err(Error::invalid(format!("ggb needs n >= 4, got {n}")));
    }
    if !phi.is_finite() || phi < 1.0 {
        return Err(Error::invalid(format!("phi must be >= 1, got {phi}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let log_n = (n as f64).log2();
    let denom = log_n - phi * phi.log2();
    if denom <= 0.0 {
        return Err(Error::invalid(format!(
            "phi = {phi} too large for n = {n}: phi·log(phi) must stay below log n"
        )));
    }
    let a = ceil_guarded(phi * log_n / denom);
    let root = ceil_root(n, phi);
    let k = 24 * root + 1;
    let repeats = ceil_guarded(phi * (1.0 + (2.0 / eps).log2() / log_n)).max(1);
    let continue_prob = phi / (n as f64).powf(1.0 / phi);
    Ok(GgbParams {
        n,
        phi,
        eps,
        a,
        k,
        t_ph: a * k,
        repeats,
        continue_prob,
    })
}

impl GgbParams {
    /// `log n / log log n`, the open upper end of the φ range covered by the
    /// level-distribution guarantee.
    pub fn phi_limit(&self) -> f64 {
        let log_n = (self.n as f64).log2();
        log_n / log_n.log2()
    }

    /// Human-readable warnings when φ lies outside the analysed ranges.
    pub fn range_notes(&self) -> Vec<String> {
        let limit = self.phi_limit();
        let mut notes = Vec::new();
        if self.phi >= limit {
            notes.push(format!(
                "phi = {} is not below log n / log log n = {limit:.4}; the level-distribution guarantee does not apply",
                self.phi
            ));
        } else if self.phi > limit / 2.0 {
            notes.push(format!(
                "phi = {} exceeds log n / (2 log log n) = {:.4}; the time bound is no longer O((D+phi)·n^(1/phi)·phi)",
                self.phi,
                limit / 2.0
            ));
        }
        notes
    }
}

pub fn ggb_build_schedule<T: Tape + ?Sized>(
    params: &GgbParams,
    reception_round: Round,
    tape: &mut T,
) -> StationSchedule {
    let k = params.k as Round;
    let mut position = reception_round;
    let mut rounds = Vec::with_capacity(params.repeats as usize);
    for _ in 0..params.repeats {
        let phase_start = next_boundary_after(position, params.t_ph);
        let level = tape.geometric(params.continue_prob).min(params.a) as Round;
        let slot = phase_start + (level - 1) * k;
        rounds.push(slot + tape.uniform_below(params.k) as Round);
        position = slot + k - 1;
    }
    StationSchedule::new(reception_round + 1, rounds, position)
}
