//! Level distribution of GGB: among `n̂ <= n` draws `Y_i = min(X_i, a)` with
//! `X_i ~ Geo(φ / n^(1/φ))`, some level in `1..=a` should be chosen at least
//! once and at most `(12/φ)·n^(1/φ)·ln n` times, with probability at least
//! `1 - 2/n²`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::stats::Estimate;
use crate::error::{Error, Result};
use crate::protocols::{ggb_params, RngTape, Tape};

/// `(12/φ)·n^(1/φ)·ln n`.
pub fn lemma2_threshold(n: u64, phi: f64) -> f64 {
    12.0 / phi * (n as f64).powf(1.0 / phi) * (n as f64).ln()
}

/// Target success probability `1 - 2/n²`.
pub fn lemma2_target(n: u64) -> f64 {
    1.0 - 2.0 / (n as f64 * n as f64)
}

pub fn lemma2_mc(n: u64, participants: u64, phi: f64, trials: u64, seed: u64) -> Result<Estimate> {
    if participants == 0 || participants > n {
        return Err(Error::invalid(format!(
            "participants must lie in [1, n], got {participants} with n = {n}"
        )));
    }
    // ε only affects the repeat count, which is irrelevant here
    let params = ggb_params(n, phi, 0.5)?;
    let threshold = lemma2_threshold(n, phi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_level = vec![0u64; params.a as usize + 1];
    let mut hits = 0;
    for _ in 0..trials {
        per_level.iter_mut().for_each(|c| *c = 0);
        let mut tape = RngTape(&mut rng);
        for _ in 0..participants {
            let y = tape.geometric(params.continue_prob).min(params.a);
            per_level[y as usize] += 1;
        }
        if per_level[1..]
            .iter()
            .any(|&c| c >= 1 && (c as f64) <= threshold)
        {
            hits += 1;
        }
    }
    Ok(Estimate::new(hits, trials))
}
