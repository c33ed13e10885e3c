//! Success probability of one Green-Decay(k) run among `n` participants
//! sharing a listening neighbor: the neighbor is informed iff some round of
//! the slot has exactly one transmitter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::stats::Estimate;
use crate::harness::derive_seed;
use crate::protocols::{green_decay_offsets, RngTape};

const SHARD: u64 = 4096;

/// Monte-Carlo frequency with a 99% Wilson interval. Trials are split into
/// fixed-size shards seeded by `derive_seed(seed, shard)`, so the result does
/// not depend on the worker count.
pub fn green_decay_success_mc(participants: usize, k: u64, trials: u64, seed: u64) -> Estimate {
    assert!(k >= 2, "green-decay needs k >= 2");
    let shards = trials.div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = SHARD.min(trials - shard * SHARD);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, shard));
            let mut per_offset = vec![0u32; k as usize];
            let mut hits = 0;
            for _ in 0..count {
                per_offset.iter_mut().for_each(|c| *c = 0);
                for _ in 0..participants {
                    for o in green_decay_offsets(k, &mut RngTape(&mut rng)) {
                        per_offset[o as usize] += 1;
                    }
                }
                if per_offset.contains(&1) {
                    hits += 1;
                }
            }
            Estimate::new(hits, count)
        })
        .reduce(|| Estimate::new(0, 0), Estimate::merge)
}

/// Exact success probability.
///
/// Everybody transmits at offset 0. A participant still silent before offset
/// `i >= 1` transmits there (and stops) with probability 1/2 independently of
/// the past, so the number of participants still silent is a Markov chain in
/// which `Binomial(r, 1/2)` of the `r` remaining stop at each offset. The
/// neighbor fails iff no offset sees exactly one stopper.
pub fn green_decay_success_exact(participants: usize, k: u64) -> f64 {
    assert!(k >= 2, "green-decay needs k >= 2");
    if participants == 0 {
        return 0.0;
    }
    if participants == 1 {
        return 1.0;
    }
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=participants).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    let pmf = |r: usize, c: usize| {
        (ln_fact[r] - ln_fact[c] - ln_fact[r - c] - r as f64 * std::f64::consts::LN_2).exp()
    };
    // mass of "no singleton yet" paths, by number still silent
    let mut alive = vec![0.0; participants + 1];
    alive[participants] = 1.0;
    for _ in 1..k {
        let mut next = vec![0.0; participants + 1];
        for (r, &mass) in alive.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for c in (0..=r).filter(|&c| c != 1) {
                next[r - c] += mass * pmf(r, c);
            }
        }
        alive = next;
    }
    1.0 - alive.iter().sum::<f64>()
}
