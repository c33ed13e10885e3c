//! Balls-into-Bins failure bound: with `k = 24⌈n^(1/φ)⌉ + 1` slots and any
//! `1 <= m <= (12/φ)·n^(1/φ)·ln n` participants, the probability that no slot
//! is chosen by exactly one participant is at most `1 / (2 n^(1/φ))`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::occupancy::{p_no_singleton_table, DEFAULT_DP_BUDGET};
use super::stats::Estimate;
use crate::error::{Error, Result};
use crate::protocols::params::{ceil_guarded, ceil_int_root, ceil_root};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Lemma1Method {
    Exact,
    /// Budget exceeded; each `m` checked by Monte Carlo, passing when the
    /// upper Wilson bound at `confidence` stays under the bound.
    MonteCarlo {
        trials: u64,
        confidence: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub n: u64,
    pub phi: f64,
    pub k: u64,
    pub m_max: u64,
    pub bound: f64,
    /// Largest `P(no singleton) / bound` over `m`, and where it occurs.
    pub max_ratio: f64,
    pub worst_m: u64,
    /// Values of `m` where the bound failed.
    pub failures: Vec<u64>,
    pub method: Lemma1Method,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `(k, m_max, n^(1/φ))` for the given `n` and `φ`.
pub fn lemma1_sizes(n: u64, phi: f64) -> Result<(u64, u64, f64)> {
    if n < 2 {
        return Err(Error::invalid(format!("lemma check needs n >= 2, got {n}")));
    }
    if !phi.is_finite() || phi < 1.0 {
        return Err(Error::invalid(format!("phi must be >= 1, got {phi}")));
    }
    let root = integral_root(n, phi).map_or_else(|| (n as f64).powf(1.0 / phi), |r| r as f64);
    let k = 24 * ceil_root(n, phi) + 1;
    let m_max = ceil_guarded(12.0 / phi * root * (n as f64).ln());
    Ok((k, m_max, root))
}

/// `n^(1/φ)` as an exact integer, when it is one.
fn integral_root(n: u64, phi: f64) -> Option<u64> {
    if phi.fract() != 0.0 {
        return None;
    }
    let r = ceil_int_root(n, phi as u32);
    (u128::from(r).checked_pow(phi as u32) == Some(u128::from(n))).then_some(r)
}

pub fn check_lemma1(n: u64, phi: f64) -> Result<Lemma1Report> {
    check_lemma1_with(n, phi, DEFAULT_DP_BUDGET, 20_000, 0x1e44a1)
}

/// Exact check when the DP fits `budget`, otherwise Monte Carlo with
/// `mc_trials` per value of `m`.
pub fn check_lemma1_with(
    n: u64,
    phi: f64,
    budget: u128,
    mc_trials: u64,
    seed: u64,
) -> Result<Lemma1Report> {
    let (k, m_max, root) = lemma1_sizes(n, phi)?;
    let bound = 1.0 / (2.0 * root);
    let mut report = Lemma1Report {
        n,
        phi,
        k,
        m_max,
        bound,
        max_ratio: 0.0,
        worst_m: 1,
        failures: Vec::new(),
        method: Lemma1Method::Exact,
    };
    match p_no_singleton_table(m_max as usize, k as usize, budget) {
        Ok(table) => {
            let exact_root = integral_root(n, phi);
            for m in 1..=m_max {
                let p = &table[m as usize];
                let pass = match exact_root {
                    Some(r) => p.le_ratio(&BigUint::from(1u32), &BigUint::from(2 * r)),
                    None => p.to_f64() <= bound,
                };
                report.record(m, p.to_f64(), pass);
            }
        }
        Err(Error::Resource(_)) => {
            report.method = Lemma1Method::MonteCarlo {
                trials: mc_trials,
                confidence: 0.99,
            };
            for m in 1..=m_max {
                let est = p_no_singleton_mc(m as usize, k as usize, mc_trials, seed ^ m);
                report.record(m, est.frequency(), est.upper() <= bound);
            }
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

impl Lemma1Report {
    fn record(&mut self, m: u64, p: f64, pass: bool) {
        let ratio = p / self.bound;
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.worst_m = m;
        }
        if !pass {
            self.failures.push(m);
        }
    }
}

/// Monte-Carlo estimate of `P(no bin holds exactly one ball)`.
pub fn p_no_singleton_mc(balls: usize, bins: usize, trials: u64, seed: u64) -> Estimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut load = vec![0u32; bins];
    let mut hits = 0;
    for _ in 0..trials {
        load.iter_mut().for_each(|c| *c = 0);
        for _ in 0..balls {
            load[rng.gen_range(0..bins)] += 1;
        }
        if !load.contains(&1) {
            hits += 1;
        }
    }
    Estimate::new(hits, trials)
}
