//! Distributional checks of the samplers, each at 4σ (or an exact count
//! where the sample space is tiny).

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radiocast::oracle::{lemma2_mc, lemma2_target, lemma2_threshold};
use radiocast::protocols::{balls_into_bins_offset, sample_geo};
use radiocast::topology::{make_random_connected, sample_derangement};

fn within_sigmas(observed: f64, p: f64, draws: f64, sigmas: f64) -> bool {
    (observed - p).abs() <= sigmas * (p * (1.0 - p) / draws).sqrt().max(1.0 / draws)
}

#[test]
fn geometric_tail() {
    let draws = 1_000_000;
    for q in [0.3, 0.7, 0.95] {
        let mut rng = ChaCha8Rng::seed_from_u64((q * 100.0) as u64);
        let mut exceed = [0u64; 21];
        let mut sum = 0u64;
        for _ in 0..draws {
            let x = sample_geo(q, &mut rng).unwrap();
            assert!(x >= 1);
            sum += x;
            for (i, slot) in exceed.iter_mut().enumerate() {
                if x > i as u64 {
                    *slot += 1;
                }
            }
        }
        for (i, &count) in exceed.iter().enumerate() {
            let p = q.powi(i as i32);
            let freq = count as f64 / draws as f64;
            assert!(
                within_sigmas(freq, p, draws as f64, 4.0),
                "q={q} i={i} freq={freq} p={p}"
            );
        }
        // E[X] = 1/(1-q), Var[X] = q/(1-q)²
        let mean = sum as f64 / draws as f64;
        let sd = q.sqrt() / (1.0 - q) / (draws as f64).sqrt();
        assert!(
            (mean - 1.0 / (1.0 - q)).abs() <= 4.0 * sd,
            "q={q} mean={mean}"
        );
    }
}

#[test]
fn geometric_pmf() {
    let q = 0.5;
    let draws = 400_000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for _ in 0..draws {
        *counts.entry(sample_geo(q, &mut rng).unwrap()).or_default() += 1;
    }
    for i in 1..=8u64 {
        let p = (1.0 - q) * q.powi(i as i32 - 1);
        let freq = counts.get(&i).copied().unwrap_or(0) as f64 / draws as f64;
        assert!(within_sigmas(freq, p, draws as f64, 4.0), "i={i}");
    }
}

#[test]
fn balls_into_bins_is_uniform() {
    let k = 13;
    let draws = 260_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts = vec![0u64; k as usize];
    for _ in 0..draws {
        counts[balls_into_bins_offset(k, &mut rng).unwrap() as usize] += 1;
    }
    let p = 1.0 / k as f64;
    for (slot, &c) in counts.iter().enumerate() {
        assert!(
            within_sigmas(c as f64 / draws as f64, p, draws as f64, 4.0),
            "slot {slot}"
        );
    }
}

#[test]
fn derangements_of_three_are_uniform() {
    // exactly two derangements of {0,1,2}
    let draws = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for _ in 0..draws {
        let d = sample_derangement(3, &mut rng).unwrap();
        assert!(d.iter().enumerate().all(|(i, &j)| i != j));
        *counts.entry(d).or_default() += 1;
    }
    assert_eq!(counts.len(), 2);
    for c in counts.values() {
        assert!(within_sigmas(
            *c as f64 / draws as f64,
            0.5,
            draws as f64,
            4.0
        ));
    }
}

#[test]
fn gnp_edge_count() {
    // conditioning on connectivity barely moves the mean at this density
    let (n, p) = (60usize, 0.2);
    let pairs = (n * (n - 1) / 2) as f64;
    let samples = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let total: usize = (0..samples)
        .map(|_| make_random_connected(n, p, &mut rng).unwrap().edge_count())
        .sum();
    let mean = total as f64 / samples as f64;
    let sd = (pairs * p * (1.0 - p) / samples as f64).sqrt();
    assert!((mean - pairs * p).abs() <= 4.0 * sd, "mean edges {mean}");
}

#[test]
fn level_counts_hold_with_high_probability() {
    let n = 1024;
    let est = lemma2_mc(n, n, 2.0, 100_000, 17).unwrap();
    let target = lemma2_target(n);
    assert!(
        est.frequency() >= target - 4.0 * (target * (1.0 - target) / 1e5).sqrt(),
        "frequency {}",
        est.frequency()
    );
    assert!(lemma2_threshold(n, 2.0) > 1.0);
}
