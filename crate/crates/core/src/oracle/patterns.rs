//! Counting broadcasting patterns: a station active for `T` rounds with at
//! most `E` transmissions has `α(T, E) = Σ_{i=0}^{E} C(T, i)` possible
//! patterns, and `α(T, E) <= (eT/E)^E` for `E >= 1`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Relative slack granted to the floating-point bound.
pub const BOUND_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PatternCount {
    pub alpha: BigUint,
    /// `(eT/E)^E`; `None` when `E = 0`.
    pub bound: Option<f64>,
}

impl PatternCount {
    /// `α <= bound·(1 + 1e-9)`; vacuously true when `E = 0`.
    pub fn within_bound(&self) -> bool {
        match self.bound {
            Some(b) => self.alpha.to_f64().unwrap_or(f64::INFINITY) <= b * (1.0 + BOUND_GUARD),
            None => true,
        }
    }
}

pub fn pattern_count(rounds: u64, max_tx: u64) -> Result<PatternCount> {
    if max_tx > rounds {
        return Err(Error::invalid(format!(
            "need E <= T, got E = {max_tx}, T = {rounds}"
        )));
    }
    let mut alpha = BigUint::one();
    let mut binom = BigUint::one();
    for i in 1..=max_tx {
        binom = binom * BigUint::from(rounds - i + 1) / BigUint::from(i);
        alpha += &binom;
    }
    let bound = (max_tx > 0).then(|| {
        let (t, e) = (rounds as f64, max_tx as f64);
        (std::f64::consts::E * t / e).powf(e)
    });
    Ok(PatternCount { alpha, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(t: u64, e: u64) -> u64 {
        pattern_count(t, e).unwrap().alpha.to_u64().unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(alpha(3, 1), 4);
        assert_eq!(alpha(4, 2), 11);
        assert_eq!(alpha(17, 0), 1);
        assert_eq!(alpha(0, 0), 1);
        assert!(pattern_count(3, 4).is_err());
    }

    #[test]
    fn full_budget_counts_all_subsets() {
        for t in 0..=40 {
            assert_eq!(pattern_count(t, t).unwrap().alpha, BigUint::one() << t);
        }
    }

    #[test]
    fn bound_value_for_t4_e2() {
        let pc = pattern_count(4, 2).unwrap();
        let expected = (2.0 * std::f64::consts::E).powi(2);
        assert!((pc.bound.unwrap() - expected).abs() < 1e-9);
        assert!(pc.within_bound());
    }
}
