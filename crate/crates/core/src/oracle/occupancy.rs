//! Exact balls-into-bins occupancy: the probability that `m` labeled balls
//! thrown uniformly into `k` bins leave no bin with exactly one ball.
//!
//! With `f(b, j)` the number of assignments of `j` labeled balls into `b`
//! bins without a singleton,
//!
//! ```text
//! f(0, 0) = 1,  f(0, j > 0) = 0,
//! f(b, j) = Σ_{c ∈ {0, 2, 3, ..., j}} C(j, c) · f(b - 1, j - c)
//! ```
//!
//! and the probability is `f(k, m) / k^m`. One pass over `b = 1..=k` yields
//! `f(k, j)` for every `j <= m` at once. Everything is big-integer arithmetic;
//! the only division is the final one.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on `m · k · m`, the number of inner DP steps.
pub const DEFAULT_DP_BUDGET: u128 = 250_000_000;

/// An exact probability `numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProbability {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl ExactProbability {
    /// Nearest `f64`, accurate to a couple of ulps even when both parts
    /// overflow `f64`.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.numerator, &self.denominator)
    }

    /// `self <= num / den`, exactly.
    pub fn le_ratio(&self, num: &BigUint, den: &BigUint) -> bool {
        &self.numerator * den <= num * &self.denominator
    }
}

pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries ~80 significant bits.
    let shift = 80 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mut value = quotient.to_f64().unwrap_or(f64::INFINITY);
    let mut exponent = -shift;
    // scale in steps so intermediate powers of two stay finite and normal
    while exponent < -900 {
        value *= 2f64.powi(-900);
        exponent += 900;
    }
    while exponent > 900 {
        value *= 2f64.powi(900);
        exponent -= 900;
    }
    value * 2f64.powi(exponent as i32)
}

/// Row `k` of the no-singleton table: `f(k, j)` for `j = 0..=max_balls`.
pub fn no_singleton_counts(max_balls: usize, bins: usize) -> Vec<BigUint> {
    let pascal = pascal_rows(max_balls);
    let mut prev = vec![BigUint::zero(); max_balls + 1];
    prev[0] = BigUint::one();
    let mut cur = vec![BigUint::zero(); max_balls + 1];
    for _ in 0..bins {
        for j in 0..=max_balls {
            let mut acc = prev[j].clone();
            for c in 2..=j {
                let tail = &prev[j - c];
                if !tail.is_zero() {
                    acc += &pascal[j][c] * tail;
                }
            }
            cur[j] = acc;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev
}

fn pascal_rows(max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max + 1);
    for j in 0..=max {
        let mut row = Vec::with_capacity(j + 1);
        row.push(BigUint::one());
        for c in 1..j {
            row.push(&rows[j - 1][c - 1] + &rows[j - 1][c]);
        }
        if j > 0 {
            row.push(BigUint::one());
        }
        rows.push(row);
    }
    rows
}

fn check_budget(max_balls: usize, bins: usize, budget: u128) -> Result<()> {
    let work = (max_balls as u128) * (bins as u128) * (max_balls as u128);
    if work > budget {
        return Err(Error::Resource(format!(
            "occupancy DP for m = {max_balls}, k = {bins} needs {work} steps, budget is {budget}"
        )));
    }
    Ok(())
}

/// `P(no bin holds exactly one ball)` for every `m` in `0..=max_balls`.
pub fn p_no_singleton_table(
    max_balls: usize,
    bins: usize,
    budget: u128,
) -> Result<Vec<ExactProbability>> {
    if bins == 0 {
        return Err(Error::invalid("need at least one bin"));
    }
    check_budget(max_balls, bins, budget)?;
    let counts = no_singleton_counts(max_balls, bins);
    let k = BigUint::from(bins);
    let mut power = BigUint::one();
    let mut out = Vec::with_capacity(max_balls + 1);
    for count in counts {
        out.push(ExactProbability {
            numerator: count,
            denominator: power.clone(),
        });
        power *= &k;
    }
    Ok(out)
}

pub fn p_no_singleton_exact(balls: usize, bins: usize) -> Result<ExactProbability> {
    p_no_singleton_exact_with_budget(balls, bins, DEFAULT_DP_BUDGET)
}

pub fn p_no_singleton_exact_with_budget(
    balls: usize,
    bins: usize,
    budget: u128,
) -> Result<ExactProbability> {
    let mut table = p_no_singleton_table(balls, bins, budget)?;
    Ok(table.swap_remove(balls))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, k: usize) -> f64 {
        p_no_singleton_exact(m, k).unwrap().to_f64()
    }

    #[test]
    fn small_values() {
        assert_eq!(p(1, 5), 0.0);
        assert_eq!(p(2, 2), 0.5);
        assert_eq!(p(3, 2), 0.25);
        assert_eq!(p(0, 3), 1.0);
    }

    #[test]
    fn exact_fraction_for_three_balls_two_bins() {
        let e = p_no_singleton_exact(3, 2).unwrap();
        assert_eq!(e.numerator, BigUint::from(2u32));
        assert_eq!(e.denominator, BigUint::from(8u32));
    }

    #[test]
    fn budget_is_enforced() {
        let err = p_no_singleton_exact_with_budget(100, 100, 1000).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert!(p_no_singleton_exact(1, 0).is_err());
    }

    #[test]
    fn ratio_conversion_handles_huge_operands() {
        let num = BigUint::from(3u32) << 5000u32;
        let den = BigUint::from(4u32) << 5000u32;
        assert_eq!(ratio_to_f64(&num, &den), 0.75);
        let tiny = ratio_to_f64(&BigUint::one(), &(BigUint::one() << 1000u32));
        assert_eq!(tiny, 2f64.powi(-1000));
    }
}
