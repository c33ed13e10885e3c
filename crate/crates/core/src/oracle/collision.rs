//! Collision probability `P(X = Y) = Σ p_i²` of two independent copies of a
//! discrete positive distribution, computed exactly.

use num_bigint::BigInt;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default tail mass cut off by [`DiscreteDistribution::geometric_with_mean`].
pub const DEFAULT_TAIL: f64 = 1e-12;

/// Finite distribution on positive integers with exact probabilities
/// `weight / total`; the weights always sum to `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteDistribution {
    atoms: Vec<(u64, BigUint)>,
    total: BigUint,
}

impl DiscreteDistribution {
    /// From `(value, weight)` pairs; repeated values are merged and
    /// zero-weight atoms dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (u64, BigUint)>) -> Result<Self> {
        let mut atoms: Vec<(u64, BigUint)> = Vec::new();
        for (value, weight) in weights {
            if value == 0 {
                return Err(Error::invalid("support must be positive integers"));
            }
            if weight.is_zero() {
                continue;
            }
            match atoms.iter_mut().find(|(v, _)| *v == value) {
                Some((_, w)) => *w += weight,
                None => atoms.push((value, weight)),
            }
        }
        atoms.sort_by_key(|(v, _)| *v);
        let total: BigUint = atoms.iter().map(|(_, w)| w).sum();
        if total.is_zero() {
            return Err(Error::invalid("distribution has no mass"));
        }
        Ok(Self { atoms, total })
    }

    pub fn point_mass(value: u64) -> Result<Self> {
        Self::from_weights([(value, BigUint::one())])
    }

    /// Uniform on `lo..=hi`.
    pub fn uniform(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty range {lo}..={hi}")));
        }
        Self::from_weights((lo..=hi).map(|v| (v, BigUint::one())))
    }

    /// `a` with probability `pa_num / pa_den`, `b` otherwise.
    pub fn two_point(a: u64, b: u64, pa_num: u64, pa_den: u64) -> Result<Self> {
        if pa_num > pa_den || pa_den == 0 {
            return Err(Error::invalid("two-point weight must lie in [0, 1]"));
        }
        Self::from_weights([
            (a, BigUint::from(pa_num)),
            (b, BigUint::from(pa_den - pa_num)),
        ])
    }

    /// Geometric law with mean `mean` (continue probability `q = 1 - 1/mean`),
    /// truncated after the first `L` atoms where `q^L < tail`. The tail mass
    /// `q^L` is placed on the single value `L + mean`, which is the
    /// conditional mean of the tail, so the mean stays exactly `mean`.
    pub fn geometric_with_mean(mean: u64, tail: f64) -> Result<Self> {
        if mean == 0 {
            return Err(Error::invalid("geometric mean must be >= 1"));
        }
        if !(tail > 0.0 && tail < 1.0) {
            return Err(Error::invalid("tail mass must lie in (0, 1)"));
        }
        if mean == 1 {
            return Self::point_mass(1);
        }
        let (q_num, q_den) = (BigUint::from(mean - 1), BigUint::from(mean));
        // smallest L with (mean-1)^L < tail · mean^L, checked exactly
        let tail_ratio = BigRational::from_float(tail).expect("finite tail");
        let mut len = ((tail.ln() / (1.0 - 1.0 / mean as f64).ln()).floor() as u32).max(1);
        let below = |len: u32| {
            let lhs = BigRational::new(BigInt::from(q_num.pow(len)), BigInt::from(q_den.pow(len)));
            lhs < tail_ratio
        };
        while len > 1 && below(len - 1) {
            len -= 1;
        }
        while !below(len) {
            len += 1;
        }
        // P(X = i) = (mean-1)^(i-1) / mean^i; common denominator mean^len
        let mut atoms = Vec::with_capacity(len as usize + 1);
        for i in 1..=len {
            atoms.push((u64::from(i), q_num.pow(i - 1) * q_den.pow(len - i)));
        }
        atoms.push((u64::from(len) + mean, q_num.pow(len)));
        Self::from_weights(atoms)
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (u64, BigRational)> + '_ {
        let total = BigInt::from(self.total.clone());
        self.atoms
            .iter()
            .map(move |(v, w)| (*v, BigRational::new(BigInt::from(w.clone()), total.clone())))
    }

    pub fn mean(&self) -> BigRational {
        let weighted: BigUint = self.atoms.iter().map(|(v, w)| w * BigUint::from(*v)).sum();
        BigRational::new(weighted.into(), self.total.clone().into())
    }

    /// The mean as an integer, when it is one.
    pub fn integral_mean(&self) -> Option<u64> {
        let mean = self.mean();
        mean.is_integer()
            .then(|| u64::try_from(mean.to_integer()).ok())
            .flatten()
    }
}

/// Exact `Σ p_i²`.
pub fn collision_prob_exact(dist: &DiscreteDistribution) -> BigRational {
    let squares: BigUint = dist.atoms.iter().map(|(_, w)| w * w).sum();
    BigRational::new(squares.into(), (&dist.total * &dist.total).into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionCheck {
    pub collision: BigRational,
    /// `1 / (2k)` for the even integer mean `k`.
    pub bound: BigRational,
    pub mean: u64,
    pub pass: bool,
}

/// Compares `Σ p_i²` with `1 / (2k)` when the mean is an even integer
/// `k >= 2`; `None` otherwise (the inequality is not claimed then).
pub fn check_collision_bound(dist: &DiscreteDistribution) -> Option<CollisionCheck> {
    let k = dist.integral_mean()?;
    if k < 2 || k % 2 != 0 {
        return None;
    }
    let collision = collision_prob_exact(dist);
    let bound = BigRational::new(BigInt::one(), BigInt::from(2 * k));
    Some(CollisionCheck {
        pass: collision >= bound,
        collision,
        bound,
        mean: k,
    })
}
