use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// A Monte-Carlo frequency with its Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub z: f64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        Self {
            successes,
            trials,
            z: Z_99,
        }
    }

    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.successes as f64 / self.trials as f64
    }

    /// Wilson score interval at the estimate's `z`.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials, self.z)
    }

    pub fn lower(&self) -> f64 {
        self.wilson().0
    }

    pub fn upper(&self) -> f64 {
        self.wilson().1
    }

    /// Binomial standard error of the frequency, `sqrt(p(1-p)/n)`.
    pub fn std_error(&self) -> f64 {
        let p = self.frequency();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn merge(self, other: Estimate) -> Estimate {
        Estimate {
            successes: self.successes + other.successes,
            trials: self.trials + other.trials,
            z: self.z,
        }
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
