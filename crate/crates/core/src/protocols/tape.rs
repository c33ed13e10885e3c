use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};

/// Source of the random choices a schedule builder makes. Keeping the choices
/// behind a trait lets tests replay hand-written tapes through the real
/// builders.
pub trait Tape {
    /// Fair coin; `true` means 1.
    fn coin(&mut self) -> bool;
    /// Uniform over `0..k`, `k >= 1`.
    fn uniform_below(&mut self, k: u64) -> u64;
    /// Geometric with continue probability `q`: `P(X > i) = q^i`, support `1, 2, ...`.
    fn geometric(&mut self, q: f64) -> u64;
}

/// Adapts any [`Rng`] into a [`Tape`].
#[derive(Debug)]
pub struct RngTape<'a, R: ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> Tape for RngTape<'_, R> {
    fn coin(&mut self) -> bool {
        self.0.gen::<bool>()
    }

    fn uniform_below(&mut self, k: u64) -> u64 {
        self.0.gen_range(0..k)
    }

    fn geometric(&mut self, q: f64) -> u64 {
        geometric_from_uniform(q, 1.0 - self.0.gen::<f64>())
    }
}

/// Inverse transform: with `u` uniform on `(0, 1]`, `1 + floor(ln u / ln q)`
/// satisfies `P(X > i) = P(u <= q^i) = q^i`.
pub(crate) fn geometric_from_uniform(q: f64, u: f64) -> u64 {
    if q <= 0.0 || u >= 1.0 {
        return 1;
    }
    let steps = (u.ln() / q.ln()).floor();
    if steps >= (u64::MAX / 2) as f64 {
        u64::MAX / 2
    } else {
        1 + steps as u64
    }
}

/// Draws from the geometric law with continue probability `q`
/// (`P(X > i) = q^i`, so `P(X = i) = q^(i-1) (1 - q)`).
///
/// Note the convention: `q` is the probability of *continuing*, not of stopping.
pub fn sample_geo<R: Rng + ?Sized>(q: f64, rng: &mut R) -> Result<u64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::invalid(format!(
            "geometric continue probability {q} outside [0, 1)"
        )));
    }
    Ok(RngTape(rng).geometric(q))
}

/// Balls-into-Bins(k): the slot offset in `0..k` of the single transmission.
pub fn balls_into_bins_offset<R: Rng + ?Sized>(k: u64, rng: &mut R) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("balls-into-bins needs k >= 1"));
    }
    Ok(RngTape(rng).uniform_below(k))
}

/// Hand-written tape. Each queue is consumed in order; once a queue is empty
/// its fallback is used, or the tape panics if there is none.
#[derive(Debug, Clone, Default)]
pub struct ScriptedTape {
    coins: VecDeque<bool>,
    uniforms: VecDeque<u64>,
    geometrics: VecDeque<u64>,
    coin_fallback: Option<bool>,
    uniform_fallback: Option<u64>,
    geometric_fallback: Option<u64>,
    /// Number of `uniform_below` draws made, by argument.
    pub uniform_calls: Vec<u64>,
}

impl ScriptedTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn coins(mut self, coins: impl IntoIterator<Item = bool>) -> Self {
        self.coins.extend(coins);
        self
    }

    pub fn uniforms(mut self, values: impl IntoIterator<Item = u64>) -> Self {
        self.uniforms.extend(values);
        self
    }

    pub fn geometrics(mut self, values: impl IntoIterator<Item = u64>) -> Self {
        self.geometrics.extend(values);
        self
    }

    pub fn coin_fallback(mut self, coin: bool) -> Self {
        self.coin_fallback = Some(coin);
        self
    }

    pub fn uniform_fallback(mut self, value: u64) -> Self {
        self.uniform_fallback = Some(value);
        self
    }

    pub fn geometric_fallback(mut self, value: u64) -> Self {
        self.geometric_fallback = Some(value);
        self
    }
}

impl Tape for ScriptedTape {
    fn coin(&mut self) -> bool {
        self.coins
            .pop_front()
            .or(self.coin_fallback)
            .expect("scripted tape ran out of coins")
    }

    fn uniform_below(&mut self, k: u64) -> u64 {
        self.uniform_calls.push(k);
        let v = self
            .uniforms
            .pop_front()
            .or(self.uniform_fallback)
            .expect("scripted tape ran out of uniforms");
        assert!(v < k, "scripted uniform {v} not below {k}");
        v
    }

    fn geometric(&mut self, _q: f64) -> u64 {
        self.geometrics
            .pop_front()
            .or(self.geometric_fallback)
            .expect("scripted tape ran out of geometric draws")
    }
}
