//! Integer ceilings of the parameter formulas.

/// Relative tolerance under which a float is treated as the integer it is
/// closest to before taking the ceiling. Formulas such as `32/14` or
/// `65536^(1/2)` are exact in rationals but can land a few ulps above an
/// integer in floating point, which would bump the ceiling by one.
pub(crate) const CEIL_GUARD: f64 = 1e-9;

pub(crate) fn ceil_guarded(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= CEIL_GUARD * x.abs().max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

/// `⌈log2 n⌉`, exact, for `n >= 1`.
pub(crate) fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    u64::from(64 - (n - 1).leading_zeros()) * u64::from(n > 1)
}

/// `⌈n^(1/e)⌉` for integer `e >= 1`, exact.
pub(crate) fn ceil_int_root(n: u64, e: u32) -> u64 {
    let fits = |r: u64| -> bool {
        // r^e >= n ?
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.saturating_mul(u128::from(r));
            if acc >= u128::from(n) {
                return true;
            }
        }
        acc >= u128::from(n)
    };
    let guess = (n as f64).powf(1.0 / f64::from(e)).round() as u64;
    let mut r = guess.saturating_sub(2).max(1);
    while !fits(r) {
        r += 1;
    }
    while r > 1 && fits(r - 1) {
        r -= 1;
    }
    r
}

/// `⌈n^(1/φ)⌉`, exact when `φ` is an integer.
pub(crate) fn ceil_root(n: u64, phi: f64) -> u64 {
    if phi.fract() == 0.0 && phi <= f64::from(u32::MAX) {
        ceil_int_root(n, phi as u32)
    } else {
        ceil_guarded((n as f64).powf(1.0 / phi))
    }
}
