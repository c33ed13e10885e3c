use rand::Rng;

use super::{RngTape, Tape};
use crate::error::{Error, Result};

/// Offsets used by one Green-Decay(k) run inside a `k`-round slot: always
/// offset 0, then fair coins for offsets `1..k`; the station transmits again
/// at the first offset whose coin is 1 and stops. One or two offsets.
///
/// The slot is exactly `k` rounds long so that it fits the last third of a
/// GB phase window.
pub fn green_decay_offsets<T: Tape + ?Sized>(k: u64, tape: &mut T) -> Vec<u64> {
    debug_assert!(k >= 2);
    let mut offsets = vec![0];
    for offset in 1..k {
        if tape.coin() {
            offsets.push(offset);
            break;
        }
    }
    offsets
}

pub fn green_decay_schedule<R: Rng + ?Sized>(k: u64, rng: &mut R) -> Result<Vec<u64>> {
    if k < 2 {
        return Err(Error::invalid(format!("green-decay needs k >= 2, got {k}")));
    }
    Ok(green_decay_offsets(k, &mut RngTape(rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::ScriptedTape;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coin_tape_traces() {
        let mut tape = ScriptedTape::new().coins([false, false, true]);
        assert_eq!(green_decay_offsets(10, &mut tape), vec![0, 3]);
        let mut tape = ScriptedTape::new().coin_fallback(false);
        assert_eq!(green_decay_offsets(10, &mut tape), vec![0]);
    }

    #[test]
    fn flips_at_most_k_minus_one_coins() {
        // a 1 after k-1 zeros falls outside the slot
        let mut tape = ScriptedTape::new().coins([false, false, false, true]);
        assert_eq!(green_decay_offsets(4, &mut tape), vec![0]);
        assert!(tape.coin());
    }

    #[test]
    fn one_or_two_transmissions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in [2, 3, 14, 70] {
            for _ in 0..2000 {
                let offs = green_decay_schedule(k, &mut rng).unwrap();
                assert!(matches!(offs.len(), 1 | 2));
                assert_eq!(offs[0], 0);
                assert!(offs.iter().all(|&o| o < k));
            }
        }
        assert!(green_decay_schedule(1, &mut rng).is_err());
    }
}
