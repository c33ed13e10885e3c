use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::topology::NodeId;

/// Private random stream of one station.
pub type StationRng = ChaCha8Rng;

/// Stream of `node` within trial `seed`: ChaCha8 keyed by
/// `ChaCha8Rng::seed_from_u64(seed)` with the ChaCha stream id set to `node`.
/// Streams of distinct nodes never overlap, and the mapping is stable, so
/// trials replay bit-identically.
pub fn derive_rng(seed: u64, node: NodeId) -> StationRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(node as u64);
    rng
}
