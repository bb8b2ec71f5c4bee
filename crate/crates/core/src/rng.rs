//! Per-trial random streams split from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent ChaCha stream `stream` of `master_seed`.
///
/// Streams are addressed by counter, so trial `k` sees the same numbers no
/// matter which worker runs it or in what order.
pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
