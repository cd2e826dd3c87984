//! Counter-based RNG stream splitting.
//!
//! Every sampled experiment takes a single master seed. Parallel units of
//! work (fidelity pairs, VQE trials) each derive their own ChaCha stream
//! from the master seed and a counter, so results are independent of
//! scheduling order and reproducible across runs.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for the `index`-th unit of work under `master_seed`.
pub fn stream(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
