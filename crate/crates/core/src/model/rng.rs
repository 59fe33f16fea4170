use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::category::Category;

/// Independent random stream for one element, keyed by (seed, category, index). Streams
/// do not depend on build order, so elements can be generated in any order or in parallel.
pub fn substream(seed: u64, category: Category, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((category.id() << 32) | index as u64);
    rng
}
