//! Seeded workloads shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use upl_core::analysis::{route_cutoffs, CutoffVector, Route};
use upl_core::generate;
use upl_core::rational::Rational;
use upl_core::Instance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` instances with `n` types and `d` goods.
pub fn instances(seed: u64, count: usize, n: usize, d: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| generate::instance(&mut rng, n, d))
        .collect()
}

/// Sequences of length `len` over `{0, 1/4, ..., 5}`.
pub fn sequences(seed: u64, count: usize, len: usize) -> Vec<Vec<Rational>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| generate::grid_value(&mut rng, 0, 20, 4))
                .collect()
        })
        .collect()
}

/// Instances meeting the mostly-regular conditions, with their cutoffs.
pub fn ironable(seed: u64, count: usize, n: usize, d: usize) -> Vec<(Instance, CutoffVector)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let inst = generate::mrs_instance(&mut rng, n, d);
        if let Some(cutoffs) = route_cutoffs(&inst, Route::MostlyRegular) {
            out.push((inst, cutoffs));
        }
    }
    out
}
