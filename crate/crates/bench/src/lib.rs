//! Fixtures shared by the benchmarks.

use freeharm::estimator::{case_rng, random_sphere_function};
use freeharm::{GroupContext, SparseFunction};

/// A dense pseudo-random function on the sphere `W_k`, reproducible from `seed`.
pub fn sphere_fixture(d: usize, k: usize, seed: u64) -> SparseFunction {
    let ctx = GroupContext::new(d).expect("valid rank");
    let mut rng = case_rng(seed, k);
    random_sphere_function(&mut rng, &ctx, k, None).expect("sphere within caps")
}
