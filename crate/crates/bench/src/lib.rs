//! Shared inputs for the criterion benchmarks.

use scenval_core::sampling::sample;
use scenval_core::{Density, Label, PointSet, Role, SeedPath};

/// An `(E, G)` pair of iid draws from `density` in `d` dimensions.
pub fn sample_pair(density: Density, d: usize, m: usize, seed: u64) -> (PointSet, PointSet) {
    let path = SeedPath::new(seed).experiment("bench");
    let e = sample(density, d, m, path.role(Role::Empirical), Label::Empirical).expect("valid sizes");
    let g = sample(density, d, m, path.role(Role::Generated), Label::Generated).expect("valid sizes");
    (e, g)
}
