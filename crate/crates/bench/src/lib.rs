//! Fixed workloads shared by the criterion benches.

use mxst_core::random::{rng, tie_free_points};
use mxst_core::{NormSpec, PointSet};

/// Tie-free uniform instance in the unit square, reproducible from `seed`.
pub fn instance(spec: &NormSpec, n: usize, seed: u64) -> PointSet {
    tie_free_points(&mut rng(seed), spec, n, 1.0, 0.0, 100).expect("uniform draws are tie-free")
}
