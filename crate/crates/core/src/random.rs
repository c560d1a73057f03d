//! Seeded instance generators for tests, benches and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::convex_hull;
use crate::norm::{NormSpec, DEFAULT_TOL};
use crate::points::{has_ties, pairwise_distances, PointSet};
use crate::vec2::Vec2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points uniform in `[-extent, extent]^2`.
pub fn uniform_points<R: Rng>(rng: &mut R, n: usize, extent: f64) -> PointSet {
    loop {
        let pts: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent)))
            .collect();
        if let Ok(s) = PointSet::new(pts) {
            return s;
        }
    }
}

/// `n` distinct cells of a `side x side` integer grid. Panics if the grid
/// has fewer than `n` cells.
pub fn grid_points<R: Rng>(rng: &mut R, n: usize, side: usize) -> PointSet {
    assert!(side * side >= n, "grid too small for {n} points");
    let mut cells: Vec<(usize, usize)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
    cells.shuffle(rng);
    let pts = cells[..n].iter().map(|&(x, y)| Vec2::new(x as f64, y as f64)).collect();
    PointSet::new(pts).expect("grid cells are distinct")
}

/// A centrally symmetric convex polygon with `2 * half` vertices or fewer,
/// built as the hull of random directions and their negatives.
pub fn symmetric_polygon<R: Rng>(rng: &mut R, half: usize) -> NormSpec {
    loop {
        let mut pts = Vec::with_capacity(2 * half);
        for _ in 0..half.max(2) {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let r: f64 = rng.gen_range(0.5..2.0);
            let v = Vec2::new(t.cos(), t.sin()) * r;
            pts.push(v);
            pts.push(-v);
        }
        let Ok(hull) = convex_hull(&pts, DEFAULT_TOL) else {
            continue;
        };
        let verts: Vec<Vec2> = hull.vertices.iter().map(|&i| pts[i]).collect();
        if let Ok(spec) = NormSpec::polygonal(verts) {
            return spec;
        }
    }
}

/// Uniform points redrawn until all distances differ by more than `tol`.
/// Gives up after `attempts` draws.
pub fn tie_free_points<R: Rng>(
    rng: &mut R,
    spec: &NormSpec,
    n: usize,
    extent: f64,
    tol: f64,
    attempts: usize,
) -> Option<PointSet> {
    for _ in 0..attempts {
        let s = uniform_points(rng, n, extent);
        let table = pairwise_distances(spec, &s).ok()?;
        if !has_ties(&table, tol) {
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let a = uniform_points(&mut rng(7), 10, 1.0);
        let b = uniform_points(&mut rng(7), 10, 1.0);
        assert_eq!(a, b);
        let g = grid_points(&mut rng(1), 9, 3);
        assert_eq!(g.len(), 9);
        let p = symmetric_polygon(&mut rng(3), 4);
        assert!(matches!(p.kind(), crate::norm::NormKind::Polygonal { .. }));
    }
}
