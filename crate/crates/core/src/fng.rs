//! Furthest-neighbor graph: out-map, spines, clusters and the cyclic order
//! of components around the hull.
//!
//! With pairwise distinct distances every point has exactly one furthest
//! neighbor. Following the out-map from any point walks edges of strictly
//! increasing length until it reaches a 2-cycle `{x, x'}`, the spine of the
//! point's component. A point belongs to cluster `C_x` when it reaches `x`
//! by an even number of edges, and to `C_{x'}` otherwise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::HullIndex;
use crate::norm::NormSpec;
use crate::points::{count_ties, pairwise_distances, DistanceTable, PointSet};

/// Source of furthest-neighbor queries.
///
/// The default implementation scans a row of the distance table. A
/// furthest-site Voronoi structure could be plugged in here instead.
pub trait FurthestNeighborOracle {
    fn furthest(&self, i: usize, tol: f64) -> Result<usize>;
}

impl FurthestNeighborOracle for DistanceTable {
    fn furthest(&self, i: usize, tol: f64) -> Result<usize> {
        let row = self.row(i);
        if row.len() < 2 {
            return Err(Error::DegenerateInput(
                "furthest neighbor needs at least two points".into(),
            ));
        }
        let mut best = usize::MAX;
        let mut second = usize::MAX;
        for (j, &w) in row.iter().enumerate() {
            if j == i {
                continue;
            }
            if best == usize::MAX || w > row[best] {
                second = best;
                best = j;
            } else if second == usize::MAX || w > row[second] {
                second = j;
            }
        }
        if second != usize::MAX && row[best] - row[second] <= tol {
            return Err(Error::FurthestTie {
                point: i,
                first: best.min(second),
                second: best.max(second),
            });
        }
        Ok(best)
    }
}

/// Furthest neighbor of point `i` by an O(n) scan.
pub fn furthest_neighbor(spec: &NormSpec, points: &PointSet, i: usize, tol: f64) -> Result<usize> {
    let n = points.len();
    if n < 2 || i >= n {
        return Err(Error::DegenerateInput(format!(
            "furthest neighbor of point {i} in a set of {n}"
        )));
    }
    let dist: Vec<f64> = (0..n).map(|j| spec.distance(points[i], points[j])).collect();
    let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]));
    if order.len() > 1 && dist[order[0]] - dist[order[1]] <= tol {
        return Err(Error::FurthestTie {
            point: i,
            first: order[0].min(order[1]),
            second: order[0].max(order[1]),
        });
    }
    Ok(order[0])
}

/// The furthest-neighbor graph of a tie-free point set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FNGraph {
    /// `furthest[x]` is the furthest neighbor of `x`.
    pub furthest: Vec<usize>,
    /// Spine `s` is `(x, x')` with `x < x'`; its index is the component id.
    pub spines: Vec<(usize, usize)>,
    pub component_of: Vec<usize>,
    /// Spine endpoint whose cluster the point belongs to.
    pub cluster_of: Vec<usize>,
}

impl FNGraph {
    #[inline]
    pub fn len(&self) -> usize {
        self.furthest.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.furthest.is_empty()
    }

    #[inline]
    pub fn component_count(&self) -> usize {
        self.spines.len()
    }

    /// The other endpoint of the spine containing endpoint `x`.
    pub fn partner(&self, x: usize) -> usize {
        self.furthest[x]
    }

    pub fn is_spine_endpoint(&self, x: usize) -> bool {
        self.furthest[self.furthest[x]] == x
    }

    /// Undirected edges `{x, furthest[x]}`, each once, as `(min, max)`, sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .furthest
            .iter()
            .enumerate()
            .map(|(x, &y)| (x.min(y), x.max(y)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Points of the cluster owned by spine endpoint `x`, ascending.
    pub fn cluster_members(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.cluster_of[p] == x).collect()
    }

    /// In-degree zero vertices.
    pub fn leaves(&self) -> Vec<usize> {
        let mut indeg = vec![0usize; self.len()];
        for &y in &self.furthest {
            indeg[y] += 1;
        }
        (0..self.len()).filter(|&p| indeg[p] == 0).collect()
    }
}

/// Build the graph from a precomputed table.
pub fn build_fng_from_table(table: &DistanceTable, tol: f64) -> Result<FNGraph> {
    let n = table.len();
    if n < 2 {
        return Err(Error::DegenerateInput(
            "furthest-neighbor graph needs at least two points".into(),
        ));
    }
    let ties = count_ties(table, tol);
    if ties > 0 {
        return Err(Error::TiesPresent { count: ties });
    }
    build_with_oracle(table, n, tol)
}

/// Build the graph from any furthest-neighbor oracle. No global tie check
/// is done here; only ties at each point's maximum are rejected.
pub fn build_with_oracle<O: FurthestNeighborOracle>(oracle: &O, n: usize, tol: f64) -> Result<FNGraph> {
    let furthest = (0..n)
        .map(|i| oracle.furthest(i, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut spines = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut cluster_of = vec![usize::MAX; n];
    for x in 0..n {
        let y = furthest[x];
        if x < y && furthest[y] == x {
            component_of[x] = spines.len();
            component_of[y] = spines.len();
            cluster_of[x] = x;
            cluster_of[y] = y;
            spines.push((x, y));
        }
    }
    if spines.is_empty() {
        return Err(Error::StructureViolation(
            "furthest-neighbor graph has no 2-cycle".into(),
        ));
    }

    // Pointer chase with memoization: a point takes the opposite cluster of
    // its furthest neighbor, since one more edge flips the path parity.
    let mut path = Vec::new();
    for start in 0..n {
        let mut x = start;
        while component_of[x] == usize::MAX {
            path.push(x);
            if path.len() > n {
                return Err(Error::StructureViolation(format!(
                    "furthest-neighbor chain from {start} does not reach a spine"
                )));
            }
            x = furthest[x];
        }
        while let Some(p) = path.pop() {
            let q = furthest[p];
            component_of[p] = component_of[q];
            cluster_of[p] = furthest[cluster_of[q]];
        }
    }

    Ok(FNGraph {
        furthest,
        spines,
        component_of,
        cluster_of,
    })
}

/// Compute distances, check they are tie-free and build the graph.
pub fn build_fng(spec: &NormSpec, points: &PointSet, tol: f64) -> Result<FNGraph> {
    let table = pairwise_distances(spec, points)?;
    build_fng_from_table(&table, tol)
}

/// Cyclic order of the clusters around the hull boundary.
///
/// The spine endpoints read counterclockwise are `x_1, ..., x_k, x'_1, ...,
/// x'_k` with spine `i` being `{x_i, x'_i}`; `clusters` stores the endpoint
/// ids in that order, so `clusters[i]` names `C_{x_i}` and
/// `clusters[i + k]` names `C_{x'_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCycle {
    pub clusters: Vec<usize>,
}

impl ComponentCycle {
    #[inline]
    pub fn k(&self) -> usize {
        self.clusters.len() / 2
    }

    /// Endpoint `x_i` (zero-based `i`).
    #[inline]
    pub fn x(&self, i: usize) -> usize {
        self.clusters[i]
    }

    /// Endpoint `x'_i` (zero-based `i`).
    #[inline]
    pub fn x_prime(&self, i: usize) -> usize {
        self.clusters[i + self.k()]
    }

    /// Position of endpoint `x` in the cycle.
    pub fn slot_of(&self, x: usize) -> Option<usize> {
        self.clusters.iter().position(|&c| c == x)
    }
}

/// Sort spine endpoints by hull rank and verify the interleaving pattern
/// `p_1 ... p_k q_1 ... q_k`.
pub fn order_components(g: &FNGraph, hull: &HullIndex) -> Result<ComponentCycle> {
    let k = g.component_count();
    let mut endpoints = Vec::with_capacity(2 * k);
    for &(x, y) in &g.spines {
        for e in [x, y] {
            let rank = hull.rank(e).ok_or_else(|| {
                Error::StructureViolation(format!("spine endpoint {e} is not on the hull boundary"))
            })?;
            endpoints.push((rank, e));
        }
    }
    endpoints.sort_unstable();
    let clusters: Vec<usize> = endpoints.into_iter().map(|(_, e)| e).collect();
    let mut seen = vec![false; k];
    for i in 0..k {
        let (a, b) = (clusters[i], clusters[i + k]);
        let c = g.component_of[a];
        if seen[c] || g.component_of[b] != c {
            return Err(Error::StructureViolation(format!(
                "spine endpoints do not interleave around the hull at position {i}"
            )));
        }
        seen[c] = true;
    }
    Ok(ComponentCycle { clusters })
}
