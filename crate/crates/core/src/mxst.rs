//! Maximum spanning trees in normed planes.
//!
//! [`mxst_mpsy`] builds the tree from the furthest-neighbor graph: every
//! graph edge belongs to the tree, and the components are stitched together
//! by one edge per pair of cyclically adjacent components, dropping the
//! lightest of the `k` candidates. [`mxst_bruteforce`] is the descending
//! Kruskal oracle used to certify it.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fng::{build_fng_from_table, order_components, ComponentCycle, FNGraph};
use crate::geometry::{convex_hull, HullIndex};
use crate::norm::NormSpec;
use crate::points::{pairwise_distances, DistanceTable, PointSet};

/// Undirected weighted edge with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedEdge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl WeightedEdge {
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        WeightedEdge {
            i: a.min(b),
            j: a.max(b),
            w,
        }
    }

    #[inline]
    pub fn key(&self) -> (usize, usize) {
        (self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningTree {
    /// Sorted by `(i, j)`.
    pub edges: Vec<WeightedEdge>,
    pub total_weight: f64,
}

impl SpanningTree {
    pub fn from_edges(mut edges: Vec<WeightedEdge>) -> Self {
        edges.sort_by_key(|e| e.key());
        let total_weight = edges.iter().map(|e| e.w).sum();
        SpanningTree {
            edges,
            total_weight,
        }
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| e.key()).collect()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search_by_key(&key, |e| e.key()).is_ok()
    }
}

/// Candidate connecting edges for one pair of cyclically adjacent components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjacentPair {
    /// `(previous, current)` component ids.
    pub components: (usize, usize),
    /// Maxima over the four cluster pairings, in the order
    /// `C_{x_i} x C_{x'_{i-1}}`, `C_{x_{i-1}} x C_{x'_i}`,
    /// `C_{x'_i} x C_{x_{i-1}}`, `C_{x'_{i-1}} x C_{x_i}`, where the second
    /// cluster is restricted to the hull boundary.
    pub candidates: [Option<WeightedEdge>; 4],
    /// Index into `candidates` of the longest one.
    pub selected: usize,
    pub edge: WeightedEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ConnectingEdgeReport {
    pub pairs: Vec<AdjacentPair>,
    /// Index into `pairs` of the dropped (lightest) connecting edge.
    pub discarded: Option<usize>,
}

impl ConnectingEdgeReport {
    pub fn retained(&self) -> Vec<WeightedEdge> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != self.discarded)
            .map(|(_, p)| p.edge)
            .collect()
    }
}

/// Everything computed on the way to the tree; the invariant checks consume it.
#[derive(Debug, Clone)]
pub struct MxstRun {
    pub table: DistanceTable,
    pub hull: HullIndex,
    pub fng: FNGraph,
    pub cycle: ComponentCycle,
    pub tree: SpanningTree,
    pub report: ConnectingEdgeReport,
}

pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

fn longest_between(table: &DistanceTable, from: &[usize], to: &[usize]) -> Option<WeightedEdge> {
    let mut best: Option<WeightedEdge> = None;
    for &a in from {
        let row = table.row(a);
        for &b in to {
            if best.is_none_or(|e| row[b] > e.w) {
                best = Some(WeightedEdge::new(a, b, row[b]));
            }
        }
    }
    best
}

/// Run the construction on a point set with at least two points, returning
/// the intermediate structures alongside the tree.
pub fn mxst_mpsy_detailed(spec: &NormSpec, points: &PointSet, tol: f64) -> Result<MxstRun> {
    let table = pairwise_distances(spec, points)?;
    mxst_from_table(points, table, tol)
}

/// As [`mxst_mpsy_detailed`] with a precomputed table.
pub fn mxst_from_table(points: &PointSet, table: DistanceTable, tol: f64) -> Result<MxstRun> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateInput(
            "the detailed construction needs at least two points".into(),
        ));
    }
    let fng = build_fng_from_table(&table, tol)?;
    let hull = convex_hull(points.as_slice(), tol)?;
    let cycle = order_components(&fng, &hull)?;

    let mut edges: Vec<WeightedEdge> = fng
        .undirected_edges()
        .into_iter()
        .map(|(a, b)| WeightedEdge::new(a, b, table.get(a, b)))
        .collect();

    let report = connecting_edges(&table, &hull, &fng, &cycle);
    edges.extend(report.retained());
    let tree = SpanningTree::from_edges(edges);
    Ok(MxstRun {
        table,
        hull,
        fng,
        cycle,
        tree,
        report,
    })
}

fn connecting_edges(
    table: &DistanceTable,
    hull: &HullIndex,
    fng: &FNGraph,
    cycle: &ComponentCycle,
) -> ConnectingEdgeReport {
    let k = cycle.k();
    if k < 2 {
        return ConnectingEdgeReport::default();
    }
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for p in 0..fng.len() {
        members.entry(fng.cluster_of[p]).or_default().push(p);
    }
    let on_hull: HashMap<usize, Vec<usize>> = members
        .iter()
        .map(|(&c, ps)| (c, ps.iter().copied().filter(|&p| hull.is_boundary(p)).collect()))
        .collect();

    let mut pairs = Vec::with_capacity(k);
    for i in 0..k {
        let (xi, xpi) = (cycle.x(i), cycle.x_prime(i));
        // Past the wrap the roles swap: read counterclockwise, x'_k is
        // followed by x_1, so component k enters as (x'_k, x_k).
        let (xprev, xpprev) = if i == 0 {
            (cycle.x_prime(k - 1), cycle.x(k - 1))
        } else {
            (cycle.x(i - 1), cycle.x_prime(i - 1))
        };
        let pairings = [(xi, xpprev), (xprev, xpi), (xpi, xprev), (xpprev, xi)];
        let candidates = pairings.map(|(from, to)| longest_between(table, &members[&from], &on_hull[&to]));
        let (selected, edge) = candidates
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.map(|e| (s, e)))
            .fold(None::<(usize, WeightedEdge)>, |best, (s, e)| match best {
                Some((_, b)) if b.w >= e.w => best,
                _ => Some((s, e)),
            })
            .expect("every cluster contains its spine endpoint, which lies on the hull");
        pairs.push(AdjacentPair {
            components: (fng.component_of[xprev], fng.component_of[xi]),
            candidates,
            selected,
            edge,
        });
    }
    let discarded = pairs
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (idx, p)| match best {
            Some((_, w)) if w <= p.edge.w => best,
            _ => Some((idx, p.edge.w)),
        })
        .map(|(idx, _)| idx);
    ConnectingEdgeReport { pairs, discarded }
}

/// Maximum spanning tree via the furthest-neighbor graph.
///
/// Requires pairwise distinct distances (checked at `tol`).
pub fn mxst_mpsy(spec: &NormSpec, points: &PointSet, tol: f64) -> Result<(SpanningTree, ConnectingEdgeReport)> {
    match points.len() {
        0 => Err(Error::DegenerateInput("empty point set".into())),
        1 => Ok((SpanningTree::from_edges(Vec::new()), ConnectingEdgeReport::default())),
        2 => {
            let w = spec.distance(points[0], points[1]);
            Ok((
                SpanningTree::from_edges(vec![WeightedEdge::new(0, 1, w)]),
                ConnectingEdgeReport::default(),
            ))
        }
        _ => {
            let run = mxst_mpsy_detailed(spec, points, tol)?;
            Ok((run.tree, run.report))
        }
    }
}

/// Descending Kruskal over the table; ties broken by `(i, j)`.
pub fn mxst_bruteforce_table(table: &DistanceTable) -> SpanningTree {
    let n = table.len();
    let mut all: Vec<WeightedEdge> = table.pairs().map(|(i, j, w)| WeightedEdge { i, j, w }).collect();
    all.sort_by(|a, b| b.w.total_cmp(&a.w).then(a.key().cmp(&b.key())));
    let mut dsu = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for e in all {
        if dsu.union(e.i, e.j) {
            edges.push(e);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::from_edges(edges)
}

pub fn mxst_bruteforce(spec: &NormSpec, points: &PointSet) -> Result<SpanningTree> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("empty point set".into()));
    }
    Ok(mxst_bruteforce_table(&pairwise_distances(spec, points)?))
}

/// Edge count, index range, acyclicity and hence connectivity.
pub fn validate_tree(tree: &SpanningTree, n: usize) -> bool {
    if tree.edges.len() != n.saturating_sub(1) {
        return false;
    }
    let mut dsu = DisjointSet::new(n);
    tree.edges
        .iter()
        .all(|e| e.i < n && e.j < n && e.i != e.j && dsu.union(e.i, e.j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2::Vec2;

    const TOL: f64 = 1e-9;

    fn set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&c| Vec2::from(c)).collect()).unwrap()
    }

    #[test]
    fn triangle_drops_the_shortest_side() {
        let tri = set(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        let n = NormSpec::euclidean();
        let (tree, report) = mxst_mpsy(&n, &tri, TOL).unwrap();
        assert_eq!(tree.edge_set(), BTreeSet::from([(0, 2), (1, 2)]));
        assert_eq!(tree.total_weight, 9.0);
        assert!(report.pairs.is_empty());
        assert_eq!(mxst_bruteforce(&n, &tri).unwrap(), tree);
    }

    #[test]
    fn collinear_points() {
        let s = set(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]);
        let (tree, _) = mxst_mpsy(&NormSpec::euclidean(), &s, TOL).unwrap();
        assert_eq!(
            tree.edges,
            vec![WeightedEdge::new(0, 2, 3.0), WeightedEdge::new(1, 2, 2.0)]
        );
        assert_eq!(tree.total_weight, 5.0);
    }

    #[test]
    fn jittered_square_needs_a_connecting_edge() {
        let s = set(&[(0.0, 0.0), (1.01, 0.02), (1.03, 0.97), (-0.04, 1.05)]);
        let n = NormSpec::euclidean();
        let (tree, report) = mxst_mpsy(&n, &s, TOL).unwrap();
        assert!(tree.contains(0, 2) && tree.contains(1, 3));
        assert_eq!(report.pairs.len(), 2);
        assert_eq!(report.retained().len(), 1);
        assert_eq!(tree.edge_set(), mxst_bruteforce(&n, &s).unwrap().edge_set());
        // The longest side 2-3 (1.0730) connects the two diagonals.
        assert!(tree.contains(2, 3));
    }

    #[test]
    fn small_inputs_bypass() {
        let n = NormSpec::l1();
        let one = set(&[(1.0, 1.0)]);
        let (t, _) = mxst_mpsy(&n, &one, TOL).unwrap();
        assert!(t.edges.is_empty());
        assert!(validate_tree(&t, 1));
        let two = set(&[(1.0, 1.0), (2.0, 3.0)]);
        let (t, _) = mxst_mpsy(&n, &two, TOL).unwrap();
        assert_eq!(t.edges, vec![WeightedEdge::new(0, 1, 3.0)]);
        assert_eq!(mxst_bruteforce(&n, &two).unwrap(), t);
        assert!(matches!(mxst_mpsy(&n, &set(&[]), TOL), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn ties_are_rejected() {
        let sq = set(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(matches!(
            mxst_mpsy(&NormSpec::euclidean(), &sq, TOL),
            Err(Error::TiesPresent { .. })
        ));
        // The oracle still produces a tree, breaking ties lexicographically.
        let t = mxst_bruteforce(&NormSpec::euclidean(), &sq).unwrap();
        assert_eq!(t.edge_set(), BTreeSet::from([(0, 1), (0, 2), (1, 3)]));
    }

    #[test]
    fn tree_validation() {
        let s = set(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0), (5.0, 5.0)]);
        let t = mxst_bruteforce(&NormSpec::euclidean(), &s).unwrap();
        assert!(validate_tree(&t, 4));
        let mut dup = t.clone();
        dup.edges[1] = dup.edges[0];
        assert!(!validate_tree(&dup, 4));
        let mut short = t.clone();
        short.edges.pop();
        assert!(!validate_tree(&short, 4));
        let mut out_of_range = t.clone();
        out_of_range.edges[0].j = 9;
        assert!(!validate_tree(&out_of_range, 4));
        assert!(validate_tree(&SpanningTree::from_edges(vec![]), 1));
        assert!(validate_tree(&SpanningTree::from_edges(vec![]), 0));
    }
}
