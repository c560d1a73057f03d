//! Structural properties of the furthest-neighbor graph and the tree, as
//! executable checks over a finished [`MxstRun`].

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{segments_properly_intersect, Segment};
use crate::mxst::{mxst_bruteforce_table, mxst_mpsy_detailed, validate_tree, MxstRun};
use crate::norm::{NormSpec, DEFAULT_TOL};
use crate::points::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    /// First counterexample, empty on success.
    pub detail: String,
}

impl InvariantResult {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        InvariantResult {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        }
    }
}

pub fn increasing_chains(run: &MxstRun) -> InvariantResult {
    let g = &run.fng;
    let d = |a: usize, b: usize| run.table.get(a, b);
    let failure = (0..g.len()).find_map(|x| {
        let mut a = x;
        for _ in 0..g.len() {
            if g.is_spine_endpoint(a) {
                return None;
            }
            let b = g.furthest[a];
            if d(a, b) >= d(b, g.furthest[b]) {
                return Some(format!("chain from {x} does not increase at {a} -> {b}"));
            }
            a = b;
        }
        Some(format!("chain from {x} never reaches a spine"))
    });
    InvariantResult::new("increasing_chains", failure)
}

/// Spine endpoints and every vertex with positive in-degree lie on the hull
/// boundary.
pub fn non_leaves_on_hull(run: &MxstRun) -> InvariantResult {
    let g = &run.fng;
    let leaves = g.leaves();
    let failure = (0..g.len())
        .filter(|p| g.is_spine_endpoint(*p) || leaves.binary_search(p).is_err())
        .find(|&p| !run.hull.is_boundary(p))
        .map(|p| format!("point {p} is not a leaf but is interior to the hull"));
    InvariantResult::new("non_leaves_on_hull", failure)
}

pub fn spines_cross(run: &MxstRun, points: &PointSet) -> InvariantResult {
    let spines = &run.fng.spines;
    let mut failure = None;
    'outer: for (s, &(a, b)) in spines.iter().enumerate() {
        for &(c, d) in &spines[s + 1..] {
            let crossed = segments_properly_intersect(
                Segment::new(points[a], points[b]),
                Segment::new(points[c], points[d]),
                DEFAULT_TOL,
            );
            if crossed != Ok(true) {
                failure = Some(format!("spines ({a},{b}) and ({c},{d}) do not cross properly"));
                break 'outer;
            }
        }
    }
    InvariantResult::new("spines_cross", failure)
}

/// Along the boundary traversal every cluster occupies one cyclic run.
pub fn cluster_contiguity(run: &MxstRun) -> InvariantResult {
    let b = &run.hull.boundary;
    let clusters: Vec<usize> = b.iter().map(|&p| run.fng.cluster_of[p]).collect();
    let m = clusters.len();
    let mut runs = std::collections::BTreeMap::<usize, usize>::new();
    for i in 0..m {
        if clusters[i] != clusters[(i + m - 1) % m] {
            *runs.entry(clusters[i]).or_default() += 1;
        }
    }
    let failure = runs
        .iter()
        .find(|(_, &r)| r > 1)
        .map(|(c, r)| format!("cluster of {c} splits into {r} arcs on the hull"));
    InvariantResult::new("cluster_contiguity", failure)
}

/// For components `x, y, z`, the longest distance from component `x` to
/// components `y` and `z` joins clusters that are not neighbors in the
/// cyclic order of their six clusters.
pub fn far_pair_clusters(run: &MxstRun) -> InvariantResult {
    let g = &run.fng;
    let cycle = &run.cycle;
    let k = cycle.k();
    let slot: Vec<Option<usize>> = (0..g.len()).map(|p| cycle.slot_of(p)).collect();
    let comp_members: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..g.len()).filter(|&p| g.component_of[p] == c).collect())
        .collect();
    let mut failure = None;
    'outer: for x in 0..k {
        for y in 0..k {
            for z in (y + 1)..k {
                if x == y || x == z {
                    continue;
                }
                let mut best = (f64::NEG_INFINITY, 0, 0);
                for &a in &comp_members[x] {
                    for &b in comp_members[y].iter().chain(&comp_members[z]) {
                        let w = run.table.get(a, b);
                        if w > best.0 {
                            best = (w, a, b);
                        }
                    }
                }
                let (_, a, b) = best;
                // The six clusters in cyclic order.
                let mut six: Vec<usize> = cycle
                    .clusters
                    .iter()
                    .copied()
                    .filter(|&e| [x, y, z].contains(&g.component_of[e]))
                    .collect();
                six.sort_by_key(|&e| slot[e]);
                let pa = six.iter().position(|&e| e == g.cluster_of[a]).unwrap();
                let pb = six.iter().position(|&e| e == g.cluster_of[b]).unwrap();
                let gap = (pa + 6 - pb) % 6;
                if gap == 1 || gap == 5 {
                    failure = Some(format!(
                        "max from component {x} to {{{y},{z}}} is ({a},{b}) between neighboring clusters"
                    ));
                    break 'outer;
                }
            }
        }
    }
    InvariantResult::new("far_pair_clusters", failure)
}

pub fn fng_in_tree(run: &MxstRun) -> InvariantResult {
    let failure = run
        .fng
        .undirected_edges()
        .into_iter()
        .find(|&(a, b)| !run.tree.contains(a, b))
        .map(|(a, b)| format!("graph edge ({a},{b}) is missing from the tree"));
    InvariantResult::new("fng_in_tree", failure)
}

pub fn edges_touch_hull(run: &MxstRun) -> InvariantResult {
    let failure = run
        .tree
        .edges
        .iter()
        .find(|e| !run.hull.is_boundary(e.i) && !run.hull.is_boundary(e.j))
        .map(|e| format!("edge ({},{}) has both endpoints inside the hull", e.i, e.j));
    InvariantResult::new("edges_touch_hull", failure)
}

/// Tree edges outside the graph join cyclically adjacent components.
pub fn extra_edges_adjacent(run: &MxstRun) -> InvariantResult {
    let g = &run.fng;
    let k = run.cycle.k();
    let graph = g.undirected_edges();
    let position = |p: usize| run.cycle.slot_of(g.cluster_of[p]).map(|s| s % k.max(1));
    let failure = run
        .tree
        .edges
        .iter()
        .filter(|e| graph.binary_search(&e.key()).is_err())
        .find_map(|e| {
            let (Some(u), Some(v)) = (position(e.i), position(e.j)) else {
                return Some(format!("edge ({},{}) touches an unordered cluster", e.i, e.j));
            };
            let gap = (u + k - v) % k;
            (gap != 1 && gap != k - 1).then(|| {
                format!(
                    "edge ({},{}) joins components {} and {}, which are not adjacent",
                    e.i, e.j, g.component_of[e.i], g.component_of[e.j]
                )
            })
        });
    InvariantResult::new("extra_edges_adjacent", failure)
}

/// `n - k` graph edges and `k - 1` connecting edges.
pub fn edge_counts(run: &MxstRun) -> InvariantResult {
    let n = run.fng.len();
    let k = run.fng.component_count();
    let graph = run.fng.undirected_edges().len();
    let retained = run.report.retained().len();
    let failure = (graph != n - k || retained != k - 1)
        .then(|| format!("{graph} graph edges and {retained} connecting edges for n={n}, k={k}"));
    InvariantResult::new("edge_counts", failure)
}

pub fn oracle_equivalence(run: &MxstRun) -> InvariantResult {
    let oracle = mxst_bruteforce_table(&run.table);
    let (ours, theirs) = (run.tree.edge_set(), oracle.edge_set());
    let failure = (ours != theirs).then(|| {
        let missing: Vec<_> = theirs.difference(&ours).collect();
        let extra: Vec<_> = ours.difference(&theirs).collect();
        format!("missing {missing:?}, extra {extra:?}")
    });
    InvariantResult::new("oracle_equivalence", failure)
}

pub fn tree_is_spanning(run: &MxstRun) -> InvariantResult {
    let failure = (!validate_tree(&run.tree, run.fng.len())).then(|| "not a spanning tree".to_string());
    InvariantResult::new("tree_is_spanning", failure)
}

/// Every check above, in a fixed order.
pub fn check_run(run: &MxstRun, points: &PointSet) -> Vec<InvariantResult> {
    vec![
        increasing_chains(run),
        non_leaves_on_hull(run),
        spines_cross(run, points),
        cluster_contiguity(run),
        far_pair_clusters(run),
        fng_in_tree(run),
        edges_touch_hull(run),
        extra_edges_adjacent(run),
        edge_counts(run),
        tree_is_spanning(run),
        oracle_equivalence(run),
    ]
}

/// Build the tree and run every check.
pub fn check_all(spec: &NormSpec, points: &PointSet, tol: f64) -> Result<(MxstRun, Vec<InvariantResult>)> {
    let run = mxst_mpsy_detailed(spec, points, tol)?;
    let results = check_run(&run, points);
    Ok((run, results))
}
