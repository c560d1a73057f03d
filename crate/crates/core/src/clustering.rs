//! Min-max-diameter 2-clustering on top of the maximum spanning tree.
//!
//! The long tree edges must be cut by any split whose clusters are shorter
//! than those edges. Feasibility of a threshold is therefore a line
//! transversal question: is there a line that puts the two endpoints of every
//! remaining long edge on opposite sides? The threshold is found by binary
//! search over the sorted tree edge lengths.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mxst::{mxst_mpsy, WeightedEdge};
use crate::norm::NormSpec;
use crate::points::{pairwise_distances, DistanceTable, PointSet};
use crate::geometry::Segment;
use crate::vec2::Vec2;

/// The line `a x + b y = c` with `a^2 + b^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    /// Normalizes `(a, b)`; `None` if it is zero or not finite.
    pub fn new(a: f64, b: f64, c: f64) -> Option<Line> {
        let r = a.hypot(b);
        if !r.is_finite() || r <= 0.0 || !c.is_finite() {
            return None;
        }
        Some(Line {
            a: a / r,
            b: b / r,
            c: c / r,
        })
    }

    pub fn through(p: Vec2, q: Vec2) -> Option<Line> {
        let n = (q - p).perp();
        Line::new(n.x, n.y, n.x * p.x + n.y * p.y)
    }

    pub fn normal(&self) -> Vec2 {
        Vec2::new(self.a, self.b)
    }

    /// Signed Euclidean distance of `p` from the line.
    #[inline]
    pub fn eval(&self, p: Vec2) -> f64 {
        self.a * p.x + self.b * p.y - self.c
    }

    pub fn meets_segment(&self, s: &Segment, tol: f64) -> bool {
        let (u, v) = (self.eval(s.a), self.eval(s.b));
        u.min(v) <= tol && u.max(v) >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub diam_a: f64,
    pub diam_b: f64,
    pub value: f64,
    pub witness_line: Option<Line>,
}

impl Bipartition {
    fn from_sides(table: &DistanceTable, side_a: Vec<usize>, side_b: Vec<usize>, witness_line: Option<Line>) -> Self {
        let diam_a = table_diameter(table, &side_a);
        let diam_b = table_diameter(table, &side_b);
        Bipartition {
            side_a,
            side_b,
            diam_a,
            diam_b,
            value: diam_a.max(diam_b),
            witness_line,
        }
    }
}

fn table_diameter(table: &DistanceTable, subset: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (s, &i) in subset.iter().enumerate() {
        for &j in &subset[s + 1..] {
            best = best.max(table.get(i, j));
        }
    }
    best
}

/// Largest pairwise distance within `subset`; 0 for at most one point.
pub fn diameter(spec: &NormSpec, points: &PointSet, subset: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (s, &i) in subset.iter().enumerate() {
        for &j in &subset[s + 1..] {
            best = best.max(spec.distance(points[i], points[j]));
        }
    }
    best
}

/// First line through two segment endpoints that meets every segment within
/// `tol`, if any. A single segment yields its supporting line.
pub fn stabbing_line(segments: &[Segment], tol: f64) -> Result<Option<Line>> {
    if segments.iter().any(Segment::is_degenerate) {
        return Err(Error::DegenerateSegment);
    }
    if let [s] = segments {
        return Ok(Line::through(s.a, s.b));
    }
    let ends: Vec<Vec2> = segments.iter().flat_map(|s| [s.a, s.b]).collect();
    for (u, &p) in ends.iter().enumerate() {
        for &q in &ends[u + 1..] {
            if p == q {
                continue;
            }
            if let Some(line) = Line::through(p, q) {
                if segments.iter().all(|s| line.meets_segment(s, tol)) {
                    return Ok(Some(line));
                }
            }
        }
    }
    Ok(None)
}

/// Points of `points` on each side: `eval <= 0` first.
fn split_by(line: &Line, points: &[Vec2]) -> (Vec<usize>, Vec<usize>) {
    (0..points.len()).partition(|&i| line.eval(points[i]) <= 0.0)
}

/// A line with the endpoints of every edge strictly on opposite sides, with
/// every point of `points` off the line.
///
/// Candidates are lines through two edge endpoints. Points lying on a
/// candidate are ordered along it; each way of cutting that order and
/// handing the two parts to the two sides is realized by a small rotation
/// about a pivot between consecutive on-line points (or a small shift when
/// one part is empty). The realized line is re-checked before it is returned.
pub fn separating_line(points: &[Vec2], edges: &[(usize, usize)], tol: f64) -> Option<Line> {
    if edges.is_empty() {
        return None;
    }
    let mut ends: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ends.sort_unstable();
    ends.dedup();
    let scale = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(1.0, f64::max);
    let on_tol = tol * scale;

    for (s, &i) in ends.iter().enumerate() {
        for &j in &ends[s + 1..] {
            let Some(base) = Line::through(points[i], points[j]) else {
                continue;
            };
            if let Some(line) = realize(&base, points, edges, on_tol) {
                return Some(line);
            }
        }
    }
    None
}

fn realize(base: &Line, points: &[Vec2], edges: &[(usize, usize)], on_tol: f64) -> Option<Line> {
    let dir = Vec2::new(-base.b, base.a);
    let values: Vec<f64> = points.iter().map(|&p| base.eval(p)).collect();
    let mut on: Vec<(f64, usize)> = (0..points.len())
        .filter(|&i| values[i].abs() <= on_tol)
        .map(|i| (points[i].dot(dir), i))
        .collect();
    on.sort_by(|a, b| a.0.total_cmp(&b.0));
    let margin = values
        .iter()
        .filter(|v| v.abs() > on_tol)
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let margin = if margin.is_finite() { margin } else { 1.0 };
    let z = on.len();

    let mut sign = vec![false; points.len()];
    for (i, &v) in values.iter().enumerate() {
        sign[i] = v > 0.0;
    }
    for cut in 0..=z {
        for low_positive in [false, true] {
            for (r, &(_, i)) in on.iter().enumerate() {
                sign[i] = (r < cut) == low_positive;
            }
            if !edges.iter().all(|&(u, v)| sign[u] != sign[v]) {
                continue;
            }
            let line = if cut == 0 || cut == z {
                // One part is empty: shift the whole line.
                let all_positive = if cut == 0 { !low_positive } else { low_positive };
                let shift = 0.5 * margin.min(1.0);
                let c = if all_positive { base.c - shift } else { base.c + shift };
                Line::new(base.a, base.b, c)
            } else {
                let t0 = 0.5 * (on[cut - 1].0 + on[cut].0);
                let pivot = points[on[cut - 1].1].lerp(points[on[cut].1], 0.5);
                let reach = points
                    .iter()
                    .map(|&p| (p.dot(dir) - t0).abs())
                    .fold(0.0, f64::max);
                let theta = 0.5 * margin / reach.max(f64::MIN_POSITIVE);
                let theta = theta.min(0.1);
                // Rotating the normal by +theta raises eval for points ahead
                // of the pivot along `dir`.
                let theta = if low_positive { -theta } else { theta };
                let (sn, cs) = theta.sin_cos();
                let n = Vec2::new(base.a * cs - base.b * sn, base.a * sn + base.b * cs);
                Line::new(n.x, n.y, n.dot(pivot))
            };
            let Some(line) = line else { continue };
            let ok = points.iter().enumerate().all(|(i, &p)| {
                let v = line.eval(p);
                v != 0.0 && (v > 0.0) == sign[i]
            });
            if ok {
                return Some(line);
            }
        }
    }
    None
}

/// Optimal split for the min-max-diameter objective via the spanning tree.
///
/// Requires tie-free distances at `tol`. Threshold index 0 keeps every tree
/// edge; index `i >= 1` keeps the edges longer than the `i`-th smallest edge
/// length. Feasibility is monotone in the index and the smallest feasible
/// index determines the split.
pub fn two_clustering(spec: &NormSpec, points: &PointSet, tol: f64) -> Result<Bipartition> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateInput("2-clustering needs at least two points".into()));
    }
    let (tree, _) = mxst_mpsy(spec, points, tol)?;
    let table = pairwise_distances(spec, points)?;
    let mut lengths: Vec<f64> = tree.edges.iter().map(|e| e.w).collect();
    lengths.sort_by(f64::total_cmp);

    let kept = |idx: usize| -> Vec<(usize, usize)> {
        let d = if idx == 0 { f64::NEG_INFINITY } else { lengths[idx - 1] };
        tree.edges.iter().filter(|e| e.w > d).map(WeightedEdge::key).collect()
    };
    let longest = *tree
        .edges
        .iter()
        .max_by(|a, b| a.w.total_cmp(&b.w))
        .expect("a tree on two or more points has an edge");
    let witness = |idx: usize| -> Option<Line> {
        let e = kept(idx);
        if e.is_empty() {
            Line::through(points[longest.i], points[longest.j])
        } else {
            separating_line(points.as_slice(), &e, tol)
        }
    };

    // Index n-1 keeps no edge and is feasible by convention.
    let (mut lo, mut hi) = (0usize, n - 1);
    let mut best = witness(hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match witness(mid) {
            Some(line) => {
                hi = mid;
                best = Some(line);
            }
            None => lo = mid + 1,
        }
    }
    if lo > 0 && witness(lo - 1).is_some() {
        return Err(Error::StructureViolation(format!(
            "threshold feasibility is not monotone at index {}",
            lo - 1
        )));
    }
    let line = best.ok_or_else(|| Error::StructureViolation("no feasible threshold".into()))?;
    let (side_a, side_b) = split_by(&line, points.as_slice());
    Ok(Bipartition::from_sides(&table, side_a, side_b, Some(line)))
}

/// Limit for the exhaustive oracle.
pub const BRUTEFORCE_LIMIT: usize = 16;

/// Exhaustive minimum over all splits into two nonempty parts. Among equal
/// values the lexicographically smallest `side_a` wins.
pub fn two_clustering_bruteforce(spec: &NormSpec, points: &PointSet) -> Result<Bipartition> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateInput("2-clustering needs at least two points".into()));
    }
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let table = pairwise_distances(spec, points)?;
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    // Point 0 always sits in side_a; bit t set puts point t + 1 in side_b.
    for mask in 1u32..(1u32 << (n - 1)) {
        let (mut a, mut b) = (vec![0], Vec::new());
        for p in 1..n {
            if mask >> (p - 1) & 1 == 1 {
                b.push(p);
            } else {
                a.push(p);
            }
        }
        let value = table_diameter(&table, &a).max(table_diameter(&table, &b));
        let better = match &best {
            None => true,
            Some((v, ba, _)) => value < *v || (value == *v && a < *ba),
        };
        if better {
            best = Some((value, a, b));
        }
    }
    let (_, a, b) = best.expect("n >= 2 gives at least one split");
    Ok(Bipartition::from_sides(&table, a, b, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&c| Vec2::from(c)).collect()).unwrap()
    }

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(a.into(), b.into())
    }

    #[test]
    fn diameter_examples() {
        let s = set(&[(0.0, 0.0), (3.0, 4.0), (1.0, 1.0)]);
        let e = NormSpec::euclidean();
        assert_eq!(diameter(&e, &s, &[2]), 0.0);
        assert_eq!(diameter(&e, &s, &[]), 0.0);
        assert_eq!(diameter(&e, &s, &[0, 1]), 5.0);
    }

    #[test]
    fn stabbing_examples() {
        let one = [seg((0.0, 0.0), (2.0, 1.0))];
        let l = stabbing_line(&one, 1e-9).unwrap().unwrap();
        assert!(l.eval(Vec2::new(0.0, 0.0)).abs() < 1e-12);
        assert!(l.eval(Vec2::new(2.0, 1.0)).abs() < 1e-12);

        let two = [seg((0.0, 0.0), (0.0, 1.0)), seg((2.0, 0.0), (2.0, 1.0))];
        let l = stabbing_line(&two, 1e-9).unwrap().unwrap();
        assert!(two.iter().all(|s| l.meets_segment(s, 1e-9)));

        let tiny = [
            seg((0.0, 0.0), (0.1, 0.0)),
            seg((10.0, 0.0), (10.1, 0.0)),
            seg((5.0, 10.0), (5.1, 10.0)),
        ];
        assert_eq!(stabbing_line(&tiny, 1e-9).unwrap(), None);

        let bad = [seg((1.0, 1.0), (1.0, 1.0))];
        assert_eq!(stabbing_line(&bad, 1e-9), Err(Error::DegenerateSegment));
    }

    #[test]
    fn separating_line_handles_collinear_endpoints() {
        // Four points on a line; only a cut between 1 and 2 separates both
        // edges, and it needs a rotation about a point between them.
        let pts: Vec<Vec2> = (0..4).map(|i| Vec2::new(i as f64, 0.0)).collect();
        let l = separating_line(&pts, &[(0, 2), (1, 3)], 1e-9).unwrap();
        let s: Vec<bool> = pts.iter().map(|&p| l.eval(p) > 0.0).collect();
        assert_eq!(s[0], s[1]);
        assert_ne!(s[1], s[2]);
        assert_eq!(s[2], s[3]);
        assert!(pts.iter().all(|&p| l.eval(p) != 0.0));
        // The middle point of three collinear ones cannot be cut off.
        assert_eq!(separating_line(&pts[..3], &[(0, 1), (1, 2)], 1e-9), None);
        // A triangle of edges cannot be 2-colored.
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert_eq!(separating_line(&tri, &[(0, 1), (1, 2), (0, 2)], 1e-9), None);
    }

    #[test]
    fn clustering_examples() {
        let e = NormSpec::euclidean();
        let two = set(&[(0.0, 0.0), (1.0, 2.0)]);
        let b = two_clustering(&e, &two, 1e-9).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(b.side_a.len() + b.side_b.len(), 2);
        assert_eq!(two_clustering_bruteforce(&e, &two).unwrap().value, 0.0);

        let tri = set(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        let b = two_clustering(&e, &tri, 1e-9).unwrap();
        assert_eq!(b.value, 3.0);
        let bf = two_clustering_bruteforce(&e, &tri).unwrap();
        assert_eq!(bf.value, 3.0);
        assert_eq!(bf.side_a, vec![0, 1]);
        assert_eq!(bf.side_b, vec![2]);

        let four = set(&[(0.0, 0.0), (0.0, 1.0), (6.0, 0.0), (6.0, 1.1)]);
        let b = two_clustering(&e, &four, 1e-9).unwrap();
        assert!((b.value - 1.1).abs() < 1e-12);
        let mut sides = [b.side_a.clone(), b.side_b.clone()];
        sides.sort();
        assert_eq!(sides, [vec![0, 1], vec![2, 3]]);
        assert_eq!(two_clustering_bruteforce(&e, &four).unwrap().value, b.value);
    }

    #[test]
    fn bruteforce_limit() {
        let pts: Vec<(f64, f64)> = (0..17).map(|i| (i as f64, (i * i) as f64)).collect();
        assert_eq!(
            two_clustering_bruteforce(&NormSpec::euclidean(), &set(&pts)),
            Err(Error::TooLarge { n: 17, limit: 16 })
        );
    }

    #[test]
    fn random_lp3_n12_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = NormSpec::lp(3.0).unwrap();
        let pts: Vec<Vec2> = (0..12).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
        let s = PointSet::new(pts).unwrap();
        let fast = two_clustering(&n, &s, 1e-9).unwrap();
        let slow = two_clustering_bruteforce(&n, &s).unwrap();
        assert_eq!(fast.value, slow.value);
        let line = fast.witness_line.unwrap();
        for (i, &p) in s.iter().enumerate() {
            assert_eq!(line.eval(p) <= 0.0, fast.side_a.contains(&i));
        }
    }

    /// Existence of a transversal by sweeping normal directions; for a fixed
    /// direction the projections must share a common value.
    fn sweep_oracle(segments: &[Segment]) -> bool {
        const ANGLES: usize = 720 * 64;
        (0..ANGLES).any(|k| {
            let t = std::f64::consts::PI * k as f64 / ANGLES as f64;
            let n = Vec2::new(t.cos(), t.sin());
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for s in segments {
                let (u, v) = (n.dot(s.a), n.dot(s.b));
                lo = lo.max(u.min(v));
                hi = hi.min(u.max(v));
            }
            lo <= hi
        })
    }

    #[test]
    fn stabbing_agrees_with_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let mut found = 0;
        for _ in 0..200 {
            let m = rng.gen_range(2..=6);
            let segments: Vec<Segment> = (0..m)
                .map(|_| {
                    let a = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
                    let len = rng.gen_range(0.5..8.0);
                    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    Segment::new(a, a + Vec2::new(t.cos(), t.sin()) * len)
                })
                .collect();
            let fast = stabbing_line(&segments, 1e-9).unwrap();
            if let Some(l) = fast {
                assert!(segments.iter().all(|s| l.meets_segment(s, 1e-9)));
                found += 1;
            }
            assert_eq!(fast.is_some(), sweep_oracle(&segments), "{segments:?}");
        }
        assert!(found > 20 && found < 180, "{found}");
    }
}
