//! Point sets, distance tables and tie diagnostics.

use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::NormSpec;
use crate::vec2::Vec2;

/// Indexed planar points, pairwise distinct and finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<Vec2>,
}

impl PointSet {
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| {
            points[i]
                .x
                .total_cmp(&points[j].x)
                .then(points[i].y.total_cmp(&points[j].y))
        });
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::DuplicatePoints(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(PointSet { points })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Vec2] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec2> {
        self.points.iter()
    }

    pub fn into_inner(self) -> Vec<Vec2> {
        self.points
    }
}

impl Index<usize> for PointSet {
    type Output = Vec2;
    #[inline]
    fn index(&self, i: usize) -> &Vec2 {
        &self.points[i]
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Vec2;
    type IntoIter = std::slice::Iter<'a, Vec2>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Symmetric table of pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<f64>,
}

impl DistanceTable {
    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Recompute row and column `i` after point `i` moved.
    pub(crate) fn refresh_point(&mut self, spec: &NormSpec, points: &[Vec2], i: usize) {
        for j in 0..self.n {
            if j != i {
                let w = spec.distance(points[i], points[j]);
                self.d[i * self.n + j] = w;
                self.d[j * self.n + i] = w;
            }
        }
    }

    /// Unordered pairs `(i, j)`, `i < j`, with their distances.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn max_distance(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// Full table in `n(n-1)/2` norm evaluations.
pub fn pairwise_distances(spec: &NormSpec, points: &PointSet) -> Result<DistanceTable> {
    let n = points.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = spec.distance(points[i], points[j]);
            if w.is_nan() || w <= 0.0 {
                return Err(Error::DuplicatePoints(i, j));
            }
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    Ok(DistanceTable { n, d })
}

/// Two distinct unordered pairs whose distances agree within tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tie {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

impl Tie {
    pub fn involves(&self, p: usize) -> bool {
        self.first.0 == p || self.first.1 == p || self.second.0 == p || self.second.1 == p
    }

    pub fn contains_pair(&self, pair: (usize, usize)) -> bool {
        let pair = (pair.0.min(pair.1), pair.0.max(pair.1));
        self.first == pair || self.second == pair
    }
}

fn sorted_pairs(table: &DistanceTable) -> Vec<(f64, (usize, usize))> {
    let mut v: Vec<(f64, (usize, usize))> = table.pairs().map(|(i, j, w)| (w, (i, j))).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

/// Every pair of index pairs `{i, j} != {k, l}` with
/// `|d[i][j] - d[k][l]| <= tol`, in lexicographic order.
pub fn detect_ties(table: &DistanceTable, tol: f64) -> Vec<Tie> {
    let v = sorted_pairs(table);
    let mut ties = Vec::new();
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            if v[b].0 - v[a].0 > tol {
                break;
            }
            let (first, second) = if v[a].1 < v[b].1 {
                (v[a].1, v[b].1)
            } else {
                (v[b].1, v[a].1)
            };
            ties.push(Tie { first, second });
        }
    }
    ties.sort();
    ties
}

/// Cheap emptiness check equivalent to `detect_ties(..).is_empty()`.
pub fn has_ties(table: &DistanceTable, tol: f64) -> bool {
    count_ties(table, tol) > 0
}

/// Number of ties `detect_ties` would report, without materializing them.
pub fn count_ties(table: &DistanceTable, tol: f64) -> usize {
    let mut w: Vec<f64> = table.pairs().map(|(_, _, w)| w).collect();
    w.sort_by(f64::total_cmp);
    let mut count = 0;
    for a in 0..w.len() {
        count += w[a + 1..].iter().take_while(|&&x| x - w[a] <= tol).count();
    }
    count
}

/// Smallest positive gap between distinct distance values.
///
/// Values whose consecutive differences are at most `tol` are merged into
/// one cluster; the gap between two clusters is measured from the largest
/// value of the lower one to the smallest of the upper one. Returns
/// `f64::INFINITY` when there is at most one cluster.
pub fn min_distance_gap(table: &DistanceTable, tol: f64) -> f64 {
    let values: Vec<f64> = table.pairs().map(|(_, _, w)| w).collect();
    min_value_gap(&values, tol)
}

/// [`min_distance_gap`] over an arbitrary list of values.
pub fn min_value_gap(values: &[f64], tol: f64) -> f64 {
    let mut w = values.to_vec();
    w.sort_by(f64::total_cmp);
    w.windows(2)
        .map(|p| p[1] - p[0])
        .filter(|&g| g > tol)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(coords: &[(f64, f64)]) -> PointSet {
        PointSet::new(coords.iter().map(|&c| Vec2::from(c)).collect()).unwrap()
    }

    #[test]
    fn rejects_duplicates_and_non_finite() {
        let dup = PointSet::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.0)]);
        assert_eq!(dup, Err(Error::DuplicatePoints(0, 2)));
        let nan = PointSet::new(vec![Vec2::new(0.0, f64::NAN)]);
        assert_eq!(nan, Err(Error::NonFinite(0)));
    }

    #[test]
    fn table_examples() {
        let t = pairwise_distances(&NormSpec::euclidean(), &set(&[(0.0, 0.0), (3.0, 4.0)])).unwrap();
        assert_eq!(t.get(0, 1), 5.0);
        assert_eq!(t.get(1, 0), 5.0);
        assert_eq!(t.get(0, 0), 0.0);

        let t = pairwise_distances(&NormSpec::l1(), &set(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)])).unwrap();
        let mut d: Vec<f64> = t.pairs().map(|p| p.2).collect();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn square_ties() {
        let sq = set(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = pairwise_distances(&NormSpec::euclidean(), &sq).unwrap();
        let ties = detect_ties(&t, 1e-9);
        // C(4,2) among sides plus one between the diagonals.
        assert_eq!(ties.len(), 7);
        assert!(ties.contains(&Tie { first: (0, 2), second: (1, 3) }));
        assert_eq!(count_ties(&t, 1e-9), 7);
    }

    #[test]
    fn equilateral_ties() {
        let s = 3f64.sqrt();
        let tri = set(&[(0.0, 0.0), (2.0, 0.0), (1.0, s)]);
        let t = pairwise_distances(&NormSpec::euclidean(), &tri).unwrap();
        assert_eq!(detect_ties(&t, 1e-9).len(), 3);
    }

    #[test]
    fn min_gap_examples() {
        assert_eq!(min_value_gap(&[1.0, 2.0, 3.0], 1e-12), 1.0);
        assert_eq!(min_value_gap(&[1.0, 1.0, 5.0], 1e-12), 4.0);
        assert_eq!(min_value_gap(&[5.0, 1.0 + 1e-13, 1.0], 1e-12), 4.0 - 1e-13);
        assert_eq!(min_value_gap(&[2.0], 1e-12), f64::INFINITY);

        // L1 distances 1, 1, 5, 2, 4, 6.
        let t = pairwise_distances(
            &NormSpec::l1(),
            &set(&[(0.0, 0.0), (1.0, 0.0), (-0.5, -0.5), (2.5, 2.5)]),
        )
        .unwrap();
        assert_eq!(min_distance_gap(&t, 1e-12), 1.0);
        let t = pairwise_distances(&NormSpec::l1(), &set(&[(0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert_eq!(min_distance_gap(&t, 1e-12), f64::INFINITY);
    }
}
