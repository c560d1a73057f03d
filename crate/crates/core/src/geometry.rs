//! Norm-independent affine predicates and the convex hull.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Sign of `(b - a) x (c - a)`. Values within `tol` times the product of the
/// two Euclidean segment lengths count as collinear.
pub fn orientation(a: Vec2, b: Vec2, c: Vec2, tol: f64) -> Orientation {
    let u = b - a;
    let w = c - a;
    let cross = u.cross(w);
    let scale = u.euclid() * w.euclid();
    if cross.abs() <= tol * scale {
        Orientation::Collinear
    } else if cross > 0.0 {
        Orientation::Ccw
    } else {
        Orientation::Cw
    }
}

/// A closed line segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

impl Segment {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// Whether `p` lies on the closed segment `ab` up to `tol`.
pub fn on_segment(a: Vec2, b: Vec2, p: Vec2, tol: f64) -> bool {
    if p == a || p == b {
        return true;
    }
    if orientation(a, b, p, tol) != Orientation::Collinear {
        return false;
    }
    let d = b - a;
    let t = (p - a).dot(d) / d.dot(d);
    (-tol..=1.0 + tol).contains(&t)
}

/// True iff the open segments share a point, i.e. they cross at a point
/// interior to both.
pub fn segments_properly_intersect(s1: Segment, s2: Segment, tol: f64) -> Result<bool> {
    if s1.is_degenerate() || s2.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    let o1 = orientation(s1.a, s1.b, s2.a, tol);
    let o2 = orientation(s1.a, s1.b, s2.b, tol);
    let o3 = orientation(s2.a, s2.b, s1.a, tol);
    let o4 = orientation(s2.a, s2.b, s1.b, tol);
    let strict = |o: Orientation| o != Orientation::Collinear;
    Ok(strict(o1) && strict(o2) && strict(o3) && strict(o4) && o1 != o2 && o3 != o4)
}

/// True iff `a, b, c, d` in this order are the vertices of a convex
/// quadrilateral (either orientation).
pub fn is_convex_quadrilateral(a: Vec2, b: Vec2, c: Vec2, d: Vec2, tol: f64) -> bool {
    let turns = [
        orientation(a, b, c, tol),
        orientation(b, c, d, tol),
        orientation(c, d, a, tol),
        orientation(d, a, b, tol),
    ];
    turns[0] != Orientation::Collinear && turns.iter().all(|&t| t == turns[0])
}

/// Barycentric membership of `p` in the closed triangle `abc`.
pub fn point_in_triangle(p: Vec2, a: Vec2, b: Vec2, c: Vec2, tol: f64) -> Result<bool> {
    if orientation(a, b, c, tol) == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    let area = (b - a).cross(c - a);
    let wa = (b - p).cross(c - p) / area;
    let wb = (c - p).cross(a - p) / area;
    let wc = 1.0 - wa - wb;
    Ok(wa >= -tol && wb >= -tol && wc >= -tol)
}

/// Convex hull of an indexed point set with boundary tracking.
///
/// `vertices` holds the extreme points counterclockwise. `boundary` is the
/// counterclockwise traversal of every point on the hull boundary, collinear
/// points included, starting at `vertices[0]`. For an all-collinear input the
/// hull is the segment between the two extreme points and `boundary` lists
/// every point in order along it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullIndex {
    pub vertices: Vec<usize>,
    pub boundary: Vec<usize>,
    /// Rank of each point in `boundary`, `None` for interior points.
    pub position: Vec<Option<usize>>,
}

impl HullIndex {
    #[inline]
    pub fn is_boundary(&self, i: usize) -> bool {
        self.position[i].is_some()
    }

    #[inline]
    pub fn rank(&self, i: usize) -> Option<usize> {
        self.position[i]
    }

    pub fn is_vertex(&self, i: usize) -> bool {
        self.vertices.contains(&i)
    }

    /// All the input points are collinear.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }
}

fn lex_cmp(p: Vec2, q: Vec2) -> Ordering {
    p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
}

/// Monotone-chain convex hull that also records boundary points lying in
/// the relative interior of hull edges.
pub fn convex_hull(points: &[Vec2], tol: f64) -> Result<HullIndex> {
    let n = points.len();
    if n == 0 {
        return Err(Error::DegenerateInput("convex hull of an empty set".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lex_cmp(points[i], points[j]));
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::DuplicatePoints(i, j));
        }
    }
    let mut position = vec![None; n];
    if n == 1 {
        position[0] = Some(0);
        return Ok(HullIndex {
            vertices: vec![0],
            boundary: vec![0],
            position,
        });
    }

    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    let turns_left = |h: &[usize], p: usize| {
        let len = h.len();
        orientation(points[h[len - 2]], points[h[len - 1]], points[p], tol) == Orientation::Ccw
    };
    for &p in &order {
        while hull.len() >= 2 && !turns_left(&hull, p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && !turns_left(&hull, p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        // All points collinear: the hull is the segment between the two
        // lexicographic extremes and the traversal is the sorted order.
        for (rank, &i) in order.iter().enumerate() {
            position[i] = Some(rank);
        }
        return Ok(HullIndex {
            vertices: vec![order[0], order[n - 1]],
            boundary: order,
            position,
        });
    }

    let is_vertex = {
        let mut flags = vec![false; n];
        for &v in &hull {
            flags[v] = true;
        }
        flags
    };
    let mut taken = is_vertex.clone();
    let mut boundary = Vec::with_capacity(hull.len());
    let h = hull.len();
    for e in 0..h {
        let a = points[hull[e]];
        let b = points[hull[(e + 1) % h]];
        boundary.push(hull[e]);
        let d = b - a;
        let mut on_edge: Vec<(f64, usize)> = (0..n)
            .filter(|&i| !taken[i] && on_segment(a, b, points[i], tol))
            .map(|i| ((points[i] - a).dot(d), i))
            .collect();
        on_edge.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (_, i) in on_edge {
            taken[i] = true;
            boundary.push(i);
        }
    }
    for (rank, &i) in boundary.iter().enumerate() {
        position[i] = Some(rank);
    }
    Ok(HullIndex {
        vertices: hull,
        boundary,
        position,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    const TOL: f64 = 1e-9;

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0), TOL), Orientation::Ccw);
        assert_eq!(orientation(v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0), TOL), Orientation::Collinear);
        assert_eq!(orientation(v(0.0, 0.0), v(0.0, 1.0), v(1.0, 0.0), TOL), Orientation::Cw);
    }

    #[test]
    fn orientation_is_scale_invariant() {
        let (a, b, c) = (v(0.0, 0.0), v(1.0, 0.0), v(2.0, 1e-12));
        for s in [1e-6, 1.0, 1e6] {
            assert_eq!(orientation(a * s, b * s, c * s, TOL), Orientation::Collinear);
        }
    }

    #[test]
    fn hull_of_square_with_center() {
        let pts = [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0), v(0.5, 0.5)];
        let hull = convex_hull(&pts, TOL).unwrap();
        let mut verts = hull.vertices.clone();
        verts.sort();
        assert_eq!(verts, vec![0, 1, 2, 3]);
        assert!(!hull.is_boundary(4));
        assert_eq!(hull.boundary.len(), 4);
    }

    #[test]
    fn hull_is_counterclockwise() {
        let pts = [v(0.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), v(1.0, 0.0)];
        let hull = convex_hull(&pts, TOL).unwrap();
        let h = hull.vertices.len();
        for i in 0..h {
            let a = pts[hull.vertices[i]];
            let b = pts[hull.vertices[(i + 1) % h]];
            let c = pts[hull.vertices[(i + 2) % h]];
            assert_eq!(orientation(a, b, c, TOL), Orientation::Ccw);
        }
    }

    #[test]
    fn collinear_hull() {
        let pts = [v(0.0, 0.0), v(1.0, 0.0), v(3.0, 0.0)];
        let hull = convex_hull(&pts, TOL).unwrap();
        assert_eq!(hull.vertices, vec![0, 2]);
        assert_eq!(hull.boundary, vec![0, 1, 2]);
        assert!(hull.is_degenerate());
    }

    #[test]
    fn collinear_boundary_points_are_tracked() {
        let pts = [v(0.0, 0.0), v(2.0, 0.0), v(1.0, 0.0), v(2.0, 2.0), v(0.0, 2.0), v(1.0, 1.0)];
        let hull = convex_hull(&pts, TOL).unwrap();
        assert_eq!(hull.vertices.len(), 4);
        assert!(hull.is_boundary(2));
        assert!(!hull.is_vertex(2));
        assert!(!hull.is_boundary(5));
        let r0 = hull.rank(0).unwrap();
        assert_eq!(hull.rank(2).unwrap(), r0 + 1);
        assert_eq!(hull.rank(1).unwrap(), r0 + 2);
    }

    #[test]
    fn hull_rejects_duplicates_and_empty() {
        assert_eq!(
            convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 0.0)], TOL),
            Err(Error::DuplicatePoints(0, 2))
        );
        assert!(convex_hull(&[], TOL).is_err());
        let single = convex_hull(&[v(3.0, 3.0)], TOL).unwrap();
        assert_eq!(single.vertices, vec![0]);
    }

    #[test]
    fn proper_intersection() {
        let s = |a: (f64, f64), b: (f64, f64)| Segment::new(a.into(), b.into());
        assert!(segments_properly_intersect(s((0., 0.), (1., 1.)), s((1., 0.), (0., 1.)), TOL).unwrap());
        assert!(!segments_properly_intersect(s((0., 0.), (1., 0.)), s((0., 1.), (1., 1.)), TOL).unwrap());
        assert!(!segments_properly_intersect(s((0., 0.), (1., 0.)), s((1., 0.), (1., 1.)), TOL).unwrap());
        // T-junction: one endpoint touches the other segment's interior.
        assert!(!segments_properly_intersect(s((0., 0.), (2., 0.)), s((1., 0.), (1., 1.)), TOL).unwrap());
        assert_eq!(
            segments_properly_intersect(s((0., 0.), (0., 0.)), s((1., 0.), (1., 1.)), TOL),
            Err(Error::DegenerateSegment)
        );
    }

    #[test]
    fn convex_quadrilaterals() {
        let (a, b, c, d) = (v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0));
        assert!(is_convex_quadrilateral(a, b, c, d, TOL));
        assert!(is_convex_quadrilateral(d, c, b, a, TOL));
        assert!(!is_convex_quadrilateral(a, c, b, d, TOL));
        assert!(!is_convex_quadrilateral(a, v(0.5, 0.0), b, c, TOL));
    }

    #[test]
    fn triangle_membership() {
        let (a, b, c) = (v(0.0, 0.0), v(4.0, 0.0), v(1.0, 3.0));
        let centroid = v(5.0 / 3.0, 1.0);
        assert!(point_in_triangle(centroid, a, b, c, TOL).unwrap());
        assert!(point_in_triangle(a, a, b, c, TOL).unwrap());
        assert!(point_in_triangle(a.midpoint(b), a, b, c, TOL).unwrap());
        // Reflection of the centroid across ab.
        assert!(!point_in_triangle(v(5.0 / 3.0, -1.0), a, b, c, TOL).unwrap());
        assert_eq!(
            point_in_triangle(centroid, a, b, v(8.0, 0.0), TOL),
            Err(Error::DegenerateTriangle)
        );
    }
}
