//! Planar norms and the metric primitives built on them.
//!
//! A [`NormSpec`] is validated on construction, so every value of the type
//! describes a genuine norm and evaluation is infallible. Three families are
//! supported: Euclidean, `Lp` for `1 <= p <= inf`, and gauges of centrally
//! symmetric convex polygons.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Default absolute tolerance on norm-value comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The family a norm belongs to.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormKind {
    Euclidean,
    /// `p = f64::INFINITY` encodes the maximum norm.
    Lp { p: f64 },
    Polygonal { vertices: Vec<Vec2> },
}

/// One edge of a polygonal unit ball written as `{v : normal . v = offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Facet {
    normal: Vec2,
    offset: f64,
}

/// A validated planar norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
    facets: Vec<Facet>,
}

impl NormSpec {
    pub fn euclidean() -> Self {
        NormSpec {
            kind: NormKind::Euclidean,
            facets: Vec::new(),
        }
    }

    pub fn l1() -> Self {
        NormSpec {
            kind: NormKind::Lp { p: 1.0 },
            facets: Vec::new(),
        }
    }

    pub fn linf() -> Self {
        NormSpec {
            kind: NormKind::Lp { p: f64::INFINITY },
            facets: Vec::new(),
        }
    }

    pub fn lp(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidNorm(format!("Lp requires p >= 1, got {p}")));
        }
        Ok(NormSpec {
            kind: NormKind::Lp { p },
            facets: Vec::new(),
        })
    }

    /// Gauge of the polygon with the given vertices.
    ///
    /// The vertices must be listed counterclockwise, form a strictly convex
    /// polygon, be centrally symmetric and contain the origin in the interior.
    pub fn polygonal(vertices: Vec<Vec2>) -> Result<Self> {
        let facets = validate_polygon(&vertices, DEFAULT_TOL)?;
        Ok(NormSpec {
            kind: NormKind::Polygonal { vertices },
            facets,
        })
    }

    /// The unit square `{(+-1, +-1)}`; its gauge is the maximum norm.
    pub fn unit_square() -> Self {
        Self::polygonal(vec![
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ])
        .expect("unit square is a valid unit ball")
    }

    /// The diamond `{(+-1, 0), (0, +-1)}`; its gauge is the L1 norm.
    pub fn diamond() -> Self {
        Self::polygonal(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ])
        .expect("diamond is a valid unit ball")
    }

    /// Parse the textual norm grammar: `euclidean`, `lp:<p>`, `l1`, `linf`,
    /// or `polygon:<path>` where the file holds a JSON array of `[x, y]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        match s {
            "euclidean" | "l2" => return Ok(Self::euclidean()),
            "l1" => return Ok(Self::l1()),
            "linf" => return Ok(Self::linf()),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("lp:") {
            let p = match p.trim() {
                "inf" | "infinity" => f64::INFINITY,
                other => other
                    .parse::<f64>()
                    .map_err(|_| Error::NormParse(spec.to_string()))?,
            };
            return Self::lp(p);
        }
        if let Some(path) = s.strip_prefix("polygon:") {
            return Self::polygon_from_file(Path::new(path));
        }
        Err(Error::NormParse(spec.to_string()))
    }

    pub fn polygon_from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let raw: Vec<[f64; 2]> = serde_json::from_str(&text)
            .map_err(|e| Error::NormParse(format!("{}: {e}", path.display())))?;
        Self::polygonal(raw.into_iter().map(Vec2::from).collect())
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// Evaluate `||v||`.
    pub fn eval(&self, v: Vec2) -> f64 {
        match &self.kind {
            NormKind::Euclidean => v.x.hypot(v.y),
            NormKind::Lp { p } => lp_norm(v, *p),
            NormKind::Polygonal { vertices } => polygon_gauge(vertices, &self.facets, v),
        }
    }

    #[inline]
    pub fn distance(&self, p: Vec2, q: Vec2) -> f64 {
        self.eval(p - q)
    }

    /// Whether the unit sphere contains no segment.
    pub fn is_strictly_convex(&self) -> bool {
        match &self.kind {
            NormKind::Euclidean => true,
            NormKind::Lp { p } => *p > 1.0 && p.is_finite(),
            NormKind::Polygonal { .. } => false,
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NormKind::Euclidean => write!(f, "euclidean"),
            NormKind::Lp { p } if *p == 1.0 => write!(f, "l1"),
            NormKind::Lp { p } if p.is_infinite() => write!(f, "linf"),
            NormKind::Lp { p } => write!(f, "lp:{p}"),
            NormKind::Polygonal { vertices } => write!(f, "polygon[{}]", vertices.len()),
        }
    }
}

fn lp_norm(v: Vec2, p: f64) -> f64 {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    if p == 1.0 {
        return ax + ay;
    }
    if p == 2.0 {
        return ax.hypot(ay);
    }
    let m = ax.max(ay);
    if p.is_infinite() || m == 0.0 {
        return m;
    }
    // Scaling by the larger coordinate keeps the powers in [0, 1].
    let (rx, ry) = (ax / m, ay / m);
    m * (rx.powf(p) + ry.powf(p)).powf(1.0 / p)
}

fn polygon_gauge(vertices: &[Vec2], facets: &[Facet], v: Vec2) -> f64 {
    if v == Vec2::ZERO {
        return 0.0;
    }
    let m = vertices.len();
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        if a.cross(v) >= 0.0 && v.cross(b) >= 0.0 {
            let facet = facets[i];
            return facet.normal.dot(v) / facet.offset;
        }
    }
    // Rounding left the ray between two cones; the gauge of a convex
    // polygon around the origin is the largest facet value anyway.
    facets
        .iter()
        .map(|f| f.normal.dot(v) / f.offset)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn validate_polygon(vertices: &[Vec2], tol: f64) -> Result<Vec<Facet>> {
    let m = vertices.len();
    if m < 4 {
        return Err(Error::InvalidNorm(format!(
            "a centrally symmetric polygon needs at least 4 vertices, got {m}"
        )));
    }
    if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidNorm(format!("vertex {i} is not finite")));
    }
    let scale = vertices.iter().map(|v| v.euclid()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::InvalidNorm("all vertices at the origin".into()));
    }
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let c = vertices[(i + 2) % m];
        if (b - a).cross(c - b) <= tol * scale * scale {
            return Err(Error::InvalidNorm(format!(
                "vertices are not strictly convex and counterclockwise at vertex {}",
                (i + 1) % m
            )));
        }
    }
    for (i, v) in vertices.iter().enumerate() {
        if !vertices.iter().any(|w| (*v + *w).euclid() <= tol * scale) {
            return Err(Error::InvalidNorm(format!(
                "polygon is not centrally symmetric: no vertex opposite to vertex {i}"
            )));
        }
    }
    let mut facets = Vec::with_capacity(m);
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let normal = Vec2::new(b.y - a.y, a.x - b.x);
        let offset = normal.dot(a);
        if offset <= tol * scale * normal.euclid() {
            return Err(Error::InvalidNorm(
                "origin is not strictly inside the polygon".into(),
            ));
        }
        facets.push(Facet { normal, offset });
    }
    // Turning once around the origin rules out star-shaped vertex lists that
    // pass the local convexity test.
    let winding: f64 = (0..m)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % m];
            a.cross(b).atan2(a.dot(b))
        })
        .sum();
    if (winding - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(Error::InvalidNorm("vertex list winds more than once".into()));
    }
    Ok(facets)
}

/// `||v||` under `spec`.
#[inline]
pub fn evaluate_norm(spec: &NormSpec, v: Vec2) -> f64 {
    spec.eval(v)
}

/// `||p - q||` under `spec`.
#[inline]
pub fn distance(spec: &NormSpec, p: Vec2, q: Vec2) -> f64 {
    spec.distance(p, q)
}

#[inline]
pub fn is_strictly_convex(spec: &NormSpec) -> bool {
    spec.is_strictly_convex()
}

/// Minimum of the convex function `lambda -> ||x + lambda y||` over `[lo, hi]`.
fn min_along_line(spec: &NormSpec, x: Vec2, y: Vec2, mut lo: f64, mut hi: f64) -> f64 {
    let f = |l: f64| spec.eval(x + y * l);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo <= f64::EPSILON * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    f(0.5 * (lo + hi)).min(f(0.0))
}

/// Birkhoff orthogonality `x ⊥ y`: `||x|| <= ||x + lambda y||` for all real
/// `lambda`, decided up to `tol`.
pub fn birkhoff_orthogonal(spec: &NormSpec, x: Vec2, y: Vec2, tol: f64) -> Result<bool> {
    let nx = spec.eval(x);
    let ny = spec.eval(y);
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    // Outside this bracket ||x + l y|| >= |l| ||y|| - ||x|| > 3 ||x||.
    let bound = 4.0 * nx / ny;
    Ok(min_along_line(spec, x, y, -bound, bound) >= nx - tol)
}

/// Point `r(t) = line_origin + t * line_dir` equidistant from `p` and `q`.
///
/// Bisects on `f(t) = ||r(t) - p|| - ||r(t) - q||` over a parameter range
/// derived from the input scale. Returns `None` when `f` has no sign change
/// there.
pub fn bisector_point(
    spec: &NormSpec,
    p: Vec2,
    q: Vec2,
    line_origin: Vec2,
    line_dir: Vec2,
    tol: f64,
) -> Result<Option<Vec2>> {
    if p == q {
        return Err(Error::DegenerateInput("bisector of a point with itself".into()));
    }
    let dir_len = line_dir.euclid();
    if dir_len == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mid = p.midpoint(q);
    let extent_t = 4.0 * (1.0 + ((line_origin - mid).euclid() + (q - p).euclid()) / dir_len);
    let at = |t: f64| line_origin + line_dir * t;
    let f = |t: f64| {
        let r = at(t);
        spec.distance(r, p) - spec.distance(r, q)
    };

    let (mut lo, mut hi) = (-extent_t, extent_t);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo.abs() <= tol {
        return Ok(Some(at(lo)));
    }
    if fhi.abs() <= tol {
        return Ok(Some(at(hi)));
    }
    if flo.signum() == fhi.signum() {
        return Ok(None);
    }
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..200 {
        let mid_t = 0.5 * (lo + hi);
        let fm = f(mid_t);
        if fm.abs() < best.0 {
            best = (fm.abs(), mid_t);
        }
        if fm.abs() <= tol {
            return Ok(Some(at(mid_t)));
        }
        if fm.signum() == flo.signum() {
            lo = mid_t;
            flo = fm;
        } else {
            hi = mid_t;
        }
    }
    Ok(Some(at(best.1)))
}

/// Samples of a bisecting curve of `p` and `q`.
#[derive(Debug, Clone, Serialize)]
pub struct BisectorSample {
    pub endpoints: (Vec2, Vec2),
    pub points: Vec<Vec2>,
    /// `| ||s - p|| - ||s - q|| |` for every sample `s`.
    pub residuals: Vec<f64>,
}

impl BisectorSample {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Trace `count` points of a bisector of `p` and `q`.
///
/// Each sample lies on a line parallel to `q - p` through
/// `midpoint + s * u`, where `u` is the unit Euclidean perpendicular of
/// `q - p` and `s` is spread evenly over `[-extent, extent]`. Along such a
/// line the distance difference runs from negative (far on the `p` side) to
/// positive, so a root always exists.
pub fn sample_bisector(
    spec: &NormSpec,
    p: Vec2,
    q: Vec2,
    count: usize,
    extent: f64,
    tol: f64,
) -> Result<BisectorSample> {
    if p == q {
        return Err(Error::DegenerateInput("bisector of a point with itself".into()));
    }
    if count == 0 || extent.is_nan() || extent <= 0.0 {
        return Err(Error::DegenerateInput(
            "bisector sampling needs count >= 1 and extent > 0".into(),
        ));
    }
    let d = q - p;
    let u = d.perp() * (1.0 / d.euclid());
    let mid = p.midpoint(q);
    let mut points = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for i in 0..count {
        let s = if count == 1 {
            0.0
        } else {
            -extent + 2.0 * extent * i as f64 / (count - 1) as f64
        };
        let origin = mid + u * s;
        let point = bisector_point(spec, p, q, origin, d, tol)?.ok_or_else(|| {
            Error::StructureViolation(format!("no bisector crossing on the line at offset {s}"))
        })?;
        residuals.push((spec.distance(point, p) - spec.distance(point, q)).abs());
        points.push(point);
    }
    Ok(BisectorSample {
        endpoints: (p, q),
        points,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn evaluates_reference_values() {
        assert_eq!(NormSpec::lp(2.0).unwrap().eval(v(3.0, 4.0)), 5.0);
        assert_eq!(NormSpec::l1().eval(v(3.0, -4.0)), 7.0);
        assert_eq!(NormSpec::linf().eval(v(3.0, 4.0)), 4.0);
        assert_eq!(NormSpec::unit_square().eval(v(1.0, 1.0)), 1.0);
        assert_eq!(NormSpec::euclidean().eval(Vec2::ZERO), 0.0);
    }

    #[test]
    fn large_p_does_not_overflow() {
        let n = NormSpec::lp(400.0).unwrap();
        let val = n.eval(v(1e300, 5e299));
        assert!(val.is_finite());
        assert!((val / 1e300 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&NormSpec::euclidean(), v(0.0, 0.0), v(3.0, 4.0)), 5.0);
        assert_eq!(distance(&NormSpec::l1(), v(1.0, 1.0), v(1.0, 1.0)), 0.0);
        assert_eq!(distance(&NormSpec::linf(), v(-0.5, 0.0), v(0.0, 1.0)), 1.0);
        assert_eq!(distance(&NormSpec::linf(), v(0.5, 0.0), v(0.0, 1.0)), 1.0);
    }

    #[test]
    fn strict_convexity_flags() {
        assert!(NormSpec::lp(2.0).unwrap().is_strictly_convex());
        assert!(NormSpec::euclidean().is_strictly_convex());
        assert!(NormSpec::lp(1.5).unwrap().is_strictly_convex());
        assert!(!NormSpec::l1().is_strictly_convex());
        assert!(!NormSpec::linf().is_strictly_convex());
        assert!(!NormSpec::unit_square().is_strictly_convex());
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(NormSpec::lp(0.5), Err(Error::InvalidNorm(_))));
        assert!(matches!(NormSpec::lp(f64::NAN), Err(Error::InvalidNorm(_))));
        // Clockwise square.
        let cw = vec![v(1.0, 1.0), v(1.0, -1.0), v(-1.0, -1.0), v(-1.0, 1.0)];
        assert!(matches!(NormSpec::polygonal(cw), Err(Error::InvalidNorm(_))));
        // Not symmetric.
        let lopsided = vec![v(2.0, -1.0), v(2.0, 1.0), v(-1.0, 1.0), v(-1.0, -1.0)];
        assert!(matches!(NormSpec::polygonal(lopsided), Err(Error::InvalidNorm(_))));
        // Triangle.
        let tri = vec![v(1.0, 0.0), v(-0.5, 0.8), v(-0.5, -0.8)];
        assert!(matches!(NormSpec::polygonal(tri), Err(Error::InvalidNorm(_))));
        // Collinear vertex on an edge.
        let flat = vec![
            v(1.0, -1.0),
            v(1.0, 0.0),
            v(1.0, 1.0),
            v(-1.0, 1.0),
            v(-1.0, 0.0),
            v(-1.0, -1.0),
        ];
        assert!(matches!(NormSpec::polygonal(flat), Err(Error::InvalidNorm(_))));
    }

    #[test]
    fn parses_grammar() {
        assert_eq!(NormSpec::parse("euclidean").unwrap(), NormSpec::euclidean());
        assert_eq!(NormSpec::parse("l1").unwrap(), NormSpec::l1());
        assert_eq!(NormSpec::parse("linf").unwrap(), NormSpec::linf());
        assert_eq!(NormSpec::parse("lp:1.5").unwrap(), NormSpec::lp(1.5).unwrap());
        assert_eq!(NormSpec::parse("lp:inf").unwrap(), NormSpec::linf());
        assert!(matches!(NormSpec::parse("lp:x"), Err(Error::NormParse(_))));
        assert!(matches!(NormSpec::parse("lp:0.3"), Err(Error::InvalidNorm(_))));
        assert!(matches!(NormSpec::parse("hexagon"), Err(Error::NormParse(_))));
        assert!(matches!(
            NormSpec::parse("polygon:/nonexistent/ball.json"),
            Err(Error::Io(_))
        ));
        assert_eq!(NormSpec::lp(3.0).unwrap().to_string(), "lp:3");
        assert_eq!(NormSpec::linf().to_string(), "linf");
    }

    #[test]
    fn birkhoff_examples() {
        let l2 = NormSpec::euclidean();
        assert!(birkhoff_orthogonal(&l2, v(1.0, 0.0), v(0.0, 1.0), 1e-9).unwrap());
        assert!(!birkhoff_orthogonal(&l2, v(1.0, 0.0), v(1.0, 1.0), 1e-9).unwrap());
        assert!(birkhoff_orthogonal(&NormSpec::linf(), v(1.0, 1.0), v(0.0, 1.0), 1e-9).unwrap());
        assert_eq!(
            birkhoff_orthogonal(&l2, Vec2::ZERO, v(0.0, 1.0), 1e-9),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn birkhoff_linf_against_grid() {
        // min over lambda of max(1, |1 + lambda|) is 1, attained on [-2, 0].
        let grid_min = (-4000..=4000)
            .map(|k| k as f64 * 1e-3)
            .map(|l| NormSpec::linf().eval(v(1.0, 1.0 + l)))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(grid_min, 1.0);
        assert!(birkhoff_orthogonal(&NormSpec::linf(), v(1.0, 1.0), v(0.0, 1.0), 0.0).unwrap());
    }

    #[test]
    fn bisector_point_examples() {
        let tol = 1e-12;
        let r = bisector_point(
            &NormSpec::euclidean(),
            v(-1.0, 0.0),
            v(1.0, 0.0),
            v(0.0, -3.0),
            v(0.3, 1.0),
            tol,
        )
        .unwrap()
        .unwrap();
        assert!(r.x.abs() < 1e-9);

        let r = bisector_point(&NormSpec::l1(), v(-1.0, 0.0), v(1.0, 0.0), v(0.0, 2.0), v(1.0, 0.0), tol)
            .unwrap()
            .unwrap();
        assert_eq!(r, v(0.0, 2.0));

        let linf = NormSpec::linf();
        let (p, q) = (v(-0.5, 0.0), v(0.5, 0.0));
        let r = bisector_point(&linf, p, q, v(0.0, 1.0), v(1.0, 0.0), tol).unwrap().unwrap();
        assert!((linf.distance(r, p) - linf.distance(r, q)).abs() <= tol);
        // The bisector is fat: another point of the same horizontal line is equidistant.
        let other = v(0.2, 1.0);
        assert_eq!(linf.distance(other, p), linf.distance(other, q));

        assert!(matches!(
            bisector_point(&linf, p, p, v(0.0, 1.0), v(1.0, 0.0), tol),
            Err(Error::DegenerateInput(_))
        ));
        // A line parallel to the bisector never crosses it.
        let none = bisector_point(&NormSpec::euclidean(), p, q, v(2.0, 0.0), v(0.0, 1.0), tol).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn euclidean_bisector_is_vertical_axis() {
        let sample =
            sample_bisector(&NormSpec::euclidean(), v(-1.0, 0.0), v(1.0, 0.0), 5, 2.0, 1e-12).unwrap();
        assert_eq!(sample.points.len(), 5);
        for p in &sample.points {
            assert!(p.x.abs() < 1e-9, "{p:?}");
        }
        let ys: Vec<f64> = sample.points.iter().map(|p| p.y).collect();
        assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sample_bisector_rejects_bad_arguments() {
        let n = NormSpec::euclidean();
        assert!(sample_bisector(&n, v(0.0, 0.0), v(0.0, 0.0), 3, 1.0, 1e-9).is_err());
        assert!(sample_bisector(&n, v(0.0, 0.0), v(1.0, 0.0), 0, 1.0, 1e-9).is_err());
        assert!(sample_bisector(&n, v(0.0, 0.0), v(1.0, 0.0), 3, 0.0, 1e-9).is_err());
    }
}
