//! Small deterministic moves that make all pairwise distances distinct.
//!
//! Works layer by layer from the outside in. On each layer the boundary
//! points of the current hull are visited in reverse counterclockwise order;
//! in round `j` a point tied with something is pushed away from its `j`-th
//! predecessor along the unit direction. Pushing `y` away from `p` lengthens
//! `||y - p||` by exactly the step and, in a strictly convex norm, moves `y`
//! off every bisector through it that involves `p`. Once the layer's points
//! are tie-free it is peeled off and the next layer is treated, with ties
//! still measured over the whole set.
//!
//! Every move is verified: it must remove at least one tie involving the
//! moved point and create none. A few step sizes are tried together and the
//! accepted one leaving the widest gaps wins; if none is accepted the sizes
//! are halved.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::convex_hull;
use crate::norm::{NormSpec, DEFAULT_TOL};
use crate::points::{detect_ties, min_distance_gap, pairwise_distances, DistanceTable, PointSet};
use crate::vec2::Vec2;

/// Which part of the procedure produced a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbStage {
    /// Round `j`: the point moves away from its `j`-th predecessor on the hull.
    Ring { layer: usize, round: usize },
    /// Cleanup of ties between a hull point and an inner point.
    Residual { layer: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbStep {
    pub point: usize,
    /// The point moved along `(point - away_from) / ||point - away_from||`.
    pub away_from: usize,
    pub step: f64,
    /// Smallest positive distance gap right before the move.
    pub gap_before: f64,
    pub stage: PerturbStage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbReport {
    /// `||p' - p||` for every point.
    pub displacement: Vec<f64>,
    pub steps: Vec<PerturbStep>,
    /// Smallest gap between distinct distance values after the last move.
    pub residual_min_gap: f64,
}

impl PerturbReport {
    pub fn max_displacement(&self) -> f64 {
        self.displacement.iter().copied().fold(0.0, f64::max)
    }
}

const MAX_BATCHES: usize = 40;
/// Trial steps per batch, as fractions of the batch's largest step. The
/// accepted one leaving the widest gaps around the moved point wins.
const STEP_FACTORS: [f64; 4] = [1.0, 0.875, 0.75, 0.625];

struct Mover<'a> {
    spec: &'a NormSpec,
    points: Vec<Vec2>,
    table: DistanceTable,
    travelled: Vec<f64>,
    steps: Vec<PerturbStep>,
    eps: f64,
    tol: f64,
    budget: usize,
}

impl Mover<'_> {
    fn n(&self) -> usize {
        self.points.len()
    }

    /// Pairs other than `(a, b)` whose distance is within `tol` of `w`.
    fn pairs_near(&self, w: f64, a: usize, b: usize, tol: f64) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (a, b) = (a.min(b), a.max(b));
        self.table
            .pairs()
            .filter(move |&(i, j, x)| (i, j) != (a, b) && (x - w).abs() <= tol)
            .map(|(i, j, _)| (i, j))
    }

    fn pair_tied(&self, a: usize, b: usize) -> bool {
        self.pairs_near(self.table.get(a, b), a, b, self.tol).next().is_some()
    }

    fn point_tied(&self, y: usize) -> bool {
        (0..self.n()).any(|a| a != y && self.pair_tied(y, a))
    }

    /// Ties within `tol` with at least one pair incident to `y`, canonicalized.
    fn ties_at(&self, y: usize, tol: f64) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            if a == y {
                continue;
            }
            let first = (y.min(a), y.max(a));
            for second in self.pairs_near(self.table.get(y, a), y, a, tol) {
                out.push(if first < second { (first, second) } else { (second, first) });
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest distance above `tol` between a pair at `y` and any other pair.
    fn incident_gap(&self, y: usize) -> f64 {
        let mut best = f64::INFINITY;
        for a in (0..self.n()).filter(|&a| a != y) {
            let w = self.table.get(y, a);
            let (lo, hi) = (y.min(a), y.max(a));
            for (i, j, x) in self.table.pairs() {
                let g = (x - w).abs();
                if (i, j) != (lo, hi) && g > self.tol {
                    best = best.min(g);
                }
            }
        }
        best
    }

    /// Partners `p` such that the pair `(y, p)` is in a tie.
    fn tied_partners(&self, y: usize) -> Vec<usize> {
        (0..self.n()).filter(|&a| a != y && self.pair_tied(y, a)).collect()
    }

    fn try_move(&mut self, y: usize, away_from: usize, stage: PerturbStage) -> Result<bool> {
        if self.steps.len() >= self.budget {
            return Err(Error::BudgetExceeded(format!(
                "step log reached n(n-1) = {} moves",
                self.budget
            )));
        }
        let origin = self.points[y];
        let dir = origin - self.points[away_from];
        let unit = dir * (1.0 / self.spec.eval(dir));
        let before = self.ties_at(y, self.tol);
        let gap_before = min_distance_gap(&self.table, self.tol);
        let remaining = self.eps - self.travelled[y];
        let base = remaining.min(self.eps) / (2 * self.n()) as f64;

        let mut scale = 1.0;
        for _ in 0..MAX_BATCHES {
            let mut best: Option<(f64, f64)> = None;
            for f in STEP_FACTORS {
                let step = base * scale * f;
                self.points[y] = origin + unit * step;
                self.table.refresh_point(self.spec, &self.points, y);
                let after = self.ties_at(y, self.tol);
                if after.len() < before.len() && after.iter().all(|t| before.binary_search(t).is_ok()) {
                    let gap = self.incident_gap(y);
                    if best.is_none_or(|(_, g)| gap > g) {
                        best = Some((step, gap));
                    }
                }
            }
            if let Some((step, _)) = best {
                self.points[y] = origin + unit * step;
                self.table.refresh_point(self.spec, &self.points, y);
                self.travelled[y] += step;
                self.steps.push(PerturbStep {
                    point: y,
                    away_from,
                    step,
                    gap_before,
                    stage,
                });
                return Ok(true);
            }
            scale *= 0.5;
        }
        self.points[y] = origin;
        self.table.refresh_point(self.spec, &self.points, y);
        Ok(false)
    }

    /// Hull boundary of the active points, counterclockwise, as global ids.
    fn ring(&self, active: &[usize]) -> Result<Vec<usize>> {
        let sub: Vec<Vec2> = active.iter().map(|&i| self.points[i]).collect();
        let hull = convex_hull(&sub, DEFAULT_TOL)?;
        Ok(hull.boundary.iter().map(|&local| active[local]).collect())
    }

    fn layered_pass(&mut self) -> Result<()> {
        let mut active: Vec<usize> = (0..self.n()).collect();
        let mut layer = 0;
        while !active.is_empty() {
            let ring = self.ring(&active)?;
            let k = ring.len();
            for round in 1..k {
                let stage = PerturbStage::Ring { layer, round };
                loop {
                    let mut moved = false;
                    for h in (0..k).rev() {
                        let v = ring[h];
                        let pre = ring[(h + k - round) % k];
                        let triggered = if round == 1 {
                            self.point_tied(v)
                        } else {
                            self.pair_tied(v, pre)
                        };
                        if triggered && self.try_move(v, pre, stage)? {
                            moved = true;
                        }
                    }
                    if !moved {
                        break;
                    }
                }
            }

            // Whatever ties still touch the ring pair a ring point with some
            // other point; push the ring point away from that partner,
            // preferring partners inside the ring.
            let stage = PerturbStage::Residual { layer };
            for &r in &ring {
                while self.point_tied(r) {
                    let mut partners = self.tied_partners(r);
                    partners.sort_by_key(|p| (ring.contains(p), *p));
                    let mut progressed = false;
                    for p in partners {
                        if self.try_move(r, p, stage)? {
                            progressed = true;
                            break;
                        }
                    }
                    if !progressed {
                        break;
                    }
                }
            }

            active.retain(|i| !ring.contains(i));
            layer += 1;
        }
        Ok(())
    }
}

/// Move every point by less than `eps` so that all pairwise distances differ
/// by more than `tol`.
///
/// Only defined for strictly convex norms: in a norm whose unit sphere has a
/// flat piece a bisector can have interior, and small moves need not break
/// the equality.
pub fn perturb_distinct(
    spec: &NormSpec,
    points: &PointSet,
    eps: f64,
    tol: f64,
) -> Result<(PointSet, PerturbReport)> {
    if !spec.is_strictly_convex() {
        return Err(Error::NotStrictlyConvex);
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::DegenerateInput(format!("eps must be positive, got {eps}")));
    }
    let n = points.len();
    let table = pairwise_distances(spec, points)?;
    let mut mover = Mover {
        spec,
        points: points.as_slice().to_vec(),
        table,
        travelled: vec![0.0; n],
        steps: Vec::new(),
        eps,
        tol,
        budget: n * n.saturating_sub(1),
    };
    while !detect_ties(&mover.table, tol).is_empty() {
        let before = mover.steps.len();
        mover.layered_pass()?;
        if mover.steps.len() == before {
            return Err(Error::BudgetExceeded(
                "no admissible move breaks the remaining ties".into(),
            ));
        }
    }
    let displacement = points
        .iter()
        .zip(&mover.points)
        .map(|(&p, &q)| spec.distance(p, q))
        .collect();
    let residual_min_gap = min_distance_gap(&mover.table, tol);
    let moved = PointSet::new(mover.points)?;
    Ok((
        moved,
        PerturbReport {
            displacement,
            steps: mover.steps,
            residual_min_gap,
        },
    ))
}
