//! Reductions between target shapes.
//!
//! A polytope `{ω : ⟨ω, a_ℓ⟩ ≤ b_ℓ}` becomes the nonpositive orthant of a
//! lifted game whose payoff is `s(i, j) = T(r(i, j))` with
//! `T(ω)_ℓ = ⟨ω, a_ℓ⟩ − b_ℓ`. General convex sets enter through sampled
//! support functions and are replaced by their circumscribed polytope on a
//! direction grid.

use serde::{Deserialize, Serialize};

use crate::conditions::{ModifiedSeparator, NatureSearch, Verdict};
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::geometry::{DirectionGrid, Point, SimplexVector, TargetSet};
use crate::lp::{solve, zero_sum_value, LinearProgram, LpStatus};
use crate::monitoring::modified_payoff;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedGame {
    pub base: GameSpec,
    pub rows: Vec<Point>,
    pub offsets: Vec<f64>,
    pub lifted: GameSpec,
}

impl LiftedGame {
    /// `T(ω)_ℓ = ⟨ω, a_ℓ⟩ − b_ℓ`.
    pub fn transform(&self, omega: &Point) -> Result<Point> {
        omega.check_dim(self.base.dim)?;
        Ok(Point::new(self.rows.iter().zip(&self.offsets).map(|(a, b)| omega.dot(a) - b).collect()))
    }

    /// The orthant the lifted game must approach.
    pub fn target(&self) -> TargetSet {
        TargetSet::orthant(vec![0.0; self.rows.len()])
    }

    /// Largest gap between the stored lifted payoffs and `T` applied to the base.
    pub fn consistency_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for i in 0..self.base.num_player_actions() {
            for j in 0..self.base.num_nature_actions() {
                let t = self.transform(&self.base.payoff(i, j)).expect("dimensions checked at lift");
                gap = gap.max(t.sub(&self.lifted.payoff(i, j)).coords.iter().fold(0.0, |m, v| m.max(v.abs())));
            }
        }
        gap
    }
}

/// Lifts a game so that approaching `target` becomes approaching `Orthant(0)`.
/// Any linear target is accepted; its constraint rows define `T`.
pub fn lift_polytope(spec: &GameSpec, target: &TargetSet) -> Result<LiftedGame> {
    target.validate()?;
    if target.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, got: target.dim() });
    }
    let (rows, offsets) = target.constraint_rows();
    if rows.is_empty() || rows.iter().any(|a| a.norm() == 0.0) {
        return Err(Error::Invalid("polytope rows must be nonzero".into()));
    }
    let payoffs = spec
        .payoffs
        .iter()
        .map(|row| {
            row.iter()
                .map(|w| rows.iter().zip(&offsets).map(|(a, b)| Point::new(w.clone()).dot(a) - b).collect())
                .collect()
        })
        .collect();
    let lifted = GameSpec {
        player_actions: spec.player_actions.clone(),
        nature_actions: spec.nature_actions.clone(),
        dim: rows.len(),
        signals: spec.signals.clone(),
        payoffs,
        signal_law: spec.signal_law.clone(),
    };
    lifted.validate()?;
    Ok(LiftedGame { base: spec.clone(), rows, offsets, lifted })
}

/// The surrogate payoff `s̃_H(x, y)` of the lifted game.
pub fn lifted_corner_payoff(lifted: &LiftedGame, x: &SimplexVector, y: &SimplexVector) -> Result<Point> {
    modified_payoff(&lifted.lifted, x, y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenHalfspaceReport {
    pub q: Point,
    /// `Σ_ℓ q_ℓ a_ℓ`: the base-space direction of the lifted half-space.
    pub base_direction: Point,
    /// `⟨q, T(ω)⟩` when it does not depend on `ω`.
    pub base_constant: Option<f64>,
    /// `max ⟨q, T(r(i, j))⟩` over the payoff entries.
    pub base_sup: f64,
    /// `min_x max_y ⟨q, T(r(x, y))⟩`.
    pub base_value: f64,
    /// `min_x max_y ⟨q, s̃_H(x, y)⟩`.
    pub lifted_value: f64,
    pub base_verdict: Verdict,
    pub lifted_verdict: Verdict,
    pub consistent: bool,
    pub witness_x: SimplexVector,
}

/// Compares the one-shot verdict for `{⟨q, ·⟩ ≤ 0}` in lifted space with the
/// matching half-space of the base game.
pub fn hidden_halfspace_demo(lifted: &LiftedGame, q: &Point) -> Result<HiddenHalfspaceReport> {
    hidden_halfspace_demo_with(lifted, q, 1e-7)
}

pub fn hidden_halfspace_demo_with(lifted: &LiftedGame, q: &Point, tol: f64) -> Result<HiddenHalfspaceReport> {
    q.check_dim(lifted.rows.len())?;
    if q.coords.iter().any(|v| *v < 0.0) {
        return Err(Error::NegativeDirection);
    }
    let mut base_direction = Point::zeros(lifted.base.dim);
    for (a, w) in lifted.rows.iter().zip(&q.coords) {
        base_direction.axpy(*w, a);
    }
    let scalar = lifted.lifted.scalarize(q)?;
    let entries: Vec<f64> = scalar.iter().flatten().copied().collect();
    let base_sup = entries.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let base_min = entries.iter().copied().fold(f64::INFINITY, f64::min);
    let base_constant = (base_direction.norm() <= 1e-12 || base_sup - base_min <= 1e-12).then_some(base_sup);
    let base_value = zero_sum_value(&scalar)?.value;
    let mv = ModifiedSeparator::new(&lifted.lifted, q, &NatureSearch::Exact)?.minimize()?;
    let verdict = |v: f64| if v <= tol { Verdict::Approachable } else { Verdict::NotApproachable };
    let (base_verdict, lifted_verdict) = (verdict(base_value), verdict(mv.value));
    Ok(HiddenHalfspaceReport {
        q: q.clone(),
        base_direction,
        base_constant,
        base_sup,
        base_value,
        lifted_value: mv.value,
        base_verdict,
        lifted_verdict,
        consistent: base_verdict == lifted_verdict,
        witness_x: mv.x,
    })
}

/// Support data `φ(s)` of a convex set sampled on a direction grid.
pub fn sample_support<F: Fn(&Point) -> f64>(phi: F, grid: &DirectionGrid) -> Result<TargetSet> {
    let values = grid.directions.iter().map(&phi).collect();
    let t = TargetSet::SupportSampled { directions: grid.directions.clone(), values };
    t.validate()?;
    Ok(t)
}

/// Support data of the convex hull of a point cloud.
pub fn support_of_points(points: &[Point], grid: &DirectionGrid) -> Result<TargetSet> {
    if points.is_empty() {
        return Err(Error::Invalid("empty point cloud".into()));
    }
    let mut values = Vec::with_capacity(grid.count());
    for s in &grid.directions {
        values.push(crate::geometry::support_value(points, s)?);
    }
    Ok(TargetSet::SupportSampled { directions: grid.directions.clone(), values })
}

/// Circumscribed polytope of a linear target on `grid`: rows are the grid
/// directions, offsets the support values of the target in those directions.
pub fn convex_to_polytope(support: &TargetSet, grid: &DirectionGrid) -> Result<TargetSet> {
    support.validate()?;
    if grid.count() == 0 {
        return Err(Error::Invalid("direction grid is empty".into()));
    }
    let (rows, offsets) = support.constraint_rows();
    let dim = support.dim();
    let mut out_rows = Vec::with_capacity(grid.count());
    let mut out_offsets = Vec::with_capacity(grid.count());
    for s in &grid.directions {
        s.check_dim(dim)?;
        let value = match rows.iter().zip(&offsets).find(|(a, _)| a.distance(s) <= 1e-12) {
            Some((_, b)) => *b,
            None => linear_support(&rows, &offsets, s)?,
        };
        out_rows.push(s.coords.clone());
        out_offsets.push(value);
    }
    TargetSet::polytope(out_rows, out_offsets)
}

/// `max ⟨ω, s⟩` over `{ω : ⟨ω, a_ℓ⟩ ≤ b_ℓ}`.
pub fn linear_support(rows: &[Point], offsets: &[f64], s: &Point) -> Result<f64> {
    let dim = s.dim();
    let mut lp = LinearProgram::maximize(s.coords.clone());
    for k in 0..dim {
        lp.free(k);
    }
    for (a, b) in rows.iter().zip(offsets) {
        lp.le(a.coords.clone(), *b);
    }
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        LpStatus::Unbounded => Err(Error::Invalid("support function is unbounded in a grid direction".into())),
        LpStatus::Infeasible => Err(Error::Invalid("empty target".into())),
    }
}

/// Vertices of a 2-D polygon given by constraint rows sorted by angle, as the
/// intersections of consecutive supporting lines.
pub fn polygon_vertices(rows: &[Point], offsets: &[f64]) -> Result<Vec<Point>> {
    let n = rows.len();
    if n < 3 || rows.iter().any(|r| r.dim() != 2) {
        return Err(Error::Invalid("need at least three planar rows".into()));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (&rows[k], &rows[(k + 1) % n]);
        let det = a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0];
        if det.abs() < 1e-14 {
            return Err(Error::Invalid("consecutive rows are parallel".into()));
        }
        let (c, d) = (offsets[k], offsets[(k + 1) % n]);
        out.push(Point::new(vec![(c * b.coords[1] - d * a.coords[1]) / det, (a.coords[0] * d - b.coords[0] * c) / det]));
    }
    Ok(out)
}
