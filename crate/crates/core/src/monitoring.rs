//! Oracles for partial monitoring.
//!
//! Given a flag `h̄`, the fiber `{y ∈ Δ(J) : H̄(y) = h̄}` is the set of Nature
//! mixed actions the player cannot tell apart. The compatible payoff set
//! `ω(x, h̄)` is the image of the fiber under `y ↦ r(x, y)`, and its
//! upper-right corner `R(x, h̄)` (coordinatewise maximum) is the surrogate
//! payoff `r̃_H(x, y) = R(x, H̄(y))` used by partial-monitoring strategies.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::game::{Flag, GameSpec};
use crate::geometry::{simplex_grid, Point, SimplexVector};
use crate::lp::{enumerate_vertices, solve, LinearProgram};

/// Largest number of Nature actions for which fiber vertices are enumerated.
pub const MAX_VERTEX_ACTIONS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagFiber {
    pub flag: Flag,
    /// Rows of `y ↦ H̄(y)`, indexed by `i * S + s`.
    pub equalities: Vec<Vec<f64>>,
    /// Vertices of the fiber, present when `J ≤ MAX_VERTEX_ACTIONS`.
    pub vertices: Option<Vec<SimplexVector>>,
    /// ℓ1 distance between the requested flag and the feasible flag used.
    pub repair_gap: f64,
}

impl FlagFiber {
    pub fn contains(&self, y: &SimplexVector, tol: f64) -> bool {
        let h = self.flag.flatten();
        self.equalities
            .iter()
            .zip(&h)
            .all(|(row, hv)| (row.iter().zip(y.weights()).map(|(a, b)| a * b).sum::<f64>() - hv).abs() <= tol)
    }

    pub fn vertices(&self) -> Result<&[SimplexVector]> {
        self.vertices
            .as_deref()
            .ok_or_else(|| Error::TooLarge(format!("fiber vertices need at most {MAX_VERTEX_ACTIONS} nature actions")))
    }

    fn lp_rows(&self, lp: &mut LinearProgram) {
        for (row, h) in self.equalities.iter().zip(self.flag.flatten()) {
            lp.equal(row.clone(), h);
        }
        lp.equal(vec![1.0; self.equalities[0].len()], 1.0);
    }
}

/// The ℓ1-nearest feasible flag `H̄(y)` to an arbitrary flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagProjection {
    pub flag: Flag,
    pub y: SimplexVector,
    pub gap: f64,
}

fn check_flag_shape(spec: &GameSpec, flag: &Flag) -> Result<()> {
    if flag.num_actions() != spec.num_player_actions() {
        return Err(Error::DimensionMismatch { expected: spec.num_player_actions(), got: flag.num_actions() });
    }
    if let Some(bad) = flag.rows.iter().find(|r| r.len() != spec.num_signals()) {
        return Err(Error::DimensionMismatch { expected: spec.num_signals(), got: bad.len() });
    }
    Ok(())
}

/// Minimizes `Σ |H̄(y) − h̄|` over `y ∈ Δ(J)`.
pub fn project_flag(spec: &GameSpec, flag: &Flag) -> Result<FlagProjection> {
    check_flag_shape(spec, flag)?;
    let a = spec.flag_matrix();
    let h = flag.flatten();
    let nj = spec.num_nature_actions();
    let m = a.len();
    let mut c = vec![0.0; nj];
    c.extend(std::iter::repeat_n(1.0, 2 * m));
    let mut lp = LinearProgram::minimize(c);
    for (r, (row, hv)) in a.iter().zip(&h).enumerate() {
        let mut coeffs = row.clone();
        coeffs.resize(nj + 2 * m, 0.0);
        coeffs[nj + r] = 1.0;
        coeffs[nj + m + r] = -1.0;
        lp.equal(coeffs, *hv);
    }
    let mut simplex_row = vec![1.0; nj];
    simplex_row.resize(nj + 2 * m, 0.0);
    lp.equal(simplex_row, 1.0);
    let sol = solve(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Solver("flag projection LP failed".into()));
    }
    let y = SimplexVector::normalized(sol.primal[..nj].to_vec())?;
    let projected = spec.maximal_information(&y)?;
    Ok(FlagProjection { gap: sol.value.max(0.0), flag: projected, y })
}

/// The fiber of `flag`. Flags within 1e-9 (ℓ1) of the feasible set are used as
/// given, flags within `flag_repair` are replaced by their ℓ1 projection, and
/// anything farther is rejected.
pub fn fiber(spec: &GameSpec, flag: &Flag) -> Result<FlagFiber> {
    fiber_with(spec, flag, &Tolerances::default())
}

pub fn fiber_with(spec: &GameSpec, flag: &Flag, tol: &Tolerances) -> Result<FlagFiber> {
    let proj = project_flag(spec, flag)?;
    if proj.gap > tol.flag_repair {
        return Err(Error::FlagOutsideFeasibleSet { flag: flag.clone(), gap: proj.gap, nearest: proj.y });
    }
    let used = if proj.gap <= tol.lp_feasibility { flag.clone() } else { proj.flag };
    build_fiber(spec, used, proj.gap)
}

/// The fiber of `H̄(y)`, which is feasible by construction.
pub fn fiber_of(spec: &GameSpec, y: &SimplexVector) -> Result<FlagFiber> {
    let flag = spec.maximal_information(y)?;
    build_fiber(spec, flag, 0.0)
}

fn build_fiber(spec: &GameSpec, flag: Flag, repair_gap: f64) -> Result<FlagFiber> {
    let equalities = spec.flag_matrix();
    let nj = spec.num_nature_actions();
    let vertices = if nj <= MAX_VERTEX_ACTIONS {
        let mut a = equalities.clone();
        a.push(vec![1.0; nj]);
        let mut b = flag.flatten();
        b.push(1.0);
        let raw = enumerate_vertices(&a, &b, 1e-9)?;
        if raw.is_empty() {
            return Err(Error::Solver("feasible fiber without vertices".into()));
        }
        Some(raw.into_iter().map(SimplexVector::normalized).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(FlagFiber { flag, equalities, vertices, repair_gap })
}

/// `max { ⟨r(x, y), dir⟩ : y in the fiber }` by LP, with a maximizer.
pub fn support_over_fiber(
    spec: &GameSpec,
    fiber: &FlagFiber,
    x: &SimplexVector,
    dir: &Point,
) -> Result<(f64, SimplexVector)> {
    dir.check_dim(spec.dim)?;
    x.check_len(spec.num_player_actions())?;
    let c: Vec<f64> = (0..spec.num_nature_actions()).map(|j| spec.payoff_against(x, j).dot(dir)).collect();
    let mut lp = LinearProgram::maximize(c);
    fiber.lp_rows(&mut lp);
    let sol = solve(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Solver("support LP over the fiber is not optimal".into()));
    }
    Ok((sol.value, SimplexVector::normalized(sol.primal)?))
}

/// Support function of `ω(x, h̄)` in direction `dir`.
pub fn omega_support(spec: &GameSpec, x: &SimplexVector, flag: &Flag, dir: &Point) -> Result<f64> {
    let f = fiber(spec, flag)?;
    Ok(support_over_fiber(spec, &f, x, dir)?.0)
}

/// `R(x, h̄)` and one maximizing `y` per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerResult {
    pub corner: Point,
    pub argmax_y: Vec<SimplexVector>,
}

/// Per-action payoff vectors `r(x, δ_j)`.
pub fn payoff_columns(spec: &GameSpec, x: &SimplexVector) -> Vec<Point> {
    (0..spec.num_nature_actions()).map(|j| spec.payoff_against(x, j)).collect()
}

fn combine(cols: &[Point], y: &SimplexVector) -> Point {
    let mut out = Point::zeros(cols[0].dim());
    for (p, &w) in cols.iter().zip(y.weights()) {
        if w != 0.0 {
            out.axpy(w, p);
        }
    }
    out
}

pub fn corner_on_fiber(spec: &GameSpec, fiber: &FlagFiber, x: &SimplexVector) -> Result<CornerResult> {
    x.check_len(spec.num_player_actions())?;
    match &fiber.vertices {
        Some(vertices) => {
            let cols = payoff_columns(spec, x);
            let payoffs: Vec<Point> = vertices.iter().map(|v| combine(&cols, v)).collect();
            let mut corner = vec![f64::NEG_INFINITY; spec.dim];
            let mut argmax = vec![0usize; spec.dim];
            for (idx, p) in payoffs.iter().enumerate() {
                for k in 0..spec.dim {
                    if p.coords[k] > corner[k] {
                        corner[k] = p.coords[k];
                        argmax[k] = idx;
                    }
                }
            }
            Ok(CornerResult { corner: Point::new(corner), argmax_y: argmax.iter().map(|&i| vertices[i].clone()).collect() })
        }
        None => {
            let mut corner = Vec::with_capacity(spec.dim);
            let mut argmax_y = Vec::with_capacity(spec.dim);
            for k in 0..spec.dim {
                let (v, y) = support_over_fiber(spec, fiber, x, &Point::basis(spec.dim, k))?;
                corner.push(v);
                argmax_y.push(y);
            }
            Ok(CornerResult { corner: Point::new(corner), argmax_y })
        }
    }
}

pub fn upper_right_corner(spec: &GameSpec, x: &SimplexVector, flag: &Flag) -> Result<CornerResult> {
    corner_on_fiber(spec, &fiber(spec, flag)?, x)
}

/// `r̃_H(x, y) = R(x, H̄(y))`.
pub fn modified_payoff(spec: &GameSpec, x: &SimplexVector, y: &SimplexVector) -> Result<Point> {
    Ok(corner_on_fiber(spec, &fiber_of(spec, y)?, x)?.corner)
}

/// Smallest ℓ1 gap `Σ_k (R_k − r_k(x, y))` over `y` in the fiber.
pub fn urc_gap(spec: &GameSpec, fiber: &FlagFiber, x: &SimplexVector) -> Result<f64> {
    let corner = corner_on_fiber(spec, fiber, x)?.corner;
    let total: f64 = corner.coords.iter().sum();
    let ones = Point::new(vec![1.0; spec.dim]);
    let best = match &fiber.vertices {
        Some(vertices) => {
            let cols = payoff_columns(spec, x);
            vertices.iter().map(|v| combine(&cols, v).dot(&ones)).fold(f64::NEG_INFINITY, f64::max)
        }
        None => support_over_fiber(spec, fiber, x, &ones)?.0,
    };
    Ok((total - best).max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrcViolation {
    pub x: SimplexVector,
    pub flag: Flag,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UrcReport {
    /// True when no tested pair violated the property.
    pub holds: bool,
    pub max_gap: f64,
    pub pairs_tested: usize,
    /// The first violating pair in grid order.
    pub witness: Option<UrcViolation>,
}

/// Tests whether `R(x, h̄)` is itself a compatible payoff on the given grids.
pub fn has_urc_property(spec: &GameSpec, x_grid: &[SimplexVector], flag_grid: &[Flag], tol: f64) -> Result<UrcReport> {
    if x_grid.is_empty() || flag_grid.is_empty() {
        return Err(Error::Invalid("URC check needs nonempty grids".into()));
    }
    let mut report = UrcReport { holds: true, max_gap: 0.0, pairs_tested: 0, witness: None };
    for flag in flag_grid {
        let f = fiber(spec, flag)?;
        for x in x_grid {
            let gap = urc_gap(spec, &f, x)?;
            report.pairs_tested += 1;
            report.max_gap = report.max_gap.max(gap);
            if gap > tol && report.witness.is_none() {
                report.holds = false;
                report.witness = Some(UrcViolation { x: x.clone(), flag: f.flag.clone(), gap });
            }
        }
    }
    Ok(report)
}

/// Distinct flags `H̄(y)` for `y` on a simplex grid, in grid order.
pub fn flag_grid(spec: &GameSpec, denom: usize) -> Result<Vec<Flag>> {
    let mut out: Vec<Flag> = Vec::new();
    for y in simplex_grid(spec.num_nature_actions(), denom) {
        let f = spec.maximal_information(&y)?;
        if !out.iter().any(|g| g.approx_eq(&f, 1e-7)) {
            out.push(f);
        }
    }
    Ok(out)
}

/// The default URC check: 21-point grids (denominator 20) on both simplices.
pub fn has_urc_property_default(spec: &GameSpec, tol: f64) -> Result<UrcReport> {
    has_urc_property(spec, &simplex_grid(spec.num_player_actions(), 20), &flag_grid(spec, 20)?, tol)
}

fn flag_key(flag: &Flag) -> Vec<i64> {
    flag.rows.iter().flatten().map(|v| (v * 1e12).round() as i64).collect()
}

/// Corner oracle for one game with a shared fiber cache. Fibers are keyed by
/// the flag rounded to 1e-12.
pub struct CornerOracle<'a> {
    spec: &'a GameSpec,
    cache: RwLock<HashMap<Vec<i64>, Arc<FlagFiber>>>,
}

impl<'a> CornerOracle<'a> {
    pub fn new(spec: &'a GameSpec) -> Self {
        Self { spec, cache: RwLock::new(HashMap::new()) }
    }

    pub fn spec(&self) -> &GameSpec {
        self.spec
    }

    pub fn fiber_of(&self, y: &SimplexVector) -> Result<Arc<FlagFiber>> {
        let flag = self.spec.maximal_information(y)?;
        let key = flag_key(&flag);
        if let Some(f) = self.cache.read().get(&key) {
            return Ok(Arc::clone(f));
        }
        let f = Arc::new(build_fiber(self.spec, flag, 0.0)?);
        Ok(Arc::clone(self.cache.write().entry(key).or_insert(f)))
    }

    pub fn fiber(&self, flag: &Flag) -> Result<Arc<FlagFiber>> {
        let key = flag_key(flag);
        if let Some(f) = self.cache.read().get(&key) {
            return Ok(Arc::clone(f));
        }
        let f = Arc::new(fiber(self.spec, flag)?);
        Ok(Arc::clone(self.cache.write().entry(key).or_insert(f)))
    }

    pub fn corner(&self, x: &SimplexVector, flag: &Flag) -> Result<CornerResult> {
        corner_on_fiber(self.spec, &*self.fiber(flag)?, x)
    }

    pub fn modified_payoff(&self, x: &SimplexVector, y: &SimplexVector) -> Result<Point> {
        Ok(corner_on_fiber(self.spec, &*self.fiber_of(y)?, x)?.corner)
    }

    pub fn cached_fibers(&self) -> usize {
        self.cache.read().len()
    }
}
