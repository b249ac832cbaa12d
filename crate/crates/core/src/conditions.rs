//! Approachability checks with certificates.
//!
//! * [`one_shot_halfspace`]: a half-space `{⟨ω, a⟩ ≤ b}` is approachable iff
//!   the scalar zero-sum game `⟨r, a⟩` has value at most `b`, whatever the
//!   signals.
//! * [`dual_condition`]: for every flag `h̄` some `x` puts all of `ω(x, h̄)`
//!   inside the target.
//! * [`primal_condition_orthant`]: every half-space containing an orthant is
//!   one-shot approachable for the surrogate payoff `r̃_H`.
//!
//! Conditions quantify over continua. Flags are sampled on a grid of Nature
//! mixed actions and orthant directions on a grid of the simplex; verdicts
//! that only hold on the sampled points are reported as
//! [`Verdict::NotFalsifiedOnGrid`].
//!
//! For a fixed flag all of these quantities are linear programs. Writing the
//! fiber as `{y ≥ 0 : A y = h, Σ y = 1}`, LP duality gives
//!
//! ```text
//! max_{y ∈ fiber} Σ_ij x_i G_ij y_j  =  min { μ·h + ν : Aᵀμ + ν ≥ Gᵀx }
//! ```
//!
//! so minimizing over `x` is a single LP whose optimal `(μ, ν)` also yields a
//! linear upper bound of the value as a function of the flag.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Flag, GameSpec};
use crate::geometry::{simplex_grid, Point, SimplexVector, TargetSet};
use crate::lp::{solve, zero_sum_value, LinearProgram};
use crate::monitoring::fiber_of;

/// Default denominator of the simplex grids over Nature actions and directions.
pub const DEFAULT_GRID_DENOM: usize = 32;
/// Default verdict tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;

const KELLEY_GAP: f64 = 1e-9;
const KELLEY_MAX_ITERS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Approachable,
    NotApproachable,
    NotFalsifiedOnGrid,
}

impl Verdict {
    /// True unless the check found a violation.
    pub fn passes(self) -> bool {
        self != Verdict::NotApproachable
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub witness_x: Option<SimplexVector>,
    pub counter_y: Option<SimplexVector>,
    pub separating_direction: Option<Point>,
    /// Positive when the condition holds with room to spare, negative by the
    /// size of the violation otherwise.
    pub margin: f64,
    pub method: String,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.verdict.passes()
    }
}

pub fn default_y_grid(spec: &GameSpec) -> Vec<SimplexVector> {
    simplex_grid(spec.num_nature_actions(), DEFAULT_GRID_DENOM)
}

/// Nonnegative directions normalized to sum one, on the default grid.
pub fn default_q_grid(dim: usize) -> Vec<Point> {
    simplex_grid(dim, DEFAULT_GRID_DENOM).into_iter().map(|q| Point::new(q.weights().to_vec())).collect()
}

/// One-shot approachability of `{⟨ω, a⟩ ≤ b}` through the scalar game
/// `⟨r[i][j], a⟩`. Only payoffs are read; the signal law plays no role.
pub fn one_shot_halfspace(spec: &GameSpec, a: &Point, b: f64) -> Result<ConditionReport> {
    one_shot_halfspace_with(spec, a, b, DEFAULT_TOL)
}

pub fn one_shot_halfspace_with(spec: &GameSpec, a: &Point, b: f64, tol: f64) -> Result<ConditionReport> {
    if a.norm() == 0.0 {
        return Err(Error::Invalid("half-space direction must be nonzero".into()));
    }
    let g = spec.scalarize(a)?;
    let zs = zero_sum_value(&g)?;
    let margin = b - zs.value;
    let method = format!("zero-sum LP value {:.12}", zs.value);
    Ok(if margin >= -tol {
        ConditionReport {
            verdict: Verdict::Approachable,
            witness_x: Some(zs.x),
            counter_y: None,
            separating_direction: None,
            margin,
            method,
        }
    } else {
        ConditionReport {
            verdict: Verdict::NotApproachable,
            witness_x: None,
            counter_y: Some(zs.y),
            separating_direction: Some(a.clone()),
            margin,
            method,
        }
    })
}

/// The flag map with one redundant signal row per action removed: each
/// action's rows sum to the all-ones row, which the simplex constraint
/// already carries.
#[derive(Clone, Debug)]
pub struct FlagSystem {
    pub rows: Vec<Vec<f64>>,
    keep: Vec<usize>,
    nj: usize,
}

impl FlagSystem {
    pub fn new(spec: &GameSpec) -> Self {
        let ns = spec.num_signals();
        let full = spec.flag_matrix();
        let keep: Vec<usize> = (0..full.len()).filter(|r| r % ns != ns - 1).collect();
        Self { rows: keep.iter().map(|&r| full[r].clone()).collect(), keep, nj: spec.num_nature_actions() }
    }

    pub fn reduce(&self, flag: &Flag) -> Vec<f64> {
        let flat = flag.flatten();
        self.keep.iter().map(|&r| flat[r]).collect()
    }

    pub fn apply(&self, y: &SimplexVector) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().zip(y.weights()).map(|(a, b)| a * b).sum()).collect()
    }

    /// True when every Nature action induces the same flag.
    pub fn is_constant(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(|v| (v - row[0]).abs() <= 1e-12))
    }
}

/// A scalar game with an offset: the quantity `max_{y ∈ fiber} x'Gy − offset`.
#[derive(Clone, Debug)]
pub struct Block {
    pub g: Vec<Vec<f64>>,
    pub offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Combine {
    /// `min_x max_ℓ` over blocks.
    Max,
    /// `min_x Σ_ℓ w_ℓ (·)` with nonnegative weights.
    Sum,
}

/// Optimum of a per-flag program.
#[derive(Clone, Debug)]
pub struct FlagValue {
    pub value: f64,
    pub x: SimplexVector,
    /// `cut[j]` such that `y ↦ Σ_j cut[j] y_j` bounds the value from above at
    /// every flag, with equality at the evaluated one. Present for `Sum` and
    /// for a single block.
    pub cut: Option<Vec<f64>>,
}

/// Solves `min_x combine_ℓ ( max_{y ∈ fiber(h)} x'G_ℓ y − offset_ℓ )`.
pub fn flag_program(
    sys: &FlagSystem,
    h: &[f64],
    blocks: &[Block],
    weights: Option<&[f64]>,
    combine: Combine,
) -> Result<FlagValue> {
    let ni = blocks[0].g.len();
    let nj = sys.nj;
    let m = sys.rows.len();
    let nb = blocks.len();
    let per_block = m + 1;
    let t_col = ni + nb * per_block;
    let nvars = t_col + usize::from(combine == Combine::Max);
    let weight = |l: usize| weights.map_or(1.0, |w| w[l]);

    let mut c = vec![0.0; nvars];
    match combine {
        Combine::Max => c[t_col] = 1.0,
        Combine::Sum => {
            for l in 0..nb {
                let base = ni + l * per_block;
                for r in 0..m {
                    c[base + r] = weight(l) * h[r];
                }
                c[base + m] = weight(l);
            }
        }
    }
    let mut lp = LinearProgram::minimize(c);
    for v in ni..nvars {
        lp.free(v);
    }
    let mut simplex_row = vec![0.0; nvars];
    simplex_row[..ni].iter_mut().for_each(|v| *v = 1.0);
    lp.equal(simplex_row, 1.0);
    for (l, block) in blocks.iter().enumerate() {
        let base = ni + l * per_block;
        for j in 0..nj {
            let mut row = vec![0.0; nvars];
            for (v, g) in row[..ni].iter_mut().zip(&block.g) {
                *v = -g[j];
            }
            for (v, s) in row[base..base + m].iter_mut().zip(&sys.rows) {
                *v = s[j];
            }
            row[base + m] = 1.0;
            lp.ge(row, 0.0);
        }
        if combine == Combine::Max {
            let mut row = vec![0.0; nvars];
            row[base..base + m].copy_from_slice(&h[..m]);
            row[base + m] = 1.0;
            row[t_col] = -1.0;
            lp.le(row, block.offset);
        }
    }
    let sol = solve(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!("per-flag program ended {:?}", sol.status)));
    }
    let value = match combine {
        Combine::Max => sol.value,
        Combine::Sum => sol.value - (0..nb).map(|l| weight(l) * blocks[l].offset).sum::<f64>(),
    };
    let cut = (combine == Combine::Sum || nb == 1).then(|| {
        (0..nj)
            .map(|j| {
                (0..nb)
                    .map(|l| {
                        let base = ni + l * per_block;
                        let mu_a: f64 = (0..m).map(|r| sol.primal[base + r] * sys.rows[r][j]).sum();
                        weight(l) * (mu_a + sol.primal[base + m] - blocks[l].offset)
                    })
                    .sum()
            })
            .collect()
    });
    Ok(FlagValue { value, x: SimplexVector::normalized(sol.primal[..ni].to_vec())?, cut })
}

fn target_blocks(spec: &GameSpec, target: &TargetSet) -> Result<Vec<Block>> {
    if target.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, got: target.dim() });
    }
    target.validate()?;
    let (rows, offsets) = target.constraint_rows();
    rows.iter().zip(offsets).map(|(a, b)| Ok(Block { g: spec.scalarize(a)?, offset: b })).collect()
}

fn coordinate_blocks(spec: &GameSpec) -> Vec<Block> {
    (0..spec.dim)
        .map(|k| Block { g: spec.payoffs.iter().map(|row| row.iter().map(|r| r[k]).collect()).collect(), offset: 0.0 })
        .collect()
}

/// `min_x max_ℓ (max_{y ∈ fiber(h)} ⟨r(x,y), a_ℓ⟩ − b_ℓ)`: how far the best
/// `x` keeps `ω(x, h̄)` from fitting inside the target (≤ 0 means inside).
pub fn containment_excess(spec: &GameSpec, target: &TargetSet, flag: &Flag) -> Result<FlagValue> {
    let sys = FlagSystem::new(spec);
    flag_program(&sys, &sys.reduce(flag), &target_blocks(spec, target)?, None, Combine::Max)
}

/// `min_x ⟨q, R(x, H̄(y))⟩` for `q ⪰ 0`, with its supergradient in `y`.
pub fn min_weighted_corner(spec: &GameSpec, y: &SimplexVector, q: &Point) -> Result<FlagValue> {
    check_direction(q, spec.dim)?;
    let sys = FlagSystem::new(spec);
    flag_program(&sys, &sys.apply(y), &coordinate_blocks(spec), Some(&q.coords), Combine::Sum)
}

fn check_direction(q: &Point, dim: usize) -> Result<()> {
    q.check_dim(dim)?;
    if q.coords.iter().any(|v| *v < 0.0) {
        return Err(Error::NegativeDirection);
    }
    if q.coords.iter().all(|v| *v == 0.0) {
        return Err(Error::Invalid("direction must be nonzero".into()));
    }
    Ok(())
}

/// Result of maximizing a concave piecewise-linear function of `y` by
/// Kelley's cutting planes.
#[derive(Clone, Debug)]
pub struct ConcaveMax {
    pub value: f64,
    pub upper: f64,
    pub y: SimplexVector,
    pub x: SimplexVector,
    pub iterations: usize,
}

/// Maximizes `y ↦ eval(y).value` over `Δ(J)` from initial evaluations.
/// `eval` must return a valid cut.
fn kelley_over_y(
    nj: usize,
    mut points: Vec<(SimplexVector, FlagValue)>,
    eval: impl Fn(&SimplexVector) -> Result<FlagValue>,
) -> Result<ConcaveMax> {
    let best_of = |pts: &[(SimplexVector, FlagValue)]| {
        let mut b = 0;
        for (k, p) in pts.iter().enumerate() {
            if p.1.value > pts[b].1.value {
                b = k;
            }
        }
        b
    };
    let mut iterations = 0;
    let mut upper = f64::INFINITY;
    while iterations < KELLEY_MAX_ITERS {
        iterations += 1;
        let mut c = vec![0.0; nj + 1];
        c[nj] = 1.0;
        let mut lp = LinearProgram::maximize(c);
        lp.free(nj);
        for (_, fv) in &points {
            let cut = fv.cut.as_ref().expect("cut available");
            let mut row: Vec<f64> = cut.iter().map(|v| -v).collect();
            row.push(1.0);
            lp.le(row, 0.0);
        }
        let mut simplex_row = vec![1.0; nj];
        simplex_row.push(0.0);
        lp.equal(simplex_row, 1.0);
        let sol = solve(&lp)?;
        if !sol.is_optimal() {
            return Err(Error::Solver("cutting-plane master over y failed".into()));
        }
        upper = sol.value;
        let best = points[best_of(&points)].1.value;
        if upper - best <= KELLEY_GAP * (1.0 + best.abs()) {
            break;
        }
        let y = SimplexVector::normalized(sol.primal[..nj].to_vec())?;
        let fv = eval(&y)?;
        points.push((y, fv));
    }
    let b = best_of(&points);
    let (y, fv) = points.swap_remove(b);
    Ok(ConcaveMax { value: fv.value, upper, y, x: fv.x, iterations })
}

/// `max_y min_x ⟨q, r̃_H(x, y)⟩` over all of `Δ(J)`, by cutting planes on the
/// concave function `y ↦ min_x ⟨q, r̃_H(x, y)⟩`.
pub fn modified_value_over_flags(spec: &GameSpec, q: &Point) -> Result<ConcaveMax> {
    check_direction(q, spec.dim)?;
    let sys = FlagSystem::new(spec);
    let blocks = coordinate_blocks(spec);
    let eval = |y: &SimplexVector| flag_program(&sys, &sys.apply(y), &blocks, Some(&q.coords), Combine::Sum);
    let nj = spec.num_nature_actions();
    let start = (0..nj).map(|j| {
        let y = SimplexVector::pure(nj, j);
        eval(&y).map(|v| (y, v))
    });
    kelley_over_y(nj, start.collect::<Result<Vec<_>>>()?, eval)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualOptions {
    pub tol: f64,
    /// Refine half-space checks over all flags with cutting planes.
    pub refine_halfspaces: bool,
}

impl Default for DualOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, refine_halfspaces: true }
    }
}

/// Checks that for every flag `H̄(y)`, `y` in the grid, some `x` puts
/// `ω(x, h̄)` inside the target.
///
/// Half-spaces are then refined over every flag: the containment excess of a
/// half-space is concave in the flag, so cutting planes started from the grid
/// reach its exact maximum and the verdict becomes exact. Games whose signals
/// carry no information have a single flag and are exact as well.
pub fn dual_condition(spec: &GameSpec, target: &TargetSet, y_grid: &[SimplexVector]) -> Result<ConditionReport> {
    dual_condition_with(spec, target, y_grid, &DualOptions::default())
}

pub fn dual_condition_with(
    spec: &GameSpec,
    target: &TargetSet,
    y_grid: &[SimplexVector],
    opts: &DualOptions,
) -> Result<ConditionReport> {
    if y_grid.is_empty() {
        return Err(Error::Invalid("dual condition needs a nonempty grid".into()));
    }
    let blocks = target_blocks(spec, target)?;
    let sys = FlagSystem::new(spec);
    let mut reps: Vec<(SimplexVector, Vec<f64>)> = Vec::new();
    for y in y_grid {
        y.check_len(spec.num_nature_actions())?;
        let h = sys.apply(y);
        if !reps.iter().any(|(_, g)| g.iter().zip(&h).all(|(a, b)| (a - b).abs() <= 1e-12)) {
            reps.push((y.clone(), h));
        }
    }
    let values: Vec<FlagValue> = reps
        .par_iter()
        .map(|(_, h)| flag_program(&sys, h, &blocks, None, Combine::Max))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    for (k, v) in values.iter().enumerate() {
        if v.value > values[worst].value {
            worst = k;
        }
    }
    let constant_flag = sys.is_constant();
    let mut method = format!("per-flag LP on {} grid points ({} distinct flags)", y_grid.len(), reps.len());
    let (mut y_worst, mut fv_worst) = (reps[worst].0.clone(), values[worst].clone());
    let mut exact = constant_flag;

    if blocks.len() == 1 && opts.refine_halfspaces && !constant_flag && fv_worst.value <= opts.tol {
        let points: Vec<(SimplexVector, FlagValue)> =
            reps.iter().map(|(y, _)| y.clone()).zip(values.iter().cloned()).collect();
        let eval = |y: &SimplexVector| flag_program(&sys, &sys.apply(y), &blocks, None, Combine::Max);
        let refined = kelley_over_y(spec.num_nature_actions(), points, eval)?;
        method.push_str(&format!("; cutting-plane refinement over all flags ({} iterations)", refined.iterations));
        if refined.value > fv_worst.value {
            y_worst = refined.y.clone();
            fv_worst = FlagValue { value: refined.value, x: refined.x.clone(), cut: None };
        }
        exact = refined.upper - refined.value <= 1e-7;
    }

    let margin = -fv_worst.value;
    Ok(if fv_worst.value > opts.tol {
        ConditionReport {
            verdict: Verdict::NotApproachable,
            witness_x: None,
            counter_y: Some(y_worst),
            separating_direction: None,
            margin,
            method,
        }
    } else {
        ConditionReport {
            verdict: if exact { Verdict::Approachable } else { Verdict::NotFalsifiedOnGrid },
            witness_x: Some(fv_worst.x),
            counter_y: None,
            separating_direction: None,
            margin,
            method,
        }
    })
}

/// Domain of Nature's mixed actions in the modified-payoff checks.
#[derive(Clone, Debug)]
pub enum NatureSearch {
    /// Only the listed mixed actions.
    Grid(Vec<SimplexVector>),
    /// All of `Δ(J)`.
    Exact,
}

/// `min_x max_y ⟨q, r̃_H(x, y)⟩` computed by cutting planes over `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModifiedValue {
    /// Best objective found (an upper bound on the optimum).
    pub value: f64,
    /// Cutting-plane lower bound.
    pub lower: f64,
    pub x: SimplexVector,
    /// Mixed action of Nature that holds every `x` to at least `lower`.
    pub certificate_y: SimplexVector,
    pub iterations: usize,
}

struct Separation {
    value: f64,
    cut: Vec<f64>,
    y: SimplexVector,
}

/// Separation oracle: `max_y ⟨q, r̃_H(x, y)⟩` with a linear minorant in `x`.
pub struct ModifiedSeparator<'a> {
    spec: &'a GameSpec,
    q: Vec<f64>,
    sys: FlagSystem,
    grid: Option<Vec<(SimplexVector, Vec<SimplexVector>)>>,
}

impl<'a> ModifiedSeparator<'a> {
    pub fn new(spec: &'a GameSpec, q: &Point, search: &NatureSearch) -> Result<Self> {
        check_direction(q, spec.dim)?;
        let grid = match search {
            NatureSearch::Exact => None,
            NatureSearch::Grid(ys) => {
                if ys.is_empty() {
                    return Err(Error::Invalid("empty Nature grid".into()));
                }
                let mut out: Vec<(SimplexVector, Vec<SimplexVector>)> = Vec::new();
                let mut seen: Vec<Flag> = Vec::new();
                for y in ys {
                    let f = fiber_of(spec, y)?;
                    if seen.iter().any(|g| g.approx_eq(&f.flag, 1e-12)) {
                        continue;
                    }
                    seen.push(f.flag.clone());
                    out.push((y.clone(), f.vertices()?.to_vec()));
                }
                Some(out)
            }
        };
        Ok(Self { spec, q: q.coords.clone(), sys: FlagSystem::new(spec), grid })
    }

    fn separate(&self, x: &SimplexVector) -> Result<Separation> {
        match &self.grid {
            Some(grid) => self.separate_grid(x, grid),
            None => self.separate_exact(x),
        }
    }

    fn separate_grid(&self, x: &SimplexVector, grid: &[(SimplexVector, Vec<SimplexVector>)]) -> Result<Separation> {
        let spec = self.spec;
        let cols: Vec<Point> = (0..spec.num_nature_actions()).map(|j| spec.payoff_against(x, j)).collect();
        let mut best: Option<(f64, usize, Vec<usize>)> = None;
        for (g, (_, verts)) in grid.iter().enumerate() {
            let mut total = 0.0;
            let mut picks = Vec::with_capacity(spec.dim);
            for k in 0..spec.dim {
                let mut bv = f64::NEG_INFINITY;
                let mut bi = 0;
                for (vi, v) in verts.iter().enumerate() {
                    let val: f64 = v.weights().iter().zip(&cols).map(|(w, p)| w * p.coords[k]).sum();
                    if val > bv {
                        bv = val;
                        bi = vi;
                    }
                }
                total += self.q[k] * bv;
                picks.push(bi);
            }
            if best.as_ref().is_none_or(|b| total > b.0) {
                best = Some((total, g, picks));
            }
        }
        let (value, g, picks) = best.expect("nonempty grid");
        let verts = &grid[g].1;
        let cut = (0..spec.num_player_actions())
            .map(|i| {
                (0..spec.dim)
                    .map(|k| {
                        let v = &verts[picks[k]];
                        self.q[k] * v.weights().iter().enumerate().map(|(j, w)| w * spec.payoffs[i][j][k]).sum::<f64>()
                    })
                    .sum()
            })
            .collect();
        Ok(Separation { value, cut, y: grid[g].0.clone() })
    }

    /// Maximizes `Σ_k q_k r_k(x, y_k)` over tuples `(y_k)` of mixed actions
    /// that share one flag; coordinates with `q_k = 0` are dropped.
    fn separate_exact(&self, x: &SimplexVector) -> Result<Separation> {
        let spec = self.spec;
        let nj = spec.num_nature_actions();
        let active: Vec<usize> = (0..spec.dim).filter(|&k| self.q[k] > 0.0).collect();
        let nv = active.len() * nj;
        let mut c = vec![0.0; nv];
        for (slot, &k) in active.iter().enumerate() {
            for j in 0..nj {
                let r: f64 = (0..spec.num_player_actions()).map(|i| x.get(i) * spec.payoffs[i][j][k]).sum();
                c[slot * nj + j] = self.q[k] * r;
            }
        }
        let mut lp = LinearProgram::maximize(c);
        for slot in 0..active.len() {
            let mut row = vec![0.0; nv];
            row[slot * nj..(slot + 1) * nj].iter_mut().for_each(|v| *v = 1.0);
            lp.equal(row, 1.0);
        }
        for slot in 1..active.len() {
            for a in &self.sys.rows {
                let mut row = vec![0.0; nv];
                for j in 0..nj {
                    row[slot * nj + j] = a[j];
                    row[j] -= a[j];
                }
                lp.equal(row, 0.0);
            }
        }
        let sol = solve(&lp)?;
        if !sol.is_optimal() {
            return Err(Error::Solver("tuple separation LP failed".into()));
        }
        let cut = (0..spec.num_player_actions())
            .map(|i| {
                active
                    .iter()
                    .enumerate()
                    .map(|(slot, &k)| {
                        self.q[k] * (0..nj).map(|j| sol.primal[slot * nj + j] * spec.payoffs[i][j][k]).sum::<f64>()
                    })
                    .sum()
            })
            .collect();
        let y = SimplexVector::normalized(sol.primal[..nj].to_vec())?;
        Ok(Separation { value: sol.value, cut, y })
    }

    /// Cutting planes over `x`, started at the uniform action.
    pub fn minimize(&self) -> Result<ModifiedValue> {
        self.minimize_from(&SimplexVector::uniform(self.spec.num_player_actions()))
    }

    pub fn minimize_from(&self, start: &SimplexVector) -> Result<ModifiedValue> {
        let ni = self.spec.num_player_actions();
        let first = self.separate(start)?;
        let mut best_value = first.value;
        let mut best_x = start.clone();
        let mut cuts = vec![first];
        let mut lower = f64::NEG_INFINITY;
        let mut duals = vec![1.0];
        let mut iterations = 0;
        while iterations < KELLEY_MAX_ITERS {
            iterations += 1;
            let mut c = vec![0.0; ni + 1];
            c[ni] = 1.0;
            let mut lp = LinearProgram::minimize(c);
            lp.free(ni);
            for s in &cuts {
                let mut row = s.cut.clone();
                row.push(-1.0);
                lp.le(row, 0.0);
            }
            let mut simplex_row = vec![1.0; ni];
            simplex_row.push(0.0);
            lp.equal(simplex_row, 1.0);
            let sol = solve(&lp)?;
            if !sol.is_optimal() {
                return Err(Error::Solver("cutting-plane master over x failed".into()));
            }
            lower = sol.value;
            duals = sol.dual[..cuts.len()].iter().map(|d| (-d).max(0.0)).collect();
            if best_value - lower <= KELLEY_GAP * (1.0 + best_value.abs()) {
                break;
            }
            let x = SimplexVector::normalized(sol.primal[..ni].to_vec())?;
            let s = self.separate(&x)?;
            if s.value < best_value {
                best_value = s.value;
                best_x = x;
            }
            cuts.push(s);
        }
        let total: f64 = duals.iter().sum();
        let nj = self.spec.num_nature_actions();
        let mut ybar = vec![0.0; nj];
        if total > 0.0 {
            for (d, s) in duals.iter().zip(&cuts) {
                for (o, w) in ybar.iter_mut().zip(s.y.weights()) {
                    *o += d / total * w;
                }
            }
        } else {
            ybar = cuts[0].y.weights().to_vec();
        }
        Ok(ModifiedValue {
            value: best_value,
            lower,
            x: best_x,
            certificate_y: SimplexVector::normalized(ybar)?,
            iterations,
        })
    }
}

/// One-shot `r̃_H`-approachability of `{⟨ω, q⟩ ≤ threshold}` for `q ⪰ 0`.
pub fn one_shot_halfspace_modified(
    spec: &GameSpec,
    q: &Point,
    threshold: f64,
    search: &NatureSearch,
    tol: f64,
) -> Result<ConditionReport> {
    let mv = ModifiedSeparator::new(spec, q, search)?.minimize()?;
    let domain = match search {
        NatureSearch::Exact => "all mixed actions".to_string(),
        NatureSearch::Grid(g) => format!("{} grid points", g.len()),
    };
    let method = format!("cutting planes over x ({} iterations), Nature over {domain}", mv.iterations);
    let margin = threshold - mv.value;
    Ok(if margin >= -tol {
        ConditionReport {
            verdict: Verdict::Approachable,
            witness_x: Some(mv.x),
            counter_y: None,
            separating_direction: None,
            margin,
            method,
        }
    } else {
        ConditionReport {
            verdict: Verdict::NotApproachable,
            witness_x: None,
            counter_y: Some(mv.certificate_y),
            separating_direction: Some(q.clone()),
            margin,
            method,
        }
    })
}

/// Runs [`one_shot_halfspace_modified`] with threshold `⟨q, a⟩` for every `q`
/// of the grid. On failure the most violated direction is reported (earliest
/// in grid order among ties).
pub fn primal_condition_orthant(
    spec: &GameSpec,
    a: &Point,
    q_grid: &[Point],
    search: &NatureSearch,
    tol: f64,
) -> Result<ConditionReport> {
    a.check_dim(spec.dim)?;
    if q_grid.is_empty() {
        return Err(Error::Invalid("primal condition needs a nonempty direction grid".into()));
    }
    let reports: Vec<ConditionReport> = q_grid
        .par_iter()
        .map(|q| one_shot_halfspace_modified(spec, q, q.dot(a), search, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    for (k, r) in reports.iter().enumerate() {
        if r.margin < reports[worst].margin {
            worst = k;
        }
    }
    let failures = reports.iter().filter(|r| !r.passes()).count();
    let method = format!("{} directions, {failures} violated; {}", q_grid.len(), reports[worst].method);
    let mut report = reports[worst].clone();
    report.method = method;
    if report.passes() {
        // A single coordinate means the grid already contains every direction.
        report.verdict = if spec.dim == 1 { Verdict::Approachable } else { Verdict::NotFalsifiedOnGrid };
    }
    Ok(report)
}
