//! Approachability strategies and the simulation engine.
//!
//! Three strategies are provided, one per information regime:
//!
//! * [`run_blackwell`]: full monitoring. Each round plays the one-shot witness
//!   for the half-space tangent to the target at the projection of the
//!   running average of `r(x_t, j_t)`.
//! * [`run_observed_flags`]: the player sees the flag `H̄(y_t)` after each
//!   round and steers the running average of the surrogate payoffs
//!   `R_t = r̃_H(x_t, y_t)` into an orthant.
//! * [`run_block_signals`]: only signals are seen. Time is cut into blocks;
//!   within a block the player mixes its planned action with uniform
//!   exploration, and estimates the flag from signal frequencies at the end.
//!
//! Every run owns a `ChaCha8Rng` seeded from a `u64`, so identical seeds give
//! bit-identical traces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{FlagSystem, ModifiedSeparator, NatureSearch};
use crate::error::{Error, Result};
use crate::game::{Flag, GameSpec};
use crate::geometry::{dist_orthant, dist_target, project_orthant, project_target, Point, SimplexVector, TargetSet};
use crate::lp::{solve, zero_sum_value, LinearProgram};
use crate::monitoring::{corner_on_fiber, fiber, project_flag, CornerOracle};

/// Below this distance the average counts as inside the target.
pub const INSIDE_TOL: f64 = 1e-9;

/// Play of Nature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NaturePolicy {
    /// The same mixed action every round.
    Fixed { y: SimplexVector },
    /// Cycles through a list of mixed actions.
    Script { ys: Vec<SimplexVector> },
    /// Maximizes the next-step increase `⟨payoff(x_n, y) − π, avg − π⟩`
    /// knowing the player's mixed action `x_n` but not its realization.
    BestResponse,
}

impl NaturePolicy {
    pub fn fixed(y: SimplexVector) -> Self {
        Self::Fixed { y }
    }

    pub fn script(ys: Vec<SimplexVector>) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::Invalid("script needs at least one mixed action".into()));
        }
        Ok(Self::Script { ys })
    }

    pub fn name(&self) -> String {
        match self {
            Self::Fixed { y } => format!("fixed{:?}", y.weights()),
            Self::Script { ys } => format!("script[{}]", ys.len()),
            Self::BestResponse => "best-response".into(),
        }
    }

    fn check(&self, nj: usize) -> Result<()> {
        match self {
            Self::Fixed { y } => y.check_len(nj),
            Self::Script { ys } => ys.iter().try_for_each(|y| y.check_len(nj)),
            Self::BestResponse => Ok(()),
        }
    }

    fn scripted(&self, round: usize) -> Option<SimplexVector> {
        match self {
            Self::Fixed { y } => Some(y.clone()),
            Self::Script { ys } => Some(ys[(round - 1) % ys.len()].clone()),
            Self::BestResponse => None,
        }
    }
}

/// Builds a policy from its kind.
pub fn nature_policy(kind: NaturePolicy) -> NaturePolicy {
    kind
}

/// Nature's best pure reply against `x` when payoffs are `r(x, ·)` and the
/// player aims at `π` from `avg`.
fn best_reply_mixed(spec: &GameSpec, x: &SimplexVector, avg: &Point, pi: &Point) -> SimplexVector {
    let nj = spec.num_nature_actions();
    let dir = avg.sub(pi);
    if dir.norm() <= INSIDE_TOL {
        return SimplexVector::uniform(nj);
    }
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..nj {
        let v = spec.payoff_against(x, j).sub(pi).dot(&dir);
        if v > best_val {
            best_val = v;
            best = j;
        }
    }
    SimplexVector::pure(nj, best)
}

/// Nature's best reply when payoffs are surrogate corners: maximizes
/// `⟨q, r̃_H(x, y)⟩` over all `y` with `q = avg − π ⪰ 0`.
fn best_reply_surrogate(spec: &GameSpec, x: &SimplexVector, q: &Point) -> Result<SimplexVector> {
    if q.norm() <= INSIDE_TOL {
        return Ok(SimplexVector::uniform(spec.num_nature_actions()));
    }
    tuple_argmax(spec, x, q)
}

/// `argmax_y ⟨q, r̃_H(x, y)⟩` through the tuple LP over mixed actions sharing a
/// flag.
pub fn tuple_argmax(spec: &GameSpec, x: &SimplexVector, q: &Point) -> Result<SimplexVector> {
    let nj = spec.num_nature_actions();
    let active: Vec<usize> = (0..spec.dim).filter(|&k| q.coords[k] > 0.0).collect();
    if active.is_empty() {
        return Ok(SimplexVector::uniform(nj));
    }
    let sys = FlagSystem::new(spec);
    let nv = active.len() * nj;
    let mut c = vec![0.0; nv];
    for (slot, &k) in active.iter().enumerate() {
        for j in 0..nj {
            c[slot * nj + j] = q.coords[k] * spec.payoff_against(x, j).coords[k];
        }
    }
    let mut lp = LinearProgram::maximize(c);
    for slot in 0..active.len() {
        let mut row = vec![0.0; nv];
        row[slot * nj..(slot + 1) * nj].iter_mut().for_each(|v| *v = 1.0);
        lp.equal(row, 1.0);
    }
    for slot in 1..active.len() {
        for a in &sys.rows {
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
        return Err(Error::Solver("best-reply LP failed".into()));
    }
    SimplexVector::normalized(sol.primal[..nj].to_vec())
}

/// One step of Blackwell's strategy under full monitoring.
pub fn blackwell_step(spec: &GameSpec, target: &TargetSet, avg: &Point) -> Result<SimplexVector> {
    let pi = project_target(avg, target)?;
    let dir = avg.sub(&pi);
    if dir.norm() <= INSIDE_TOL {
        return Ok(SimplexVector::uniform(spec.num_player_actions()));
    }
    Ok(zero_sum_value(&spec.scalarize(&dir)?)?.x)
}

/// One step of the surrogate-payoff strategy: an `x` with
/// `max_y ⟨r̃_H(x, y) − π, avg_R − π⟩ ≤ tol` where `π` projects `avg_R` on the
/// orthant. Fails with the best `x` found when no such action exists.
pub fn orthant_step_modified(
    spec: &GameSpec,
    a: &Point,
    avg_r: &Point,
    search: &NatureSearch,
    tol: f64,
) -> Result<SimplexVector> {
    let (x, margin) = orthant_step_detail(spec, a, avg_r, search)?;
    if margin > tol {
        return Err(Error::StepMarginNotReached { best_x: x, margin });
    }
    Ok(x)
}

/// The step action and its achieved `max_y ⟨r̃_H(x, y) − π, avg_R − π⟩`.
fn orthant_step_detail(spec: &GameSpec, a: &Point, avg_r: &Point, search: &NatureSearch) -> Result<(SimplexVector, f64)> {
    let pi = project_orthant(avg_r, a)?;
    let q = avg_r.sub(&pi);
    if q.norm() <= INSIDE_TOL {
        return Ok((SimplexVector::uniform(spec.num_player_actions()), 0.0));
    }
    let mv = ModifiedSeparator::new(spec, &q, search)?.minimize()?;
    Ok((mv.x, mv.value - q.dot(&pi)))
}

/// Exploration schedule of the block strategy: block `b ≥ 1` lasts
/// `⌈scale · b^length_exponent⌉` rounds and explores with probability
/// `b^(−exploration_exponent)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSchedule {
    pub length_exponent: f64,
    pub length_scale: f64,
    pub exploration_exponent: f64,
}

impl Default for BlockSchedule {
    fn default() -> Self {
        Self { length_exponent: 1.5, length_scale: 1.0, exploration_exponent: 0.25 }
    }
}

impl BlockSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.length_exponent >= 0.0 && self.length_scale > 0.0 && self.exploration_exponent >= 0.0) {
            return Err(Error::Invalid("block schedule needs nonnegative exponents and a positive scale".into()));
        }
        Ok(())
    }

    pub fn length(&self, b: usize) -> usize {
        ((self.length_scale * (b as f64).powf(self.length_exponent)).ceil() as usize).max(1)
    }

    pub fn exploration(&self, b: usize) -> f64 {
        (b as f64).powf(-self.exploration_exponent).min(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub strategy: String,
    pub seed: u64,
    pub game_hash: String,
    pub target: TargetSet,
    pub nature: String,
    pub horizon: usize,
    pub schedule: Option<BlockSchedule>,
}

/// Full record of one round, kept when [`SimOptions::record_rounds`] is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub n: usize,
    pub x: SimplexVector,
    pub y: SimplexVector,
    pub i: usize,
    pub j: usize,
    pub signal: usize,
    pub pure_payoff: Point,
    /// `r(x_n, j_n)`.
    pub mixed_payoff: Point,
    /// `r(x_n, y_n)`.
    pub expected_payoff: Point,
    pub surrogate: Option<Point>,
    pub avg_mixed: Point,
    pub avg_expected: Point,
    pub avg_surrogate: Option<Point>,
}

/// Per-round distance series of one simulation. Index `n − 1` holds round `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub header: TraceHeader,
    /// Distance of the average of `r(x_t, j_t)`.
    pub dist: Vec<f64>,
    /// Distance of the average surrogate payoff (NaN when not tracked).
    pub dist_r: Vec<f64>,
    /// Distance of the average of `r(x_t, y_t)`.
    pub dist_expected: Vec<f64>,
    /// Distance of the average of `r(i_t, j_t)`.
    pub dist_pure: Vec<f64>,
    /// Step condition `⟨payoff − π, avg − π⟩` checked after each decision
    /// (NaN where no step was taken).
    pub slack: Vec<f64>,
    pub violations: usize,
    /// Steps where no action met the step tolerance.
    pub step_failures: usize,
    /// ℓ1 error of each block's flag estimate against `H̄(ȳ_block)`.
    pub block_flag_errors: Vec<f64>,
    pub block_ends: Vec<usize>,
    pub rounds: Vec<RoundRecord>,
}

impl Trace {
    fn new(header: TraceHeader) -> Self {
        let h = header.horizon;
        Self {
            header,
            dist: Vec::with_capacity(h),
            dist_r: Vec::with_capacity(h),
            dist_expected: Vec::with_capacity(h),
            dist_pure: Vec::with_capacity(h),
            slack: Vec::with_capacity(h),
            violations: 0,
            step_failures: 0,
            block_flag_errors: Vec::new(),
            block_ends: Vec::new(),
            rounds: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn final_dist(&self) -> f64 {
        self.dist.last().copied().unwrap_or(f64::NAN)
    }

    /// CSV with header `n,dist,dist_R,seed,dist_expected,dist_pure,slack`.
    /// Missing values are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,dist,dist_R,seed,dist_expected,dist_pure,slack\n");
        let fmt = |v: f64| if v.is_nan() { String::new() } else { format!("{v}") };
        for k in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                k + 1,
                fmt(self.dist[k]),
                fmt(self.dist_r[k]),
                self.header.seed,
                fmt(self.dist_expected[k]),
                fmt(self.dist_pure[k]),
                fmt(self.slack[k])
            ));
        }
        out
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            header: self.header.clone(),
            rounds: self.len(),
            final_dist: self.final_dist(),
            final_dist_r: self.dist_r.last().copied().unwrap_or(f64::NAN),
            final_dist_expected: self.dist_expected.last().copied().unwrap_or(f64::NAN),
            final_dist_pure: self.dist_pure.last().copied().unwrap_or(f64::NAN),
            violations: self.violations,
            step_failures: self.step_failures,
            blocks: self.block_ends.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub header: TraceHeader,
    pub rounds: usize,
    pub final_dist: f64,
    pub final_dist_r: f64,
    pub final_dist_expected: f64,
    pub final_dist_pure: f64,
    pub violations: usize,
    pub step_failures: usize,
    pub blocks: usize,
}

#[derive(Clone, Debug)]
pub struct SimOptions {
    pub record_rounds: bool,
    /// Step-condition tolerance.
    pub tol: f64,
    /// Nature's domain in surrogate-payoff steps.
    pub search: NatureSearch,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { record_rounds: false, tol: 1e-7, search: NatureSearch::Exact }
    }
}

/// Running mean of points.
#[derive(Clone, Debug)]
struct Mean {
    sum: Vec<f64>,
    weight: f64,
}

impl Mean {
    fn new(dim: usize) -> Self {
        Self { sum: vec![0.0; dim], weight: 0.0 }
    }

    fn push(&mut self, p: &Point, w: f64) {
        for (s, v) in self.sum.iter_mut().zip(&p.coords) {
            *s += w * v;
        }
        self.weight += w;
    }

    fn value(&self) -> Point {
        if self.weight == 0.0 {
            return Point::zeros(self.sum.len());
        }
        Point::new(self.sum.iter().map(|s| s / self.weight).collect())
    }
}

fn header(strategy: &str, spec: &GameSpec, target: TargetSet, nature: &NaturePolicy, horizon: usize, seed: u64) -> TraceHeader {
    TraceHeader {
        strategy: strategy.into(),
        seed,
        game_hash: spec.hash(),
        target,
        nature: nature.name(),
        horizon,
        schedule: None,
    }
}

fn check_run(spec: &GameSpec, nature: &NaturePolicy, horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::Invalid("horizon must be at least 1".into()));
    }
    nature.check(spec.num_nature_actions())
}

/// Blackwell's projection strategy under full monitoring.
pub fn run_blackwell(
    spec: &GameSpec,
    target: &TargetSet,
    nature: &NaturePolicy,
    horizon: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<Trace> {
    check_run(spec, nature, horizon)?;
    if target.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, got: target.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Trace::new(header("blackwell", spec, target.clone(), nature, horizon, seed));
    let (mut mixed, mut expected, mut pure) = (Mean::new(spec.dim), Mean::new(spec.dim), Mean::new(spec.dim));
    for n in 1..=horizon {
        let avg = mixed.value();
        let (x, pi) = if n == 1 {
            (SimplexVector::uniform(spec.num_player_actions()), avg.clone())
        } else {
            let pi = project_target(&avg, target)?;
            (blackwell_step(spec, target, &avg)?, pi)
        };
        let y = match nature.scripted(n) {
            Some(y) => y,
            None => best_reply_mixed(spec, &x, &avg, &pi),
        };
        let o = spec.sample_round(&x, &y, &mut rng)?;
        let exp_payoff = spec.payoff_mixed(&x, &y)?;
        let slack = if n == 1 || avg.distance(&pi) <= INSIDE_TOL {
            f64::NAN
        } else {
            o.mixed_payoff.sub(&pi).dot(&avg.sub(&pi))
        };
        if slack > opts.tol {
            trace.violations += 1;
        }
        mixed.push(&o.mixed_payoff, 1.0);
        expected.push(&exp_payoff, 1.0);
        pure.push(&o.pure_payoff, 1.0);
        trace.dist.push(dist_target(&mixed.value(), target)?);
        trace.dist_expected.push(dist_target(&expected.value(), target)?);
        trace.dist_pure.push(dist_target(&pure.value(), target)?);
        trace.dist_r.push(f64::NAN);
        trace.slack.push(slack);
        if opts.record_rounds {
            trace.rounds.push(RoundRecord {
                n,
                x,
                y,
                i: o.i,
                j: o.j,
                signal: o.signal,
                pure_payoff: o.pure_payoff,
                mixed_payoff: o.mixed_payoff,
                expected_payoff: exp_payoff,
                surrogate: None,
                avg_mixed: mixed.value(),
                avg_expected: expected.value(),
                avg_surrogate: None,
            });
        }
    }
    Ok(trace)
}

/// Surrogate-payoff strategy when the flag `H̄(y_n)` is observed after each
/// round. The target is `Orthant(a)`.
pub fn run_observed_flags(
    spec: &GameSpec,
    a: &Point,
    nature: &NaturePolicy,
    horizon: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<Trace> {
    check_run(spec, nature, horizon)?;
    a.check_dim(spec.dim)?;
    let target = TargetSet::orthant(a.coords.clone());
    let oracle = CornerOracle::new(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Trace::new(header("observed-flags", spec, target, nature, horizon, seed));
    let d = spec.dim;
    let (mut mixed, mut expected, mut pure, mut surr) = (Mean::new(d), Mean::new(d), Mean::new(d), Mean::new(d));
    for n in 1..=horizon {
        let avg_r = surr.value();
        let pi = project_orthant(&avg_r, a)?;
        let q = avg_r.sub(&pi);
        let x = if n == 1 {
            SimplexVector::uniform(spec.num_player_actions())
        } else {
            let (x, margin) = orthant_step_detail(spec, a, &avg_r, &opts.search)?;
            if margin > opts.tol {
                trace.step_failures += 1;
            }
            x
        };
        let y = match nature.scripted(n) {
            Some(y) => y,
            None => best_reply_surrogate(spec, &x, &q)?,
        };
        let o = spec.sample_round(&x, &y, &mut rng)?;
        let exp_payoff = spec.payoff_mixed(&x, &y)?;
        let r_t = oracle.modified_payoff(&x, &y)?;
        let slack = if n == 1 || q.norm() <= INSIDE_TOL { f64::NAN } else { r_t.sub(&pi).dot(&q) };
        if slack > opts.tol {
            trace.violations += 1;
        }
        mixed.push(&o.mixed_payoff, 1.0);
        expected.push(&exp_payoff, 1.0);
        pure.push(&o.pure_payoff, 1.0);
        surr.push(&r_t, 1.0);
        trace.dist.push(dist_orthant(&mixed.value(), a)?);
        trace.dist_expected.push(dist_orthant(&expected.value(), a)?);
        trace.dist_pure.push(dist_orthant(&pure.value(), a)?);
        trace.dist_r.push(dist_orthant(&surr.value(), a)?);
        trace.slack.push(slack);
        if opts.record_rounds {
            trace.rounds.push(RoundRecord {
                n,
                x,
                y,
                i: o.i,
                j: o.j,
                signal: o.signal,
                pure_payoff: o.pure_payoff,
                mixed_payoff: o.mixed_payoff,
                expected_payoff: exp_payoff,
                surrogate: Some(r_t),
                avg_mixed: mixed.value(),
                avg_expected: expected.value(),
                avg_surrogate: Some(surr.value()),
            });
        }
    }
    Ok(trace)
}

/// Per-action conditional signal frequencies; rows of unplayed actions come
/// from `previous`.
pub fn estimate_flag(counts: &[Vec<usize>], previous: &Flag) -> Flag {
    let rows = counts
        .iter()
        .zip(&previous.rows)
        .map(|(c, prev)| {
            let total: usize = c.iter().sum();
            if total == 0 {
                prev.clone()
            } else {
                c.iter().map(|&k| k as f64 / total as f64).collect()
            }
        })
        .collect();
    Flag { rows }
}

/// Block strategy driven by signals only. The target is `Orthant(a)`.
pub fn run_block_signals(
    spec: &GameSpec,
    a: &Point,
    schedule: &BlockSchedule,
    nature: &NaturePolicy,
    horizon: usize,
    seed: u64,
    opts: &SimOptions,
) -> Result<Trace> {
    check_run(spec, nature, horizon)?;
    schedule.validate()?;
    a.check_dim(spec.dim)?;
    let (ni, nj, ns, d) = (spec.num_player_actions(), spec.num_nature_actions(), spec.num_signals(), spec.dim);
    let target = TargetSet::orthant(a.coords.clone());
    let mut h = header("block-signals", spec, target, nature, horizon, seed);
    h.schedule = Some(schedule.clone());
    let mut trace = Trace::new(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = SimplexVector::uniform(ni);
    let mut previous = Flag { rows: vec![vec![1.0 / ns as f64; ns]; ni] };
    let (mut mixed, mut expected, mut pure, mut surr) = (Mean::new(d), Mean::new(d), Mean::new(d), Mean::new(d));
    let mut n = 0usize;
    let mut b = 0usize;
    while n < horizon {
        b += 1;
        let len = schedule.length(b).min(horizon - n);
        let gamma = schedule.exploration(b);
        let avg_r = surr.value();
        let pi = project_orthant(&avg_r, a)?;
        let q = avg_r.sub(&pi);
        let x_orig = if b == 1 {
            uniform.clone()
        } else {
            let (x, margin) = orthant_step_detail(spec, a, &avg_r, &opts.search)?;
            if margin > opts.tol {
                trace.step_failures += 1;
            }
            x
        };
        let x = SimplexVector::mix(1.0 - gamma, &x_orig, &uniform);
        let mut counts = vec![vec![0usize; ns]; ni];
        let mut y_sum = vec![0.0; nj];
        let reply = match nature {
            NaturePolicy::BestResponse => Some(best_reply_surrogate(spec, &x, &q)?),
            _ => None,
        };
        for _ in 0..len {
            n += 1;
            let y = match nature.scripted(n) {
                Some(y) => y,
                None => reply.clone().expect("best reply computed for the block"),
            };
            let o = spec.sample_round(&x, &y, &mut rng)?;
            counts[o.i][o.signal] += 1;
            for (s, w) in y_sum.iter_mut().zip(y.weights()) {
                *s += w;
            }
            let exp_payoff = spec.payoff_mixed(&x, &y)?;
            mixed.push(&o.mixed_payoff, 1.0);
            expected.push(&exp_payoff, 1.0);
            pure.push(&o.pure_payoff, 1.0);
            trace.dist.push(dist_orthant(&mixed.value(), a)?);
            trace.dist_expected.push(dist_orthant(&expected.value(), a)?);
            trace.dist_pure.push(dist_orthant(&pure.value(), a)?);
            trace.dist_r.push(if surr.weight > 0.0 { dist_orthant(&surr.value(), a)? } else { f64::NAN });
            trace.slack.push(f64::NAN);
            if opts.record_rounds {
                trace.rounds.push(RoundRecord {
                    n,
                    x: x.clone(),
                    y: y.clone(),
                    i: o.i,
                    j: o.j,
                    signal: o.signal,
                    pure_payoff: o.pure_payoff,
                    mixed_payoff: o.mixed_payoff,
                    expected_payoff: exp_payoff,
                    surrogate: None,
                    avg_mixed: mixed.value(),
                    avg_expected: expected.value(),
                    avg_surrogate: (surr.weight > 0.0).then(|| surr.value()),
                });
            }
        }
        let estimate = estimate_flag(&counts, &previous);
        let repaired = project_flag(spec, &estimate)?;
        let y_bar = SimplexVector::normalized(y_sum)?;
        trace.block_flag_errors.push(estimate.l1_distance(&spec.maximal_information(&y_bar)?));
        let block_fiber = fiber(spec, &repaired.flag)?;
        let r_b = corner_on_fiber(spec, &block_fiber, &x)?.corner;
        if b > 1 && q.norm() > INSIDE_TOL {
            let slack = r_b.sub(&pi).dot(&q);
            if slack > opts.tol {
                trace.violations += 1;
            }
            *trace.slack.last_mut().expect("block has rounds") = slack;
        }
        surr.push(&r_b, len as f64);
        *trace.dist_r.last_mut().expect("block has rounds") = dist_orthant(&surr.value(), a)?;
        trace.block_ends.push(n);
        previous = estimate;
    }
    Ok(trace)
}

/// Runs `replications` simulations with seeds `base_seed + k` in parallel.
/// The environment variable `APPROACHKIT_THREADS` caps the worker count.
pub fn monte_carlo<F>(replications: usize, base_seed: u64, run: F) -> Result<Vec<Trace>>
where
    F: Fn(u64) -> Result<Trace> + Sync + Send,
{
    let job = || (0..replications).into_par_iter().map(|k| run(base_seed + k as u64)).collect::<Result<Vec<_>>>();
    match std::env::var("APPROACHKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(threads) if threads > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
            .install(job),
        _ => job(),
    }
}
