//! Dense linear programming and zero-sum matrix games.
//!
//! [`solve`] is a two-phase tableau simplex with Bland's pivoting rule. It is
//! meant for desk-scale programs (a few hundred variables at most) and is
//! deterministic: the same input always produces the same pivot sequence.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::SimplexVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimize c'x` subject to linear rows and per-variable bounds. Variables
/// default to `[0, +inf)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { sense, objective, constraints: Vec::new(), bounds: vec![(0.0, f64::INFINITY); n] }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn le(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.constrain(coeffs, Relation::Le, rhs)
    }

    pub fn ge(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.constrain(coeffs, Relation::Ge, rhs)
    }

    pub fn equal(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        self.constrain(coeffs, Relation::Eq, rhs)
    }

    pub fn bound(&mut self, var: usize, lo: f64, hi: f64) -> &mut Self {
        self.bounds[var] = (lo, hi);
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bound(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Equality rows as `(matrix, rhs)`.
    pub fn equalities(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        self.rows_with(|r| r == Relation::Eq)
    }

    /// Inequality rows in `A x <= b` form (`>=` rows are negated).
    pub fn inequalities(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for c in &self.constraints {
            match c.relation {
                Relation::Le => {
                    a.push(c.coeffs.clone());
                    b.push(c.rhs);
                }
                Relation::Ge => {
                    a.push(c.coeffs.iter().map(|v| -v).collect());
                    b.push(-c.rhs);
                }
                Relation::Eq => {}
            }
        }
        (a, b)
    }

    fn rows_with(&self, keep: impl Fn(Relation) -> bool) -> (Vec<Vec<f64>>, Vec<f64>) {
        self.constraints.iter().filter(|c| keep(c.relation)).map(|c| (c.coeffs.clone(), c.rhs)).unzip()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::Invalid("linear program without variables".into()));
        }
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.bounds.len() });
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: c.coeffs.len() });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::Invalid("non-finite constraint data".into()));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite objective".into()));
        }
        for &(lo, hi) in &self.bounds {
            if lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::Invalid(format!("invalid bounds [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Largest violation of rows and bounds at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (&(lo, hi), &v) in self.bounds.iter().zip(x) {
            worst = worst.max(lo - v).max(v - hi);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `dual[i]` is the rate of change of the optimal value per unit
/// increase of the right-hand side of constraint `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn status_only(status: LpStatus, n: usize, m: usize) -> Self {
        let value = match status {
            LpStatus::Infeasible => f64::NAN,
            _ => f64::INFINITY,
        };
        Self { status, value, primal: vec![f64::NAN; n], dual: vec![f64::NAN; m] }
    }
}

enum VarMap {
    Shift { col: usize, lo: f64 },
    Mirror { col: usize, hi: f64 },
    Split { pos: usize, neg: usize },
}

const MAX_PIVOTS: usize = 200_000;
const PIVOT_TOL: f64 = 1e-9;
const HARRIS_TOL: f64 = 1e-10;
const REINVERT_EVERY: usize = 64;
/// After this many pivots in one phase the ratio test falls back to strict
/// Bland tie-breaking, which cannot cycle.
const BLAND_AFTER: usize = 5_000;

struct Tableau {
    rows: Vec<Vec<f64>>, // m rows, ncols + 1 entries (last is rhs)
    orig: Vec<Vec<f64>>, // the rows before any pivot
    z: Vec<f64>,         // reduced costs, last entry is minus the objective value
    costs: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn new(rows: Vec<Vec<f64>>, basis: Vec<usize>, ncols: usize) -> Self {
        Self { orig: rows.clone(), rows, z: vec![0.0; ncols + 1], costs: vec![0.0; ncols], basis, ncols }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        let f = self.z[c];
        if f != 0.0 {
            for (v, p) in self.z.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.z[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[f64]) {
        self.costs = costs.to_vec();
        self.refresh_costs();
    }

    fn refresh_costs(&mut self) {
        let w = self.ncols + 1;
        self.z = vec![0.0; w];
        self.z[..self.ncols].copy_from_slice(&self.costs);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = self.costs[self.basis[i]];
            if cb != 0.0 {
                for (zj, v) in self.z.iter_mut().zip(row) {
                    *zj -= cb * v;
                }
            }
        }
        for &b in &self.basis {
            self.z[b] = 0.0;
        }
    }

    /// Recomputes the tableau as `B^-1 [A | b]` from the original rows.
    fn reinvert(&mut self) {
        let m = self.rows.len();
        if m == 0 {
            return;
        }
        let w = self.ncols + 1;
        let b = DMatrix::from_fn(m, m, |i, k| self.orig[i][self.basis[k]]);
        let lu = b.lu();
        let full = DMatrix::from_fn(m, w, |i, j| self.orig[i][j]);
        let Some(x) = lu.solve(&full) else {
            return;
        };
        if x.iter().any(|v| !v.is_finite()) {
            return;
        }
        for i in 0..m {
            for j in 0..w {
                let v = x[(i, j)];
                self.rows[i][j] = if v.abs() < 1e-14 { 0.0 } else { v };
            }
            for (k, &bk) in self.basis.iter().enumerate() {
                self.rows[i][bk] = if i == k { 1.0 } else { 0.0 };
            }
            if self.rows[i][self.ncols] < 0.0 && self.rows[i][self.ncols] > -1e-9 {
                self.rows[i][self.ncols] = 0.0;
            }
        }
        self.refresh_costs();
    }

    fn leaving_row(&self, c: usize, strict_bland: bool) -> Option<usize> {
        let rhs = |i: usize| self.rows[i][self.ncols].max(0.0);
        let candidates = || self.rows.iter().enumerate().filter(|(_, row)| row[c] > PIVOT_TOL);
        if strict_bland {
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in candidates() {
                let ratio = rhs(i) / row[c];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            return leave.map(|(i, _)| i);
        }
        let bound = candidates().map(|(i, row)| (rhs(i) + HARRIS_TOL) / row[c]).fold(f64::INFINITY, f64::min);
        if !bound.is_finite() {
            return None;
        }
        candidates()
            .filter(|(i, row)| rhs(*i) / row[c] <= bound)
            .max_by(|(i, a), (k, b)| a[c].total_cmp(&b[c]).then(self.basis[*k].cmp(&self.basis[*i])))
            .map(|(i, _)| i)
    }

    /// Simplex iterations with Bland's entering rule. Returns false if
    /// unbounded.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool, opt_tol: f64) -> Result<bool> {
        let mut pivots = 0usize;
        let mut since_reinvert = 0usize;
        let mut rechecks = 0usize;
        while pivots < MAX_PIVOTS {
            let entering = (0..self.ncols).find(|&j| allowed(j) && self.z[j] < -opt_tol);
            let Some(c) = entering else {
                if since_reinvert == 0 || rechecks >= 4 {
                    return Ok(true);
                }
                self.reinvert();
                since_reinvert = 0;
                rechecks += 1;
                continue;
            };
            match self.leaving_row(c, pivots >= BLAND_AFTER) {
                None => return Ok(false),
                Some(r) => self.pivot(r, c),
            }
            pivots += 1;
            since_reinvert += 1;
            if since_reinvert >= REINVERT_EVERY {
                self.reinvert();
                since_reinvert = 0;
            }
        }
        Err(Error::Solver(format!("pivot limit {MAX_PIVOTS} exceeded")))
    }
}

/// Solves `lp` with the default tolerances.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, &Tolerances::default())
}

pub fn solve_with(lp: &LinearProgram, tol: &Tolerances) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();
    let m_user = lp.constraints.len();

    // Variable substitution to nonnegative columns.
    let mut maps = Vec::with_capacity(n);
    let mut ncols_struct = 0usize;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new(); // column <= value
    for &(lo, hi) in &lp.bounds {
        if lo.is_finite() {
            maps.push(VarMap::Shift { col: ncols_struct, lo });
            if hi.is_finite() {
                bound_rows.push((ncols_struct, hi - lo));
            }
            ncols_struct += 1;
        } else if hi.is_finite() {
            maps.push(VarMap::Mirror { col: ncols_struct, hi });
            ncols_struct += 1;
        } else {
            maps.push(VarMap::Split { pos: ncols_struct, neg: ncols_struct + 1 });
            ncols_struct += 2;
        }
    }

    // Rows over the structural columns: (coeffs, slack sign, rhs).
    let mut raw: Vec<(Vec<f64>, Option<f64>, f64)> = Vec::with_capacity(m_user + bound_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; ncols_struct];
        let mut rhs = c.rhs;
        for (k, &a) in c.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[k] {
                VarMap::Shift { col, lo } => {
                    coeffs[col] += a;
                    rhs -= a * lo;
                }
                VarMap::Mirror { col, hi } => {
                    coeffs[col] -= a;
                    rhs -= a * hi;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        let slack = match c.relation {
            Relation::Le => Some(1.0),
            Relation::Ge => Some(-1.0),
            Relation::Eq => None,
        };
        raw.push((coeffs, slack, rhs));
    }
    for &(col, ub) in &bound_rows {
        let mut coeffs = vec![0.0; ncols_struct];
        coeffs[col] = 1.0;
        raw.push((coeffs, Some(1.0), ub));
    }
    let m = raw.len();

    let mut cost = vec![0.0; ncols_struct];
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    for (k, &c) in lp.objective.iter().enumerate() {
        let c = sign * c;
        match maps[k] {
            VarMap::Shift { col, .. } => cost[col] += c,
            VarMap::Mirror { col, .. } => cost[col] -= c,
            VarMap::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
        }
    }

    // Column layout: structural | slacks | artificials.
    let n_slack = raw.iter().filter(|r| r.1.is_some()).count();
    let mut flips = vec![1.0; m];
    let mut unit_col = vec![0usize; m];
    let mut n_art = 0usize;
    let mut slack_of_row = vec![None; m];
    {
        let mut s = 0;
        for (i, r) in raw.iter().enumerate() {
            if r.1.is_some() {
                slack_of_row[i] = Some(ncols_struct + s);
                s += 1;
            }
        }
    }
    let art_start = ncols_struct + n_slack;
    for (i, r) in raw.iter().enumerate() {
        if r.2 < 0.0 {
            flips[i] = -1.0;
        }
        let slack_sign = r.1.map(|s| s * flips[i]);
        if slack_sign == Some(1.0) {
            unit_col[i] = slack_of_row[i].expect("slack present");
        } else {
            unit_col[i] = art_start + n_art;
            n_art += 1;
        }
    }
    let ncols = art_start + n_art;
    let mut rows = Vec::with_capacity(m);
    for (i, (coeffs, slack, rhs)) in raw.iter().enumerate() {
        let f = flips[i];
        let mut row = vec![0.0; ncols + 1];
        for (j, &a) in coeffs.iter().enumerate() {
            row[j] = f * a;
        }
        if let (Some(s), Some(col)) = (slack, slack_of_row[i]) {
            row[col] = f * s;
        }
        if unit_col[i] >= art_start {
            row[unit_col[i]] = 1.0;
        }
        row[ncols] = f * rhs;
        rows.push(row);
    }
    let mut t = Tableau::new(rows, unit_col.clone(), ncols);

    // Phase 1.
    if n_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = 1.0;
        }
        t.set_costs(&phase1);
        t.run(&|_| true, tol.lp_optimality)?;
        let infeas = -t.z[ncols];
        let scale = 1.0 + t.rows.iter().map(|r| r[ncols].abs()).fold(0.0, f64::max);
        if infeas > tol.lp_feasibility * scale * 10.0 {
            return Ok(LpSolution::status_only(LpStatus::Infeasible, n, m_user));
        }
        // Drive zero-valued artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= art_start {
                let pick = (0..art_start)
                    .filter(|&j| t.rows[r][j].abs() > 1e-9)
                    .max_by(|&a, &b| t.rows[r][a].abs().total_cmp(&t.rows[r][b].abs()));
                if let Some(j) = pick {
                    t.pivot(r, j);
                }
            }
        }
    }

    // Phase 2.
    let mut costs = vec![0.0; ncols];
    costs[..ncols_struct].copy_from_slice(&cost);
    t.set_costs(&costs);
    let bounded = t.run(&|j| j < art_start, tol.lp_optimality)?;
    if !bounded {
        return Ok(LpSolution::status_only(LpStatus::Unbounded, n, m_user));
    }

    let mut col_values = vec![0.0; ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        col_values[b] = t.rows[i][ncols];
    }
    let primal: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shift { col, lo } => lo + col_values[col],
            VarMap::Mirror { col, hi } => hi - col_values[col],
            VarMap::Split { pos, neg } => col_values[pos] - col_values[neg],
        })
        .collect();
    let dual: Vec<f64> = (0..m_user).map(|i| sign * flips[i] * -t.z[unit_col[i]]).collect();
    let value: f64 = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();

    let viol = lp.max_violation(&primal);
    let scale = 1.0
        + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max)
        + primal.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if viol > 1e-7 * scale {
        return Err(Error::Solver(format!(
            "numerically degenerate basis: final primal violates constraints by {viol:.3e}"
        )));
    }
    Ok(LpSolution { status: LpStatus::Optimal, value, primal, dual })
}

/// Value and optimal strategies of a zero-sum matrix game in which the row
/// player minimizes `x' G y` and the column player maximizes it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSumSolution {
    pub value: f64,
    /// Minimizer's optimal mixed action.
    pub x: SimplexVector,
    /// Maximizer's optimal mixed action.
    pub y: SimplexVector,
}

/// `min_x max_y x' G y` via the standard LP with a free value variable. The
/// column player's strategy comes from the second LP; the two values are
/// required to agree within 1e-7.
pub fn zero_sum_value(g: &[Vec<f64>]) -> Result<ZeroSumSolution> {
    let rows = g.len();
    let cols = g.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || g.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("zero-sum game needs a nonempty rectangular matrix".into()));
    }
    if g.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("zero-sum game entries must be finite".into()));
    }

    // Row player: minimize v s.t. sum_i x_i G[i][j] <= v for all j.
    let mut lp = LinearProgram::minimize({
        let mut c = vec![0.0; rows + 1];
        c[rows] = 1.0;
        c
    });
    lp.free(rows);
    for j in 0..cols {
        let mut coeffs: Vec<f64> = g.iter().map(|r| r[j]).collect();
        coeffs.push(-1.0);
        lp.le(coeffs, 0.0);
    }
    let mut sum = vec![1.0; rows];
    sum.push(0.0);
    lp.equal(sum, 1.0);
    let row_sol = solve(&lp)?;

    // Column player: maximize w s.t. sum_j G[i][j] y_j >= w for all i.
    let mut lp = LinearProgram::maximize({
        let mut c = vec![0.0; cols + 1];
        c[cols] = 1.0;
        c
    });
    lp.free(cols);
    for row in g {
        let mut coeffs = row.clone();
        coeffs.push(-1.0);
        lp.ge(coeffs, 0.0);
    }
    let mut sum = vec![1.0; cols];
    sum.push(0.0);
    lp.equal(sum, 1.0);
    let col_sol = solve(&lp)?;

    if !row_sol.is_optimal() || !col_sol.is_optimal() {
        return Err(Error::Solver("zero-sum LP not optimal".into()));
    }
    let gap = (row_sol.value - col_sol.value).abs();
    let scale = 1.0 + g.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if gap > 1e-7 * scale {
        return Err(Error::Solver(format!("minimax duality gap {gap:.3e}")));
    }
    Ok(ZeroSumSolution {
        value: row_sol.value,
        x: SimplexVector::normalized(row_sol.primal[..rows].to_vec())?,
        y: SimplexVector::normalized(col_sol.primal[..cols].to_vec())?,
    })
}

/// Vertices of `{z >= 0 : A z = b}` by enumerating column supports whose
/// columns are linearly independent (basic feasible solutions). Exponential in
/// the number of columns; callers gate the size.
pub fn enumerate_vertices(a: &[Vec<f64>], b: &[f64], tol: f64) -> Result<Vec<Vec<f64>>> {
    let m = a.len();
    if m == 0 || b.len() != m {
        return Err(Error::Invalid("vertex enumeration needs a nonempty system".into()));
    }
    let n = a[0].len();
    if n > 20 {
        return Err(Error::TooLarge(format!("{n} columns")));
    }
    let full = DMatrix::from_fn(m, n, |i, j| a[i][j]);
    let rank = full.clone().svd(false, false).rank(1e-9).min(n);
    let bvec = DVector::from_column_slice(b);
    let bscale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut found: Vec<Vec<f64>> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let support: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        if support.len() > rank {
            continue;
        }
        let sub = full.select_columns(support.iter());
        let svd = sub.clone().svd(true, true);
        if svd.rank(1e-9) < support.len() {
            continue;
        }
        let Ok(sol) = svd.solve(&bvec, 1e-12) else {
            continue;
        };
        if sol.iter().any(|v| *v < -tol) {
            continue;
        }
        let residual = (&sub * &sol - &bvec).amax();
        if residual > tol * bscale {
            continue;
        }
        let mut z = vec![0.0; n];
        for (k, &j) in support.iter().enumerate() {
            z[j] = sol[k].max(0.0);
        }
        if !found.iter().any(|v| v.iter().zip(&z).all(|(p, q)| (p - q).abs() <= 1e-7)) {
            found.push(z);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn trivial_programs() {
        let mut lp = LinearProgram::maximize(vec![1.0]);
        lp.le(vec![1.0], 1.0);
        let s = solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);

        let mut lp = LinearProgram::maximize(vec![1.0, 1.0]);
        lp.le(vec![1.0, 1.0], 1.0);
        let s = solve(&lp).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.dual[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::minimize(vec![1.0]);
        lp.ge(vec![1.0], 2.0).le(vec![1.0], 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::maximize(vec![1.0, 0.0]);
        lp.le(vec![-1.0, 1.0], 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn bounds_and_free_variables() {
        // minimize x - y with x in [-2, 3], y <= 4 (no lower bound), x + y >= -10
        let mut lp = LinearProgram::minimize(vec![1.0, -1.0]);
        lp.bound(0, -2.0, 3.0).bound(1, f64::NEG_INFINITY, 4.0).ge(vec![1.0, 1.0], -10.0);
        let s = solve(&lp).unwrap();
        assert!((s.value - (-6.0)).abs() < 1e-9);
        assert!((s.primal[0] + 2.0).abs() < 1e-9 && (s.primal[1] - 4.0).abs() < 1e-9);

        // free variable pinned by equalities
        let mut lp = LinearProgram::minimize(vec![0.0, 1.0]);
        lp.free(0).equal(vec![1.0, 0.0], -3.5).ge(vec![-1.0, 1.0], 0.0);
        let s = solve(&lp).unwrap();
        assert!((s.primal[0] + 3.5).abs() < 1e-9);
        assert!(s.value.abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::maximize(vec![1.0, 2.0]);
        lp.equal(vec![1.0, 1.0], 1.0).equal(vec![2.0, 2.0], 2.0);
        let s = solve(&lp).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn duals_give_strong_duality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(2..5);
            let m = rng.random_range(1..5);
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
            let mut lp = LinearProgram::maximize(c);
            let mut rows = Vec::new();
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
                let b = rng.random_range(0.5..3.0);
                lp.le(row.clone(), b);
                rows.push((row, b));
            }
            let s = solve(&lp).unwrap();
            let dual_value: f64 = s.dual.iter().zip(&rows).map(|(y, (_, b))| y * b).sum();
            assert!((dual_value - s.value).abs() < 1e-8);
            assert!(s.dual.iter().all(|y| *y >= -1e-12));
        }
    }

    /// Brute-force optimum of `max c'x, A x <= b, x >= 0` over all intersections
    /// of `n` active constraints among the `m + n` available.
    fn vertex_oracle(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
        let n = c.len();
        let m = a.len();
        let mut all_rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().cloned()).collect();
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = -1.0;
            all_rows.push((e, 0.0));
        }
        let total = m + n;
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << total) {
            if mask.count_ones() as usize != n {
                continue;
            }
            let chosen: Vec<&(Vec<f64>, f64)> =
                (0..total).filter(|k| mask & (1 << k) != 0).map(|k| &all_rows[k]).collect();
            let mat = DMatrix::from_fn(n, n, |i, j| chosen[i].0[j]);
            let rhs = DVector::from_fn(n, |i, _| chosen[i].1);
            let Some(x) = mat.lu().solve(&rhs) else { continue };
            let feasible = all_rows
                .iter()
                .all(|(row, bb)| row.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= bb + 1e-9);
            if feasible {
                best = best.max(c.iter().zip(x.iter()).map(|(p, q)| p * q).sum());
            }
        }
        best
    }

    #[test]
    fn random_programs_match_vertex_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let n = rng.random_range(2..4);
            let m = rng.random_range(2..5);
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..2.0)).collect();
            let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-0.5..2.0)).collect()).collect();
            let b: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
            // Box keeps every instance bounded.
            let mut a_full = a.clone();
            let mut b_full = b.clone();
            for k in 0..n {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                a_full.push(e);
                b_full.push(5.0);
            }
            let mut lp = LinearProgram::maximize(c.clone());
            for (row, bb) in a_full.iter().zip(&b_full) {
                lp.le(row.clone(), *bb);
            }
            let s = solve(&lp).unwrap();
            let oracle = vertex_oracle(&c, &a_full, &b_full);
            assert!((s.value - oracle).abs() < 1e-6, "{} vs {}", s.value, oracle);
        }
    }

    #[test]
    fn deterministic_solutions() {
        let mut lp = LinearProgram::maximize(vec![1.0, 1.0, 1.0]);
        lp.le(vec![1.0, 1.0, 1.0], 1.0);
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(a, b);
    }

    fn closed_form_2x2(g: [[f64; 2]; 2]) -> f64 {
        // pure saddle point first, otherwise the mixed formula
        let row_max = |i: usize| g[i][0].max(g[i][1]);
        let col_min = |j: usize| g[0][j].min(g[1][j]);
        let upper = row_max(0).min(row_max(1));
        let lower = col_min(0).max(col_min(1));
        if (upper - lower).abs() < 1e-12 {
            return upper;
        }
        (g[0][0] * g[1][1] - g[0][1] * g[1][0]) / (g[0][0] + g[1][1] - g[0][1] - g[1][0])
    }

    #[test]
    fn zero_sum_examples() {
        let s = zero_sum_value(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!((s.value - closed_form_2x2([[0.0, 1.0], [-1.0, 0.0]])).abs() < 1e-9);
        assert!(s.value.abs() < 1e-9);
        assert!((s.x.get(1) - 1.0).abs() < 1e-9, "minimizer plays the second row");

        let s = zero_sum_value(&vec![vec![2.5; 3]; 2]).unwrap();
        assert!((s.value - 2.5).abs() < 1e-9);

        let s = zero_sum_value(&vec![vec![0.0; 2]; 2]).unwrap();
        assert!(s.value.abs() < 1e-12);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = [[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)], [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]];
            let s = zero_sum_value(&[g[0].to_vec(), g[1].to_vec()]).unwrap();
            assert!((s.value - closed_form_2x2(g)).abs() < 1e-9);
        }
    }

    fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<f64>> {
        let r = rng.random_range(1..6);
        let c = rng.random_range(1..6);
        (0..r).map(|_| (0..c).map(|_| rng.random_range(-3.0..3.0)).collect()).collect()
    }

    #[test]
    fn minimax_duality_and_skew_symmetry() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(200);
        for _ in 0..200 {
            let g = random_matrix(&mut rng);
            let s = zero_sum_value(&g).unwrap();
            // x guarantees at most the value, y guarantees at least the value
            let cols = g[0].len();
            let upper = (0..cols)
                .map(|j| (0..g.len()).map(|i| s.x.get(i) * g[i][j]).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            let lower = g
                .iter()
                .map(|row| row.iter().zip(s.y.weights()).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            assert!((upper - lower).abs() <= 1e-7);
            assert!((upper - s.value).abs() <= 1e-7);

            let neg_t: Vec<Vec<f64>> = (0..cols).map(|j| g.iter().map(|row| -row[j]).collect()).collect();
            let t = zero_sum_value(&neg_t).unwrap();
            assert!((t.value + s.value).abs() <= 1e-7);
        }
    }

    #[test]
    fn vertices_of_simplex_slices() {
        // {y in simplex of R^3} -> the three unit vectors
        let v = enumerate_vertices(&[vec![1.0, 1.0, 1.0]], &[1.0], 1e-9).unwrap();
        assert_eq!(v.len(), 3);
        // y1 = y2 on the simplex of R^3: (1/2,1/2,0) and (0,0,1)
        let v = enumerate_vertices(&[vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]], &[1.0, 0.0], 1e-9).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|z| (z[0] - 0.5).abs() < 1e-12 && (z[1] - 0.5).abs() < 1e-12));
        assert!(v.iter().any(|z| (z[2] - 1.0).abs() < 1e-12));
    }
}
