//! Games with incomplete information on one side, embedded as approachability.
//!
//! `d` scalar games share action and signal sets. Nature picks one mixed
//! action per game, and the profile must not reveal which game is played:
//! every game must emit the same flag. The extreme points `K` of this
//! non-revealing set are the Nature actions of an auxiliary vector game whose
//! `g`-th payoff coordinate is game `g`. With two games, the value `u(p)` of
//! the scalarized auxiliary game is concavified and each supporting line
//! `a_p` of `cav u` gives an approachable orthant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::geometry::{simplex_grid, Point, SimplexVector};
use crate::lp::{enumerate_vertices, solve, zero_sum_value, LinearProgram};
use crate::monitoring::{has_urc_property, UrcReport};

/// Largest `d · J` for which the non-revealing vertices are enumerated.
pub const MAX_NR_VARIABLES: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimultaneousGames {
    pub player_actions: Vec<String>,
    pub nature_actions: Vec<String>,
    pub signals: Vec<String>,
    /// `payoffs[g][i][j]`.
    pub payoffs: Vec<Vec<Vec<f64>>>,
    /// `signal_laws[g][i][j]` is a distribution over the shared signals.
    pub signal_laws: Vec<Vec<Vec<Vec<f64>>>>,
}

impl SimultaneousGames {
    pub fn new(payoffs: Vec<Vec<Vec<f64>>>, signal_laws: Vec<Vec<Vec<Vec<f64>>>>) -> Result<Self> {
        let first = payoffs.first().ok_or_else(|| Error::Invalid("need at least one game".into()))?;
        let (ni, nj) = (first.len(), first.first().map_or(0, Vec::len));
        let ns = signal_laws.first().and_then(|h| h.first()).and_then(|r| r.first()).map_or(0, Vec::len);
        let g = Self {
            player_actions: (0..ni).map(|i| format!("i{i}")).collect(),
            nature_actions: (0..nj).map(|j| format!("j{j}")).collect(),
            signals: (0..ns).map(|s| format!("s{s}")).collect(),
            payoffs,
            signal_laws,
        };
        g.validate()?;
        Ok(g)
    }

    /// `d` games played in the dark.
    pub fn dark(payoffs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let laws = payoffs.iter().map(|p| vec![vec![vec![1.0]; p[0].len()]; p.len()]).collect();
        Self::new(payoffs, laws)
    }

    /// `d` games sharing one signal law.
    pub fn shared_signals(payoffs: Vec<Vec<Vec<f64>>>, law: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let laws = vec![law; payoffs.len()];
        Self::new(payoffs, laws)
    }

    pub fn count(&self) -> usize {
        self.payoffs.len()
    }

    /// Game `g` as a scalar [`GameSpec`].
    pub fn game(&self, g: usize) -> Result<GameSpec> {
        let spec = GameSpec {
            player_actions: self.player_actions.clone(),
            nature_actions: self.nature_actions.clone(),
            dim: 1,
            signals: self.signals.clone(),
            payoffs: self.payoffs[g].iter().map(|row| row.iter().map(|v| vec![*v]).collect()).collect(),
            signal_law: self.signal_laws[g].clone(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (ni, nj, ns) = (self.player_actions.len(), self.nature_actions.len(), self.signals.len());
        if self.payoffs.len() != self.signal_laws.len() {
            return Err(Error::Invalid("one signal law per game is required".into()));
        }
        for (p, h) in self.payoffs.iter().zip(&self.signal_laws) {
            if p.len() != ni || p.iter().any(|r| r.len() != nj || r.iter().any(|v| !v.is_finite())) {
                return Err(Error::Invalid("payoff tables must share the action sets".into()));
            }
            if h.len() != ni || h.iter().any(|r| r.len() != nj || r.iter().any(|d| d.len() != ns)) {
                return Err(Error::Invalid("signal laws must share the action and signal sets".into()));
            }
        }
        for g in 0..self.count() {
            self.game(g)?;
        }
        Ok(())
    }

    /// Checks on a grid that every game's flags are reachable by every other
    /// game.
    pub fn check_common_range(&self, denom: usize) -> Result<()> {
        let games: Vec<GameSpec> = (0..self.count()).map(|g| self.game(g)).collect::<Result<_>>()?;
        for (g, a) in games.iter().enumerate() {
            for y in simplex_grid(a.num_nature_actions(), denom) {
                let flag = a.maximal_information(&y)?;
                for (h, b) in games.iter().enumerate() {
                    let gap = crate::monitoring::project_flag(b, &flag)?.gap;
                    if gap > 1e-7 {
                        return Err(Error::Invalid(format!("flag ranges differ: game {g} reaches a flag game {h} cannot (gap {gap:.3e})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Extreme points of the non-revealing set, one mixed action per game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NRSet {
    pub vertices: Vec<Vec<SimplexVector>>,
}

/// The system `A z = b, z ≥ 0` over stacked `(y^(1), …, y^(d))`.
fn nr_system(games: &SimultaneousGames) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (d, ni, nj, ns) = (games.count(), games.player_actions.len(), games.nature_actions.len(), games.signals.len());
    let n = d * nj;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for g in 0..d {
        let mut row = vec![0.0; n];
        row[g * nj..(g + 1) * nj].iter_mut().for_each(|v| *v = 1.0);
        a.push(row);
        b.push(1.0);
    }
    for g in 1..d {
        for i in 0..ni {
            for s in 0..ns {
                let mut row = vec![0.0; n];
                for j in 0..nj {
                    row[g * nj + j] = games.signal_laws[g][i][j][s];
                    row[j] -= games.signal_laws[0][i][j][s];
                }
                if row.iter().any(|v| v.abs() > 1e-15) {
                    a.push(row);
                    b.push(0.0);
                }
            }
        }
    }
    (a, b)
}

pub fn nr_vertices(games: &SimultaneousGames) -> Result<NRSet> {
    games.validate()?;
    let (d, nj) = (games.count(), games.nature_actions.len());
    if d * nj > MAX_NR_VARIABLES {
        return Err(Error::TooLarge(format!("d·J = {} exceeds {MAX_NR_VARIABLES}", d * nj)));
    }
    let (a, b) = nr_system(games);
    let mut lp = LinearProgram::minimize(vec![0.0; d * nj]);
    for (row, rhs) in a.iter().zip(&b) {
        lp.equal(row.clone(), *rhs);
    }
    if !solve(&lp)?.is_optimal() {
        return Err(Error::NoNonRevealingProfile);
    }
    let mut vertices: Vec<Vec<SimplexVector>> = Vec::new();
    for z in enumerate_vertices(&a, &b, 1e-9)? {
        let tuple: Vec<SimplexVector> =
            (0..d).map(|g| SimplexVector::normalized(z[g * nj..(g + 1) * nj].to_vec())).collect::<Result<_>>()?;
        let dup = vertices.iter().any(|v| v.iter().zip(&tuple).all(|(p, q)| p.l1_distance(q) <= 1e-7));
        if !dup {
            vertices.push(tuple);
        }
    }
    if vertices.is_empty() {
        return Err(Error::NoNonRevealingProfile);
    }
    Ok(NRSet { vertices })
}

/// The auxiliary vector game whose Nature actions are the non-revealing
/// vertices.
pub fn auxiliary_game(games: &SimultaneousGames, nr: &NRSet) -> Result<GameSpec> {
    if nr.vertices.is_empty() {
        return Err(Error::NoNonRevealingProfile);
    }
    let d = games.count();
    let specs: Vec<GameSpec> = (0..d).map(|g| games.game(g)).collect::<Result<_>>()?;
    let ni = games.player_actions.len();
    let mut payoffs = vec![Vec::with_capacity(nr.vertices.len()); ni];
    let mut law = vec![Vec::with_capacity(nr.vertices.len()); ni];
    for tuple in &nr.vertices {
        let flags: Vec<_> = specs.iter().zip(tuple).map(|(s, y)| s.maximal_information(y)).collect::<Result<_>>()?;
        if flags.iter().any(|f| !f.approx_eq(&flags[0], 1e-7)) {
            return Err(Error::Invalid("non-revealing vertex emits different flags".into()));
        }
        for i in 0..ni {
            let x = SimplexVector::pure(ni, i);
            payoffs[i].push(specs.iter().zip(tuple).map(|(s, y)| s.payoff_mixed(&x, y).map(|p| p.coords[0])).collect::<Result<Vec<_>>>()?);
            law[i].push(flags[0].rows[i].clone());
        }
    }
    let spec = GameSpec {
        player_actions: games.player_actions.clone(),
        nature_actions: (0..nr.vertices.len()).map(|k| format!("k{k}")).collect(),
        dim: d,
        signals: games.signals.clone(),
        payoffs,
        signal_law: law,
    };
    spec.validate()?;
    Ok(spec)
}

/// URC check on the auxiliary game with grids small enough for many Nature
/// actions.
pub fn auxiliary_urc(aux: &GameSpec, tol: f64) -> Result<UrcReport> {
    let nk = aux.num_nature_actions();
    let denom = match nk {
        0..=3 => 12,
        4..=5 => 6,
        _ => 3,
    };
    let flags = crate::monitoring::flag_grid(aux, denom)?;
    has_urc_property(aux, &simplex_grid(aux.num_player_actions(), 10), &flags, tol)
}

/// `u(q) = min_x max_k ⟨q, r(x, k)⟩`.
pub fn u_value(aux: &GameSpec, q: &SimplexVector) -> Result<f64> {
    q.check_len(aux.dim)?;
    Ok(zero_sum_value(&aux.scalarize(&Point::new(q.weights().to_vec()))?)?.value)
}

/// `(p, u(p, 1 − p))` on `points` equally spaced values of `p`.
pub fn u_grid(aux: &GameSpec, points: usize) -> Result<Vec<(f64, f64)>> {
    if aux.dim != 2 {
        return Err(Error::ConcavifyDimension(aux.dim));
    }
    if points < 3 {
        return Err(Error::Invalid("need at least three grid points".into()));
    }
    (0..points)
        .map(|k| {
            let p = k as f64 / (points - 1) as f64;
            Ok((p, u_value(aux, &SimplexVector::new(vec![p, 1.0 - p])?)?))
        })
        .collect()
}

/// Upper concave envelope of samples of `u` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavU {
    /// Hull vertices in increasing `p`.
    pub hull: Vec<(f64, f64)>,
}

pub fn concavify(samples: &[(f64, f64)]) -> Result<CavU> {
    if samples.len() < 3 {
        return Err(Error::Invalid("need at least three samples".into()));
    }
    let mut pts = samples.to_vec();
    if pts.iter().any(|(p, u)| !p.is_finite() || !u.is_finite()) {
        return Err(Error::Invalid("samples must be finite".into()));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(CavU { hull })
}

impl CavU {
    fn segment(&self, p: f64) -> Result<usize> {
        let (lo, hi) = (self.hull[0].0, self.hull[self.hull.len() - 1].0);
        if !(lo - 1e-12..=hi + 1e-12).contains(&p) {
            return Err(Error::Invalid(format!("p = {p} outside [{lo}, {hi}]")));
        }
        if self.hull.len() == 1 {
            return Ok(0);
        }
        let k = self.hull.iter().position(|h| h.0 >= p).unwrap_or(self.hull.len() - 1);
        Ok(k.saturating_sub(1).min(self.hull.len() - 2))
    }

    /// `(slope, intercept)` of the hull segment active at `p`; at a kink the
    /// segment to the left.
    pub fn line(&self, p: f64) -> Result<(f64, f64)> {
        let k = self.segment(p)?;
        if self.hull.len() == 1 {
            return Ok((0.0, self.hull[0].1));
        }
        let (a, b) = (self.hull[k], self.hull[k + 1]);
        let m = (b.1 - a.1) / (b.0 - a.0);
        Ok((m, a.1 - m * a.0))
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        let (m, c) = self.line(p)?;
        Ok(c + m * p)
    }
}

/// `a_p = (c + m, c)` from the active segment, so that
/// `⟨a_p, (q, 1 − q)⟩ = c + m q`.
pub fn supporting_vector(cav: &CavU, p: f64) -> Result<Point> {
    let (m, c) = cav.line(p)?;
    Ok(Point::new(vec![c + m, c]))
}
