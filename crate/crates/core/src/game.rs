//! Finite two-player games with vector payoffs and a signaling structure.
//!
//! A [`GameSpec`] holds the payoff tensor `r[i][j] ∈ R^d` and the signal law
//! `H[i][j] ∈ Δ(S)`. Nature's mixed action `y` induces a [`Flag`], the vector
//! of signal distributions `(Σ_j y_j H[i][j])_i`, which is all the player can
//! ever learn about `y`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Point, SimplexVector};

const DIST_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub player_actions: Vec<String>,
    pub nature_actions: Vec<String>,
    pub dim: usize,
    pub signals: Vec<String>,
    /// `payoffs[i][j]` is the payoff vector of the action pair `(i, j)`.
    pub payoffs: Vec<Vec<Vec<f64>>>,
    /// `signal_law[i][j]` is the distribution of the signal after `(i, j)`.
    pub signal_law: Vec<Vec<Vec<f64>>>,
}

/// Which signal law to use when loading a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monitoring {
    /// Signals reveal Nature's action.
    Full,
    /// A single uninformative signal.
    Dark,
    /// Keep the signal law found in the file.
    Spec,
}

impl std::str::FromStr for Monitoring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "dark" => Ok(Self::Dark),
            "spec" => Ok(Self::Spec),
            other => Err(Error::Invalid(format!("unknown monitoring '{other}' (full|dark|spec)"))),
        }
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

impl GameSpec {
    /// Builds and validates a game with generated labels.
    pub fn new(payoffs: Vec<Vec<Vec<f64>>>, signal_law: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let i = payoffs.len();
        let j = payoffs.first().map_or(0, Vec::len);
        let d = payoffs.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let s = signal_law.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let spec = Self {
            player_actions: labels("i", i),
            nature_actions: labels("j", j),
            dim: d,
            signals: labels("s", s),
            payoffs,
            signal_law,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A game whose signal reveals Nature's action.
    pub fn full_monitoring(payoffs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let i = payoffs.len();
        let j = payoffs.first().map_or(0, Vec::len);
        Self::new(payoffs, full_law(i, j))
    }

    /// A game with a single uninformative signal.
    pub fn dark(payoffs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let i = payoffs.len();
        let j = payoffs.first().map_or(0, Vec::len);
        Self::new(payoffs, vec![vec![vec![1.0]; j]; i])
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn num_player_actions(&self) -> usize {
        self.payoffs.len()
    }

    pub fn num_nature_actions(&self) -> usize {
        self.nature_actions.len()
    }

    pub fn num_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn validate(&self) -> Result<()> {
        let (ni, nj, d, ns) = (self.player_actions.len(), self.nature_actions.len(), self.dim, self.signals.len());
        if ni == 0 || nj == 0 || ns == 0 || d == 0 {
            return Err(Error::Invalid("games need at least one action, signal and payoff coordinate".into()));
        }
        if self.payoffs.len() != ni || self.signal_law.len() != ni {
            return Err(Error::Invalid(format!("expected {ni} payoff and signal rows")));
        }
        for (i, (prow, hrow)) in self.payoffs.iter().zip(&self.signal_law).enumerate() {
            if prow.len() != nj || hrow.len() != nj {
                return Err(Error::Invalid(format!("row {i}: expected {nj} nature actions")));
            }
            for (j, (r, h)) in prow.iter().zip(hrow).enumerate() {
                if r.len() != d {
                    return Err(Error::Invalid(format!("payoff ({i},{j}) has length {} instead of {d}", r.len())));
                }
                if r.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Invalid(format!("payoff ({i},{j}) is not finite")));
                }
                if h.len() != ns {
                    return Err(Error::Invalid(format!("signal law ({i},{j}) has length {} instead of {ns}", h.len())));
                }
                let sum: f64 = h.iter().sum();
                if h.iter().any(|p| !p.is_finite() || *p < -DIST_TOL) || (sum - 1.0).abs() > DIST_TOL {
                    return Err(Error::Invalid(format!("signal law ({i},{j}) is not a distribution")));
                }
            }
        }
        Ok(())
    }

    pub fn payoff(&self, i: usize, j: usize) -> Point {
        Point::new(self.payoffs[i][j].clone())
    }

    /// `r(x, y) = Σ x_i y_j r[i][j]`.
    pub fn payoff_mixed(&self, x: &SimplexVector, y: &SimplexVector) -> Result<Point> {
        x.check_len(self.num_player_actions())?;
        y.check_len(self.num_nature_actions())?;
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.weights().iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.weights().iter().enumerate() {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                for (o, r) in out.iter_mut().zip(&self.payoffs[i][j]) {
                    *o += w * r;
                }
            }
        }
        Ok(Point::new(out))
    }

    /// `r(x, δ_j)`.
    pub fn payoff_against(&self, x: &SimplexVector, j: usize) -> Point {
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.weights().iter().enumerate() {
            for (o, r) in out.iter_mut().zip(&self.payoffs[i][j]) {
                *o += xi * r;
            }
        }
        Point::new(out)
    }

    /// The flag `H̄(y)`.
    pub fn maximal_information(&self, y: &SimplexVector) -> Result<Flag> {
        y.check_len(self.num_nature_actions())?;
        let ns = self.num_signals();
        let rows = self
            .signal_law
            .iter()
            .map(|hrow| {
                let mut row = vec![0.0; ns];
                for (h, &yj) in hrow.iter().zip(y.weights()) {
                    for (o, p) in row.iter_mut().zip(h) {
                        *o += yj * p;
                    }
                }
                row
            })
            .collect();
        Ok(Flag { rows })
    }

    /// `M = max ||r[i][j]||₂`.
    pub fn payoff_bound(&self) -> f64 {
        self.payoffs
            .iter()
            .flatten()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// The scalar game `⟨r[i][j], a⟩`.
    pub fn scalarize(&self, a: &Point) -> Result<Vec<Vec<f64>>> {
        a.check_dim(self.dim)?;
        Ok(self
            .payoffs
            .iter()
            .map(|row| row.iter().map(|r| r.iter().zip(&a.coords).map(|(p, q)| p * q).sum()).collect())
            .collect())
    }

    /// The `(I·S) × J` matrix of the linear map `y ↦ H̄(y)`, rows indexed by
    /// `i * S + s`.
    pub fn flag_matrix(&self) -> Vec<Vec<f64>> {
        let ns = self.num_signals();
        let mut out = Vec::with_capacity(self.num_player_actions() * ns);
        for hrow in &self.signal_law {
            for s in 0..ns {
                out.push(hrow.iter().map(|h| h[s]).collect());
            }
        }
        out
    }

    /// Draws `i ~ x`, `j ~ y` and a signal from `H[i][j]`.
    pub fn sample_round<R: Rng + ?Sized>(
        &self,
        x: &SimplexVector,
        y: &SimplexVector,
        rng: &mut R,
    ) -> Result<RoundOutcome> {
        x.check_len(self.num_player_actions())?;
        y.check_len(self.num_nature_actions())?;
        let i = sample_index(x.weights(), rng.random::<f64>());
        let j = sample_index(y.weights(), rng.random::<f64>());
        let signal = sample_index(&self.signal_law[i][j], rng.random::<f64>());
        Ok(RoundOutcome { i, j, signal, pure_payoff: self.payoff(i, j), mixed_payoff: self.payoff_against(x, j) })
    }

    /// Replaces the signal law while keeping payoffs.
    pub fn with_monitoring(&self, monitoring: Monitoring) -> Self {
        let (ni, nj) = (self.num_player_actions(), self.num_nature_actions());
        let mut out = self.clone();
        match monitoring {
            Monitoring::Spec => {}
            Monitoring::Full => {
                out.signals = self.nature_actions.clone();
                out.signal_law = full_law(ni, nj);
            }
            Monitoring::Dark => {
                out.signals = vec!["none".into()];
                out.signal_law = vec![vec![vec![1.0]; nj]; ni];
            }
        }
        out
    }

    pub fn with_signal_law(&self, signals: Vec<String>, signal_law: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let out = Self { signals, signal_law, ..self.clone() };
        out.validate()?;
        Ok(out)
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("game serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn full_law(ni: usize, nj: usize) -> Vec<Vec<Vec<f64>>> {
    (0..ni)
        .map(|_| {
            (0..nj)
                .map(|j| {
                    let mut e = vec![0.0; nj];
                    e[j] = 1.0;
                    e
                })
                .collect()
        })
        .collect()
}

/// Inverse-CDF draw from a probability vector given `u ∈ [0, 1)`.
pub fn sample_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// `H̄(y)`: one signal distribution per player action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Flag {
    pub rows: Vec<Vec<f64>>,
}

impl Flag {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let flag = Self { rows };
        flag.validate()?;
        Ok(flag)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if row.iter().any(|p| !p.is_finite() || *p < -DIST_TOL) || (sum - 1.0).abs() > DIST_TOL {
                return Err(Error::Invalid(format!("flag row {i} is not a distribution")));
            }
        }
        Ok(())
    }

    pub fn num_actions(&self) -> usize {
        self.rows.len()
    }

    pub fn num_signals(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Row-major flattening matching [`GameSpec::flag_matrix`].
    pub fn flatten(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn l1_distance(&self, other: &Flag) -> f64 {
        self.rows.iter().flatten().zip(other.rows.iter().flatten()).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn approx_eq(&self, other: &Flag, tol: f64) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p - q).abs() <= tol)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub i: usize,
    pub j: usize,
    pub signal: usize,
    pub pure_payoff: Point,
    /// `r(x, δ_j)`, the payoff averaged over the player's own randomization.
    pub mixed_payoff: Point,
}

/// Reference games used throughout the examples and tests.
pub mod catalog {
    use super::*;

    /// The 2×2 game with payoffs T: (0,0), (1,−1) and B: (−1,1), (0,0). The
    /// orthant `{ω ⪯ 0}` is approachable under full monitoring and not in the
    /// dark.
    pub fn counter_example(monitoring: Monitoring) -> GameSpec {
        let payoffs = vec![vec![vec![0.0, 0.0], vec![1.0, -1.0]], vec![vec![-1.0, 1.0], vec![0.0, 0.0]]];
        let g = GameSpec {
            player_actions: vec!["T".into(), "B".into()],
            nature_actions: vec!["L".into(), "R".into()],
            dim: 2,
            signals: vec!["none".into()],
            payoffs,
            signal_law: vec![vec![vec![1.0]; 2]; 2],
        };
        g.with_monitoring(monitoring)
    }

    /// The scalar game T: −1, 2 and B: −2, 1 whose polytope target `[−1, 1]`
    /// hides a non-approachable containing half-space after lifting.
    pub fn hidden_halfspace_game(monitoring: Monitoring) -> GameSpec {
        let g = GameSpec {
            player_actions: vec!["T".into(), "B".into()],
            nature_actions: vec!["L".into(), "R".into()],
            dim: 1,
            signals: vec!["none".into()],
            payoffs: vec![vec![vec![-1.0], vec![2.0]], vec![vec![-2.0], vec![1.0]]],
            signal_law: vec![vec![vec![1.0]; 2]; 2],
        };
        g.with_monitoring(monitoring)
    }

    /// Two scalar games played side by side in the dark: coordinate `g` of
    /// the payoff is `games[g][i][j]`. Compatible payoff sets are Cartesian
    /// products, so the game has the upper-right-corner property.
    pub fn dark_product(games: &[Vec<Vec<f64>>]) -> Result<GameSpec> {
        let ni = games[0].len();
        let nj = games[0][0].len();
        // Nature picks one action per coordinate game.
        let profiles: Vec<Vec<usize>> = {
            let mut out = vec![vec![]];
            for _ in games {
                out = out
                    .into_iter()
                    .flat_map(|p: Vec<usize>| {
                        (0..nj).map(move |j| {
                            let mut q = p.clone();
                            q.push(j);
                            q
                        })
                    })
                    .collect();
            }
            out
        };
        let payoffs = (0..ni)
            .map(|i| profiles.iter().map(|p| p.iter().enumerate().map(|(g, &j)| games[g][i][j]).collect()).collect())
            .collect();
        GameSpec::dark(payoffs)
    }
}
