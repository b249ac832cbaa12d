#![allow(dead_code)]

use approachkit::geometry::{Point, SimplexVector, TargetSet};
use approachkit::GameSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn sv(w: &[f64]) -> SimplexVector {
    SimplexVector::new(w.to_vec()).unwrap()
}

pub fn pt(w: &[f64]) -> Point {
    Point::new(w.to_vec())
}

pub fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> SimplexVector {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    SimplexVector::normalized(w).unwrap()
}

/// Signal law where each action pair emits one signal, or a random
/// distribution when `stochastic` is set.
pub fn random_law(rng: &mut ChaCha8Rng, ni: usize, nj: usize, ns: usize, stochastic: bool) -> Vec<Vec<Vec<f64>>> {
    (0..ni)
        .map(|_| {
            (0..nj)
                .map(|_| {
                    if stochastic {
                        random_simplex(rng, ns).weights().to_vec()
                    } else {
                        let mut e = vec![0.0; ns];
                        e[rng.random_range(0..ns)] = 1.0;
                        e
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_payoffs(rng: &mut ChaCha8Rng, ni: usize, nj: usize, d: usize) -> Vec<Vec<Vec<f64>>> {
    (0..ni).map(|_| (0..nj).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()).collect()
}

/// Game with `I, J, d, S` drawn from `1..=max`.
pub fn random_game(rng: &mut ChaCha8Rng, max: usize) -> GameSpec {
    let (ni, nj, d, ns) = (rng.random_range(1..=max), rng.random_range(1..=max), rng.random_range(1..=max), rng.random_range(1..=max));
    let stochastic = rng.random_bool(0.5);
    let payoffs = random_payoffs(rng, ni, nj, d);
    let law = random_law(rng, ni, nj, ns, stochastic);
    GameSpec::new(payoffs, law).unwrap()
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let (u, v): (f64, f64) = (1.0 - rng.random::<f64>(), rng.random());
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Point {
    loop {
        let p = Point::new((0..d).map(|_| gaussian(rng)).collect());
        let n = p.norm();
        if n > 1e-3 {
            return p.scale(1.0 / n);
        }
    }
}

/// Bounded polytope containing the origin: `rows` random unit rows plus the
/// box `[-3, 3]^d`.
pub fn random_polytope(rng: &mut ChaCha8Rng, d: usize, rows: usize) -> TargetSet {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..rows {
        a.push(random_direction(rng, d).coords);
        b.push(rng.random_range(0.1..1.0));
    }
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        a.push(e.clone());
        b.push(3.0);
        e[k] = -1.0;
        a.push(e);
        b.push(3.0);
    }
    TargetSet::polytope(a, b).unwrap()
}
