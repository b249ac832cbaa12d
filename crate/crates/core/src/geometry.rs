//! Points, probability vectors, target sets and Euclidean projections.
//!
//! Target sets come in four shapes: half-spaces `{w : <w,a> <= b}`, lower
//! orthants `{w : w <= a}` (componentwise), polytopes given by finitely many
//! half-spaces, and convex sets known through sampled support-function values.
//! Projections onto half-spaces and orthants are closed form; polytopes are
//! handled with Dykstra's alternating projections.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// A payoff vector in `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[k] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::new(self.coords.iter().map(|a| a * s).collect())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Point) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += s * b;
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    /// Componentwise `self <= other + tol`.
    pub fn weakly_below(&self, other: &Point, tol: f64) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| *a <= b + tol)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.dim() });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

/// A probability vector over a finite action set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexVector {
    weights: Vec<f64>,
}

impl SimplexVector {
    /// Validates nonnegativity and the unit sum (tolerance 1e-9).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(weights, Tolerances::default().simplex)
    }

    pub fn with_tolerance(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("empty probability vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < -tol) {
            return Err(Error::Invalid(format!("negative or non-finite weight in {weights:?}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::Invalid(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { weights: weights.into_iter().map(|w| w.max(0.0)).collect() })
    }

    /// Clips negatives and rescales; used on solver output that is feasible up to
    /// round-off.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let clipped: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::Invalid("cannot normalize a zero vector".into()));
        }
        Ok(Self { weights: clipped.into_iter().map(|w| w / sum).collect() })
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn pure(n: usize, i: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[i] = 1.0;
        Self { weights }
    }

    /// `lambda * a + (1 - lambda) * b`
    pub fn mix(lambda: f64, a: &SimplexVector, b: &SimplexVector) -> Self {
        let weights = a
            .weights
            .iter()
            .zip(&b.weights)
            .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
            .collect();
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn l1_distance(&self, other: &SimplexVector) -> f64 {
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn l2_distance(&self, other: &SimplexVector) -> f64 {
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.len() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for SimplexVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SimplexVector::new(v)
    }
}

impl From<SimplexVector> for Vec<f64> {
    fn from(v: SimplexVector) -> Vec<f64> {
        v.weights
    }
}

/// All points of the simplex over `dim` coordinates whose entries are multiples
/// of `1/denom`, in lexicographic order of the numerators (largest first
/// coordinate first).
pub fn simplex_grid(dim: usize, denom: usize) -> Vec<SimplexVector> {
    fn rec(dim: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if dim == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(dim - 1, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    assert!(dim >= 1 && denom >= 1);
    let mut numerators = Vec::new();
    rec(dim, denom, &mut Vec::new(), &mut numerators);
    numerators
        .into_iter()
        .map(|ks| SimplexVector {
            weights: ks.into_iter().map(|k| k as f64 / denom as f64).collect(),
        })
        .collect()
}

/// Closed convex target set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TargetSet {
    /// `{w : <w, a> <= b}`
    #[serde(rename = "halfspace")]
    HalfSpace { a: Point, b: f64 },
    /// `{w : w <= a}` componentwise.
    Orthant { a: Point },
    /// `{w : <w, A_l> <= b_l for every row l}`
    Polytope {
        #[serde(rename = "A")]
        rows: Vec<Point>,
        #[serde(rename = "b")]
        offsets: Vec<f64>,
    },
    /// `{w : <w, s> <= phi(s) for every sampled unit direction s}`
    #[serde(rename = "support")]
    SupportSampled { directions: Vec<Point>, values: Vec<f64> },
}

impl TargetSet {
    pub fn halfspace(a: Vec<f64>, b: f64) -> Result<Self> {
        let t = TargetSet::HalfSpace { a: Point::new(a), b };
        t.validate()?;
        Ok(t)
    }

    pub fn orthant(a: Vec<f64>) -> Self {
        TargetSet::Orthant { a: Point::new(a) }
    }

    pub fn polytope(rows: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        let t = TargetSet::Polytope { rows: rows.into_iter().map(Point::new).collect(), offsets };
        t.validate()?;
        Ok(t)
    }

    /// Axis-aligned box `[lo, hi]` as a polytope with `2 d` rows.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Self {
        let d = lo.len();
        let mut rows = Vec::with_capacity(2 * d);
        let mut offsets = Vec::with_capacity(2 * d);
        for k in 0..d {
            rows.push(Point::basis(d, k));
            offsets.push(hi[k]);
            rows.push(Point::basis(d, k).scale(-1.0));
            offsets.push(-lo[k]);
        }
        TargetSet::Polytope { rows, offsets }
    }

    pub fn dim(&self) -> usize {
        match self {
            TargetSet::HalfSpace { a, .. } | TargetSet::Orthant { a } => a.dim(),
            TargetSet::Polytope { rows, .. } => rows.first().map_or(0, Point::dim),
            TargetSet::SupportSampled { directions, .. } => directions.first().map_or(0, Point::dim),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = Tolerances::default();
        match self {
            TargetSet::HalfSpace { a, b } => {
                if a.norm() == 0.0 || !a.is_finite() || !b.is_finite() {
                    return Err(Error::Invalid("half-space direction must be nonzero and finite".into()));
                }
            }
            TargetSet::Orthant { a } => {
                if a.dim() == 0 || !a.is_finite() {
                    return Err(Error::Invalid("orthant corner must be finite and nonempty".into()));
                }
            }
            TargetSet::Polytope { rows, offsets } => {
                if rows.is_empty() || rows.len() != offsets.len() {
                    return Err(Error::Invalid("polytope needs at least one row and one offset per row".into()));
                }
                let d = rows[0].dim();
                for r in rows {
                    r.check_dim(d)?;
                    if r.norm() == 0.0 {
                        return Err(Error::Invalid("polytope rows must be nonzero".into()));
                    }
                }
            }
            TargetSet::SupportSampled { directions, values } => {
                if directions.is_empty() || directions.len() != values.len() {
                    return Err(Error::Invalid("support data needs one value per direction".into()));
                }
                let d = directions[0].dim();
                for s in directions {
                    s.check_dim(d)?;
                    if (s.norm() - 1.0).abs() > tol.unit_norm {
                        return Err(Error::Invalid("support directions must have unit norm".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Constraint rows `(a_l, b_l)` describing the set, when it is polyhedral.
    /// Orthants expand to the `d` coordinate constraints.
    pub fn constraint_rows(&self) -> (Vec<Point>, Vec<f64>) {
        match self {
            TargetSet::HalfSpace { a, b } => (vec![a.clone()], vec![*b]),
            TargetSet::Orthant { a } => {
                let d = a.dim();
                ((0..d).map(|k| Point::basis(d, k)).collect(), a.coords.clone())
            }
            TargetSet::Polytope { rows, offsets } => (rows.clone(), offsets.clone()),
            TargetSet::SupportSampled { directions, values } => (directions.clone(), values.clone()),
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        let (rows, offsets) = self.constraint_rows();
        rows.iter().zip(&offsets).all(|(a, b)| a.dot(p) <= b + tol)
    }
}

fn check_same(p: &Point, a: &Point) -> Result<()> {
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: p.dim() });
    }
    Ok(())
}

/// Euclidean projection onto the orthant `{w : w <= a}`.
pub fn project_orthant(p: &Point, a: &Point) -> Result<Point> {
    check_same(p, a)?;
    Ok(Point::new(p.coords.iter().zip(&a.coords).map(|(x, c)| x.min(*c)).collect()))
}

/// Distance to the orthant `{w : w <= a}`: `sqrt(sum_k max(p_k - a_k, 0)^2)`.
pub fn dist_orthant(p: &Point, a: &Point) -> Result<f64> {
    check_same(p, a)?;
    Ok(p
        .coords
        .iter()
        .zip(&a.coords)
        .map(|(x, c)| (x - c).max(0.0).powi(2))
        .sum::<f64>()
        .sqrt())
}

fn project_halfspace(p: &Point, a: &Point, b: f64) -> Point {
    let excess = a.dot(p) - b;
    if excess <= 0.0 {
        return p.clone();
    }
    let mut q = p.clone();
    q.axpy(-excess / a.dot(a), a);
    q
}

/// Dykstra's alternating projections onto an intersection of half-spaces.
fn dykstra(p: &Point, rows: &[Point], offsets: &[f64], tol: &Tolerances) -> Result<Point> {
    let mut x = p.clone();
    let mut increments = vec![Point::zeros(p.dim()); rows.len()];
    let violation =
        |x: &Point| rows.iter().zip(offsets).map(|(a, b)| (a.dot(x) - b) / a.norm()).fold(0.0f64, f64::max);
    if violation(&x) <= 0.0 {
        return Ok(x);
    }
    for _sweep in 0..tol.projection_max_sweeps {
        let start = x.clone();
        let mut moved = 0.0;
        for (k, (a, b)) in rows.iter().zip(offsets).enumerate() {
            let shifted = x.add(&increments[k]);
            let projected = project_halfspace(&shifted, a, *b);
            let new_increment = shifted.sub(&projected);
            moved += new_increment.sub(&increments[k]).norm();
            increments[k] = new_increment;
            x = projected;
        }
        if x.distance(&start) <= tol.projection * 1e-2 && moved <= tol.projection && violation(&x) <= tol.projection
        {
            return Ok(x);
        }
    }
    let residual = violation(&x);
    Err(Error::ProjectionNotConverged { best: x, residual, iterations: tol.projection_max_sweeps })
}

/// Euclidean projection of `p` onto `c`.
pub fn project_target(p: &Point, c: &TargetSet) -> Result<Point> {
    project_target_with(p, c, &Tolerances::default())
}

pub fn project_target_with(p: &Point, c: &TargetSet, tol: &Tolerances) -> Result<Point> {
    if p.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: p.dim() });
    }
    match c {
        TargetSet::HalfSpace { a, b } => Ok(project_halfspace(p, a, *b)),
        TargetSet::Orthant { a } => project_orthant(p, a),
        TargetSet::Polytope { rows, offsets }
        | TargetSet::SupportSampled { directions: rows, values: offsets } => dykstra(p, rows, offsets, tol),
    }
}

/// Euclidean distance from `p` to `c`.
pub fn dist_target(p: &Point, c: &TargetSet) -> Result<f64> {
    match c {
        TargetSet::Orthant { a } => dist_orthant(p, a),
        _ => Ok(p.distance(&project_target(p, c)?)),
    }
}

/// Support value `max_{c in points} <c, s>` of a point cloud.
pub fn support_value(points: &[Point], s: &Point) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Invalid("support value of an empty point cloud".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for c in points {
        check_same(c, s)?;
        best = best.max(c.dot(s));
    }
    Ok(best)
}

/// Minkowski combination `{gamma * p + q : p in a, q in b}` of two clouds.
pub fn minkowski_combination(gamma: f64, a: &[Point], b: &[Point]) -> Vec<Point> {
    a.iter().flat_map(|p| b.iter().map(move |q| p.scale(gamma).add(q))).collect()
}

/// Finite set of unit directions used to sample support functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    pub directions: Vec<Point>,
}

impl DirectionGrid {
    /// `count` equally spaced angles on the unit circle, starting at angle 0.
    pub fn circle(count: usize) -> Self {
        let directions = (0..count)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                Point::new(vec![t.cos(), t.sin()])
            })
            .collect();
        Self { directions }
    }

    /// The 26 normalized nonzero vectors of `{-1, 0, 1}^3`.
    pub fn cube26() -> Self {
        let mut directions = Vec::with_capacity(26);
        for x in -1i32..=1 {
            for y in -1i32..=1 {
                for z in -1i32..=1 {
                    if (x, y, z) == (0, 0, 0) {
                        continue;
                    }
                    let p = Point::new(vec![x as f64, y as f64, z as f64]);
                    directions.push(p.scale(1.0 / p.norm()));
                }
            }
        }
        Self { directions }
    }

    /// Product-angle grid on the sphere: both poles plus `rings` latitude circles
    /// of `per_ring` longitudes each.
    pub fn spherical(rings: usize, per_ring: usize) -> Self {
        let mut directions = vec![Point::new(vec![0.0, 0.0, 1.0]), Point::new(vec![0.0, 0.0, -1.0])];
        for r in 1..=rings {
            let theta = std::f64::consts::PI * r as f64 / (rings + 1) as f64;
            for k in 0..per_ring {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / per_ring as f64;
                directions.push(Point::new(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]));
            }
        }
        Self { directions }
    }

    /// Default grid for the dimension: 64 directions in the plane, 26 in space.
    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            1 => Ok(Self { directions: vec![Point::new(vec![1.0]), Point::new(vec![-1.0])] }),
            2 => Ok(Self::circle(64)),
            3 => Ok(Self::cube26()),
            d => Err(Error::Invalid(format!("no default direction grid in dimension {d}"))),
        }
    }

    pub fn count(&self) -> usize {
        self.directions.len()
    }
}

/// Upper convex hull helper used by several 2-D routines: convex hull of a
/// planar cloud in counter-clockwise order (Andrew's monotone chain).
pub fn convex_hull_2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p.coords[0], p.coords[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().map(|(x, y)| Point::new(vec![x, y])).collect();
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(x, y)| Point::new(vec![x, y])).collect()
}

/// Euclidean distance from `p` to the convex polygon with counter-clockwise
/// vertices `hull` (0 when inside).
pub fn dist_to_polygon(p: &Point, hull: &[Point]) -> f64 {
    let seg_dist = |a: &Point, b: &Point| {
        let ab = b.sub(a);
        let len2 = ab.dot(&ab);
        let t = if len2 == 0.0 { 0.0 } else { (p.sub(a).dot(&ab) / len2).clamp(0.0, 1.0) };
        let mut q = a.clone();
        q.axpy(t, &ab);
        p.distance(&q)
    };
    match hull.len() {
        0 => f64::INFINITY,
        1 => p.distance(&hull[0]),
        2 => seg_dist(&hull[0], &hull[1]),
        n => {
            let inside = (0..n).all(|k| {
                let a = &hull[k];
                let b = &hull[(k + 1) % n];
                (b.coords[0] - a.coords[0]) * (p.coords[1] - a.coords[1])
                    - (b.coords[1] - a.coords[1]) * (p.coords[0] - a.coords[0])
                    >= 0.0
            });
            if inside {
                0.0
            } else {
                (0..n).map(|k| seg_dist(&hull[k], &hull[(k + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}
