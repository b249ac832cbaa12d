use thiserror::Error;

use crate::game::Flag;
use crate::geometry::{Point, SimplexVector};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("projection did not converge after {iterations} sweeps (residual {residual:.3e})")]
    ProjectionNotConverged {
        best: Point,
        residual: f64,
        iterations: usize,
    },

    #[error("linear program solver failure: {0}")]
    Solver(String),

    #[error("flag outside feasible set (l1 gap {gap:.3e})")]
    FlagOutsideFeasibleSet {
        flag: Flag,
        gap: f64,
        nearest: SimplexVector,
    },

    #[error("step did not reach tolerance: achieved margin {margin:.3e}")]
    StepMarginNotReached { best_x: SimplexVector, margin: f64 },

    #[error("direction must be nonnegative for orthant half-spaces")]
    NegativeDirection,

    #[error("no non-revealing profile")]
    NoNonRevealingProfile,

    #[error("concavification implemented for two states only (got {0})")]
    ConcavifyDimension(usize),

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
