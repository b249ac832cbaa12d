//! Numeric tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Tolerances with their defaults. One instance is threaded through the
/// numerical routines so runs are reproducible from a single record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Primal feasibility inside the simplex solver.
    pub lp_feasibility: f64,
    /// Reduced-cost threshold inside the simplex solver.
    pub lp_optimality: f64,
    /// Comparisons reported to callers (values, certificates).
    pub report: f64,
    /// Sum-to-one tolerance for probability vectors.
    pub simplex: f64,
    /// Stopping tolerance of Dykstra's alternating projections.
    pub projection: f64,
    pub projection_max_sweeps: usize,
    /// Two flags closer than this (sup norm) are treated as equal.
    pub flag_compare: f64,
    /// Flags whose l1 distance to the feasible set is below this are repaired.
    pub flag_repair: f64,
    /// Unit-norm tolerance for direction vectors.
    pub unit_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp_feasibility: 1e-9,
            lp_optimality: 1e-9,
            report: 1e-7,
            simplex: 1e-9,
            projection: 1e-8,
            projection_max_sweeps: 10_000,
            flag_compare: 1e-7,
            flag_repair: 1e-6,
            unit_norm: 1e-9,
        }
    }
}
