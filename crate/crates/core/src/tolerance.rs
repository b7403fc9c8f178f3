//! Floating-point budgets shared across the crate.

use serde::{Deserialize, Serialize};

/// Maximum `|det V - 1|` accepted when constructing a connection matrix.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Agreement budget between closed forms and the numerical oracles.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// `|f/2|` may exceed 1 by this much before a dispersion sample is rejected.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Relative width below which a gap between two bands is treated as a touch.
pub const EDGE_REL_TOLERANCE: f64 = 1e-12;

/// Below this `|k0 a|` (or `|κ a|`) the propagator uses its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub det: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            det: DET_TOLERANCE,
            oracle: ORACLE_TOLERANCE,
        }
    }
}
