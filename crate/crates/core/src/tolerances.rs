use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the representation and torsion pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum entrywise deviation of a relator image from the identity.
    pub relation: f64,
    /// Relative modulus below which Laurent coefficients are dropped.
    pub cleanup: f64,
    /// Allowed relative disagreement between the formula and limit routes.
    pub consistency: f64,
    /// Roots of the Riley polynomial closer than this (in `u`) are merged
    /// into one multiple root.
    pub multiplicity: f64,
    /// Roots closer than this (in `u`, complex pairs included) raise the
    /// near-multiple flag.
    pub near_multiple: f64,
    /// Step in `θ` for central finite differences.
    pub derivative_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            relation: 1e-9,
            cleanup: 1e-12,
            consistency: 1e-6,
            multiplicity: 1e-5,
            near_multiple: 0.1,
            derivative_step: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn is_valid(&self) -> bool {
        [self.relation, self.cleanup, self.consistency, self.multiplicity, self.near_multiple, self.derivative_step]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}
