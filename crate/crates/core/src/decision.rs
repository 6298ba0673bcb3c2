use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Exists,
    NotExists,
    Undecided,
}

/// Tolerances for floating witnesses and the grid used by point searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecideOptions {
    /// Bound on `|ŷᵀ F̂ x̂|` for unit-norm points and unit max-entry `F`.
    pub tol_res: f64,
    /// Bound on singular value ratios.
    pub tol_rank: f64,
    /// Points are searched on `{0, ±1, …, ±grid_radius}^t`.
    pub grid_radius: u32,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { tol_res: 1e-8, tol_rank: 1e-9, grid_radius: 3 }
    }
}

impl DecideOptions {
    /// The grid must hold more values than the per-variable degree (at most
    /// 3) of any polynomial searched on it.
    pub fn validate(&self) -> Result<()> {
        if self.grid_radius < 2 {
            return Err(GeometryError::Contract(format!("grid radius {} is below 2", self.grid_radius)));
        }
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if !ok(self.tol_res) || !ok(self.tol_rank) {
            return Err(GeometryError::Contract("tolerances must be positive and finite".into()));
        }
        Ok(())
    }
}
