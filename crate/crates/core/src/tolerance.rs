use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by every module. All are relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Root residual bound for `Polynomial::roots`.
    pub root: f64,
    /// Pairing distance for cancelling common roots.
    pub gcd: f64,
    /// Equality and strict-inequality margin for realizability conditions.
    pub cond: f64,
    /// Coefficientwise mismatch allowed between a netlist and its target impedance.
    pub verify: f64,
    /// When set, candidates that miss the conditions are snapped to the nearest
    /// realizable impedance by least squares and accepted if within `verify`.
    pub project: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-9,
            gcd: 1e-7,
            cond: 1e-8,
            verify: 1e-6,
            project: false,
        }
    }
}

impl Tolerances {
    pub fn with_cond(mut self, cond: f64) -> Self {
        self.cond = cond;
        self
    }

    pub fn with_verify(mut self, verify: f64) -> Self {
        self.verify = verify;
        self
    }

    pub fn with_projection(mut self, on: bool) -> Self {
        self.project = on;
        self
    }
}
