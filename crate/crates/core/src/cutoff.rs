//! The smooth cutoff family χ_{≤a} and its derived bands.
//!
//! χ_{≤a}(x) = 1 for |x| ≤ a and 0 for |x| ≥ (11/10)a, with a fixed smooth
//! monotone ramp on the transition. Derived notation:
//! χ_{≥a} = 1 − χ_{≤a}, χ_{a≤·≤b} = χ_{≤b} − χ_{≤a}, and the dyadic band
//! χ_a = χ_{≤2a} − χ_{≤a}. Plateau values are exactly 1.0 / 0.0, so the
//! dyadic bands telescope without roundoff.
//!
//! The ramp is the degree-15 smoothstep (C⁷ at the plateau junctions,
//! derivative ∝ t⁷(1−t)⁷, symmetric under t ↦ 1−t). Its spectral tails decay
//! like ω^{−9} with small constants, which keeps the spatial leakage of the
//! dyadic projectors several orders of magnitude below an e^{−1/t} mollifier
//! ramp at the band scales the experiments actually probe; the banded
//! remainder decay is unmeasurable otherwise.

use crate::error::{Error, Result};

/// Support factor of the transition: χ_{≤a} vanishes from (11/10)·a on.
pub const TRANSITION_FACTOR: f64 = 1.1;

/// Degree-15 smoothstep: 0 for t ≤ 0, 1 for t ≥ 1, C⁷ monotone ramp between,
/// with ψ(t) + ψ(1−t) = 1.
fn ramp(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let t8 = t.powi(8);
    t8 * (6435.0
        + t * (-40040.0
            + t * (108108.0
                + t * (-163800.0
                    + t * (150150.0 + t * (-83160.0 + t * (25740.0 + t * -3432.0)))))))
}

/// χ_{≤a}(x): 1 on |x| ≤ a, 0 on |x| ≥ (11/10)a, smooth monotone in between.
pub fn chi_leq(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0, "cutoff threshold must be positive");
    let x = x.abs();
    if x <= a {
        1.0
    } else if x >= TRANSITION_FACTOR * a {
        0.0
    } else {
        // map [a, 1.1a] onto ramp argument 1 → 0
        ramp((TRANSITION_FACTOR * a - x) / (0.1 * a))
    }
}

/// χ_{≥a} = 1 − χ_{≤a}.
pub fn chi_geq(a: f64, x: f64) -> f64 {
    1.0 - chi_leq(a, x)
}

/// Dyadic band χ_a = χ_{≤2a} − χ_{≤a}.
pub fn chi_band(a: f64, x: f64) -> f64 {
    chi_leq(2.0 * a, x) - chi_leq(a, x)
}

/// χ_{a≤·≤b} = χ_{≤b} − χ_{≤a}.
pub fn chi_between(a: f64, b: f64, x: f64) -> f64 {
    chi_leq(b, x) - chi_leq(a, x)
}

/// A cutoff at a validated threshold, for call sites that hold one around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    a: f64,
}

impl CutoffProfile {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!("cutoff threshold must be positive, got {a}")));
        }
        Ok(CutoffProfile { a })
    }

    pub fn threshold(&self) -> f64 {
        self.a
    }

    pub fn leq(&self, x: f64) -> f64 {
        chi_leq(self.a, x)
    }

    pub fn geq(&self, x: f64) -> f64 {
        chi_geq(self.a, x)
    }

    pub fn band(&self, x: f64) -> f64 {
        chi_band(self.a, x)
    }
}
