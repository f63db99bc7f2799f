//! Radial grids and the complex field types living on them.
//!
//! A `RadialField` stores samples of a radial function u(x) = u(|x|) on the
//! uniform grid r_j = j·dr, j = 0..n−1, on the ball of radius r_max = n·dr.
//! All L^p integrals carry the 3D radial measure 4π r² dr; grid functions
//! are extended by zero at r = r_max, so node 0 and the missing endpoint
//! both drop out of every weighted sum.
//!
//! A `SpectralField` stores complex samples on the conjugate frequency grid
//! ρ_k = k·dρ with dρ = 1/(2 r_max), ρ_max = 1/(2 dr). That pairing makes
//! the sine transform of r·u an exact discrete involution.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform radial sample grid for the ball of radius `r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    dr: f64,
}

impl RadialGrid {
    /// Node j sits at r_j = j·dr with dr = r_max/n; requires r_max > 0 and n ≥ 16.
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::config(format!("r_max must be positive, got {r_max}")));
        }
        if n < 16 {
            return Err(Error::config(format!("grid needs at least 16 nodes, got {n}")));
        }
        Ok(RadialGrid { r_max, n, dr: r_max / n as f64 })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn r(&self, j: usize) -> f64 {
        j as f64 * self.dr
    }

    /// Spacing of the conjugate frequency grid, dρ = 1/(2 r_max).
    pub fn drho(&self) -> f64 {
        1.0 / (2.0 * self.r_max)
    }

    /// Frequency bound of the conjugate grid, ρ_max = 1/(2 dr).
    pub fn rho_max(&self) -> f64 {
        1.0 / (2.0 * self.dr)
    }

    pub fn rho(&self, k: usize) -> f64 {
        k as f64 * self.drho()
    }
}

/// Complex radial profile u(r_j) on a `RadialGrid`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub grid: RadialGrid,
    pub values: Vec<Complex64>,
}

/// Complex samples F(ρ_k) on the conjugate frequency grid of a `RadialGrid`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub rho_max: f64,
    pub drho: f64,
    pub values: Vec<Complex64>,
}

/// Even extrapolation of a smooth radial profile to r = 0 from the first
/// four interior nodes. Exact through the r⁶ Taylor term.
pub fn extrapolate_origin(values: &[Complex64]) -> Complex64 {
    debug_assert!(values.len() >= 5);
    (56.0 * values[1] - 28.0 * values[2] + 8.0 * values[3] - values[4]) / 35.0
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::config(format!(
                "field length {} does not match grid n = {}",
                values.len(),
                grid.n()
            )));
        }
        let field = RadialField { grid, values };
        field.check_finite()?;
        Ok(field)
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        RadialField { grid, values: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn check_finite(&self) -> Result<()> {
        for (j, v) in self.values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::config(format!("non-finite sample at node {j}: {v}")));
            }
        }
        Ok(())
    }

    /// Sample a real profile r ↦ g(r) on the grid of `self` and multiply pointwise.
    pub fn mul_radial_profile(&self, profile: impl Fn(f64) -> f64) -> RadialField {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| v * profile(self.grid.r(j)))
            .collect();
        RadialField { grid: self.grid, values }
    }

    pub fn add(&self, other: &RadialField) -> Result<RadialField> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(RadialField { grid: self.grid, values })
    }

    pub fn sub(&self, other: &RadialField) -> Result<RadialField> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(RadialField { grid: self.grid, values })
    }

    pub fn scale(&self, c: Complex64) -> RadialField {
        RadialField { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn require_same_grid(&self, other: &RadialField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::config(format!(
                "grid mismatch: (r_max={}, n={}) vs (r_max={}, n={})",
                self.grid.r_max(),
                self.grid.n(),
                other.grid.r_max(),
                other.grid.n()
            )));
        }
        Ok(())
    }

    /// Discrete L²(4π r² dr) norm; exactly the Plancherel partner of the
    /// sine-spectrum l² sum.
    pub fn l2_norm(&self) -> f64 {
        let dr = self.grid.dr();
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let r = self.grid.r(j);
                v.norm_sqr() * r * r
            })
            .sum();
        (4.0 * std::f64::consts::PI * dr * sum).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Relative L² distance ‖self − other‖ / ‖other‖ (absolute when `other` vanishes).
    pub fn rel_l2_error(&self, other: &RadialField) -> Result<f64> {
        let diff = self.sub(other)?;
        let denom = other.l2_norm();
        let num = diff.l2_norm();
        Ok(if denom > 0.0 { num / denom } else { num })
    }
}

impl SpectralField {
    pub fn for_grid(grid: &RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::config(format!(
                "spectral field length {} does not match grid n = {}",
                values.len(),
                grid.n()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::config(format!("non-finite spectral sample at node {k}: {v}")));
            }
        }
        Ok(SpectralField { rho_max: grid.rho_max(), drho: grid.drho(), values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn rho(&self, k: usize) -> f64 {
        k as f64 * self.drho
    }

    /// The radial grid this spectrum is conjugate to.
    pub fn conjugate_grid(&self) -> Result<RadialGrid> {
        let r_max = 1.0 / (2.0 * self.drho);
        RadialGrid::new(r_max, self.values.len())
    }

    /// Discrete L²(4π ρ² dρ) norm.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let rho = self.rho(k);
                v.norm_sqr() * rho * rho
            })
            .sum();
        (4.0 * std::f64::consts::PI * self.drho * sum).sqrt()
    }
}
