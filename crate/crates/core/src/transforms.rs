//! Radial 3D Fourier analysis on the sine-conjugate grid.
//!
//! Under the 2π convention the 3D Fourier transform of a radial function is
//!
//!   F(ρ) = (2/ρ) ∫₀^∞ sin(2πrρ) r f(r) dr,
//!
//! i.e. ρ F(ρ) is the 1D sine transform of g = r·f, and that sine transform
//! is its own inverse. On the uniform grid r_j = j·dr with the conjugate
//! frequencies ρ_k = k/(2 r_max), the discrete sine transform (DST-I) makes
//! the whole round trip an exact involution, so Plancherel holds on the grid
//! to roundoff. The deformed transform with weights |ξ|^α, |x|^β reduces the
//! same way:
//!
//!   𝓕f(ρ) = 2 ρ^{α−1} ∫₀^∞ sin(2πrρ) r^{β+1} f(r) dr.
//!
//! Littlewood–Paley projectors multiply the plain sine spectrum by the smooth
//! dyadic cutoffs; Sobolev norms weigh it by ⟨2πρ⟩^s or (2πρ)^s.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::cutoff::{chi_band, chi_between, chi_geq, chi_leq};
use crate::error::{Error, Result};
use crate::field::{extrapolate_origin, RadialField, RadialGrid, SpectralField};

fn plan_forward(len: usize) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    planner.lock().unwrap().plan_fft_forward(len)
}

/// Unscaled DST-I sums S_k = Σ_{j=1}^{n−1} x_j sin(πjk/n), k = 0..n−1,
/// via the odd extension and one complex FFT of length 2n. S_0 = 0.
pub(crate) fn dst_kernel(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for j in 1..n {
        buf[j] = x[j];
        buf[2 * n - j] = -x[j];
    }
    plan_forward(2 * n).process(&mut buf);
    let half_i = Complex64::new(0.0, 0.5);
    (0..n).map(|k| buf[k] * half_i).collect()
}

/// Cosine sums C_j = Σ_{k=1}^{n−1} x_k cos(πjk/n), j = 0..n−1, via the even
/// extension (entries 0 and n taken as zero).
pub(crate) fn cos_kernel(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for k in 1..n {
        buf[k] = x[k];
        buf[2 * n - k] = x[k];
    }
    plan_forward(2 * n).process(&mut buf);
    (0..n).map(|j| 0.5 * buf[j]).collect()
}

/// Sine spectrum of r·f: Ŝ_k = 2 dr Σ_j sin(2π r_j ρ_k) r_j f_j.
pub(crate) fn sine_spectrum(f: &RadialField) -> Vec<Complex64> {
    let g: Vec<Complex64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * f.grid.r(j))
        .collect();
    let scale = 2.0 * f.grid.dr();
    dst_kernel(&g).into_iter().map(|v| v * scale).collect()
}

/// Field from a sine spectrum: g_j = 2 dρ Σ_k sin(2π r_j ρ_k) Ŝ_k, f = g/r,
/// with the r = 0 node recovered by even extrapolation.
pub(crate) fn field_from_sine_spectrum(grid: RadialGrid, s_hat: &[Complex64]) -> RadialField {
    debug_assert_eq!(s_hat.len(), grid.n());
    let scale = 2.0 * grid.drho();
    let g = dst_kernel(s_hat);
    let mut values: Vec<Complex64> = g
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * scale / grid.r(j)
            }
        })
        .collect();
    values[0] = extrapolate_origin(&values);
    RadialField { grid, values }
}

/// 2π-convention Fourier transform of a radial function, F(ρ_k) on the
/// conjugate frequency grid. F(0) is filled by even extrapolation.
pub fn radial_fourier(f: &RadialField) -> SpectralField {
    let s_hat = sine_spectrum(f);
    let grid = &f.grid;
    let mut values: Vec<Complex64> = s_hat
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                v / grid.rho(k)
            }
        })
        .collect();
    values[0] = extrapolate_origin(&values);
    SpectralField { rho_max: grid.rho_max(), drho: grid.drho(), values }
}

/// Inverse of [`radial_fourier`] back onto `grid`; errors if the spectrum is
/// not conjugate to the grid.
pub fn inverse_radial_fourier(spec: &SpectralField, grid: &RadialGrid) -> Result<RadialField> {
    if spec.n() != grid.n() || (spec.drho - grid.drho()).abs() > 1e-12 * grid.drho() {
        return Err(Error::config(format!(
            "spectral field (n={}, dρ={}) is not conjugate to grid (n={}, dρ={})",
            spec.n(),
            spec.drho,
            grid.n(),
            grid.drho()
        )));
    }
    let s_hat: Vec<Complex64> = spec
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v * spec.rho(k))
        .collect();
    Ok(field_from_sine_spectrum(*grid, &s_hat))
}

/// Parameters of the deformed transform and of the initial-data splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionParams {
    pub alpha: f64,
    pub beta: f64,
    /// Spatial threshold separating the H¹ core from the rough tail.
    pub epsilon0: f64,
    /// Dyadic frequency threshold N of the splitting.
    pub n_dyadic: f64,
    /// Tail regularity, 5/6 < s₀ < 1.
    pub s0: f64,
    /// Smallness budget δ₀ for the tail norm.
    pub delta0: f64,
}

impl Default for DecompositionParams {
    fn default() -> Self {
        DecompositionParams {
            alpha: 1.0,
            beta: 0.0,
            epsilon0: 1.0,
            n_dyadic: 8.0,
            s0: 0.9,
            delta0: 0.1,
        }
    }
}

/// True when x = 2^m for integer m ≥ 0.
pub fn is_dyadic(x: f64) -> bool {
    if !(x >= 1.0) || !x.is_finite() {
        return false;
    }
    let m = x.log2().round() as i32;
    x == 2f64.powi(m)
}

impl DecompositionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha < 3.0) {
            return Err(Error::domain(format!("alpha must satisfy α < 3, got {}", self.alpha)));
        }
        if !(self.beta > -3.0) {
            return Err(Error::domain(format!("beta must satisfy β > −3, got {}", self.beta)));
        }
        if !(self.s0 > 5.0 / 6.0 && self.s0 < 1.0) {
            return Err(Error::domain(format!("s0 must lie in (5/6, 1), got {}", self.s0)));
        }
        if !is_dyadic(self.n_dyadic) {
            return Err(Error::domain(format!(
                "N must be a positive power of two, got {}",
                self.n_dyadic
            )));
        }
        if !(self.delta0 > 0.0) {
            return Err(Error::domain(format!("delta0 must be positive, got {}", self.delta0)));
        }
        if !(self.epsilon0 > 0.0) {
            return Err(Error::domain(format!("epsilon0 must be positive, got {}", self.epsilon0)));
        }
        Ok(())
    }

    pub fn with_n(mut self, n_dyadic: f64) -> Self {
        self.n_dyadic = n_dyadic;
        self
    }
}

/// Relative sup-norm tolerance for "vanishes near the origin" preconditions.
pub const ORIGIN_VANISHING_TOL: f64 = 1e-10;

pub(crate) fn require_vanishing_near_origin(f: &RadialField, radius: f64, what: &str) -> Result<()> {
    let sup_all = f.linf_norm();
    let sup_inner = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v.norm() * chi_leq(radius, f.grid.r(j)))
        .fold(0.0, f64::max);
    if sup_inner > ORIGIN_VANISHING_TOL * sup_all {
        return Err(Error::precondition(format!(
            "{what}: field must vanish on r ≤ {radius} (sup there = {sup_inner:.3e}, global sup = {sup_all:.3e})"
        )));
    }
    Ok(())
}

/// Deformed Fourier transform 𝓕f(ρ) = |ξ|^α ∫ e^{−2πix·ξ} |x|^β f(x) dx,
/// radially reduced to 2 ρ^{α−1} ∫ sin(2πrρ) r^{β+1} f(r) dr on the grid.
pub fn deformed_fourier(f: &RadialField, p: &DecompositionParams) -> Result<SpectralField> {
    if !(p.alpha < 3.0) || !(p.beta > -3.0) {
        return Err(Error::domain(format!(
            "deformed transform needs α < 3 and β > −3, got ({}, {})",
            p.alpha, p.beta
        )));
    }
    if p.beta < -1.0 {
        // the radial reduction carries the weight r^{β+1}, singular at the
        // origin once β < −1; such transforms are only applied to fields cut
        // away from r = 0 (usage is always post-χ_{≥ε} multiplication)
        require_vanishing_near_origin(f, 0.25, "deformed_fourier with β < -1")?;
    }
    let weighted: Vec<Complex64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let r = f.grid.r(j);
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * r.powf(p.beta + 1.0)
            }
        })
        .collect();
    let scale = 2.0 * f.grid.dr();
    let dst = dst_kernel(&weighted);
    let grid = &f.grid;
    let values: Vec<Complex64> = dst
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * scale * grid.rho(k).powf(p.alpha - 1.0)
            }
        })
        .collect();
    SpectralField::for_grid(grid, values)
}

/// Frequency regions of the Littlewood–Paley projectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectorBand {
    /// P_{≤N}: multiplier χ_{≤N}(ρ).
    Leq(f64),
    /// P_{≥N}: multiplier χ_{≥N}(ρ) = 1 − χ_{≤N}(ρ).
    Geq(f64),
    /// P_{a≤·≤b}: multiplier χ_{≤b} − χ_{≤a}.
    Between(f64, f64),
    /// P_{2^k}: multiplier χ_{2^k} = χ_{≤2^{k+1}} − χ_{≤2^k}.
    Dyadic(i32),
}

impl ProjectorBand {
    pub fn multiplier(&self, rho: f64) -> f64 {
        match *self {
            ProjectorBand::Leq(n) => chi_leq(n, rho),
            ProjectorBand::Geq(n) => chi_geq(n, rho),
            ProjectorBand::Between(a, b) => chi_between(a, b, rho),
            ProjectorBand::Dyadic(k) => chi_band(2f64.powi(k), rho),
        }
    }
}

/// Littlewood–Paley projection: multiply the plain spectrum by the smooth
/// cutoff and transform back.
pub fn lp_project(f: &RadialField, band: ProjectorBand) -> RadialField {
    let mut s_hat = sine_spectrum(f);
    for (k, v) in s_hat.iter_mut().enumerate() {
        *v *= band.multiplier(f.grid.rho(k));
    }
    field_from_sine_spectrum(f.grid, &s_hat)
}

/// Sobolev norm with spectral weight ⟨2πρ⟩^s (inhomogeneous) or (2πρ)^s
/// (homogeneous) against |F(ρ)|² 4πρ² dρ. Supported for |s| ≤ 2.
pub fn sobolev_norm(f: &RadialField, s: f64, homogeneous: bool) -> Result<f64> {
    if !(s.abs() <= 2.0) {
        return Err(Error::domain(format!("sobolev_norm supports |s| ≤ 2, got {s}")));
    }
    let s_hat = sine_spectrum(f);
    Ok(sobolev_norm_of_spectrum(&s_hat, &f.grid, s, homogeneous))
}

pub(crate) fn sobolev_norm_of_spectrum(
    s_hat: &[Complex64],
    grid: &RadialGrid,
    s: f64,
    homogeneous: bool,
) -> f64 {
    let mut sum = 0.0;
    for (k, v) in s_hat.iter().enumerate().skip(1) {
        let two_pi_rho = 2.0 * std::f64::consts::PI * grid.rho(k);
        let w = if homogeneous {
            two_pi_rho.powf(s)
        } else {
            (1.0 + two_pi_rho * two_pi_rho).powf(0.5 * s)
        };
        sum += w * w * v.norm_sqr();
    }
    (4.0 * std::f64::consts::PI * grid.drho() * sum).sqrt()
}

/// Radial derivative ∂_r f, computed spectrally from g = r·f via
/// ∂_r f = (g′ − f)/r; the r = 0 node is 0 for smooth radial profiles.
pub fn radial_derivative(f: &RadialField) -> RadialField {
    let s_hat = sine_spectrum(f);
    let weighted: Vec<Complex64> = s_hat
        .iter()
        .enumerate()
        .map(|(k, v)| v * (2.0 * std::f64::consts::PI * f.grid.rho(k)))
        .collect();
    let gprime = cos_kernel(&weighted);
    let scale = 2.0 * f.grid.drho();
    let values: Vec<Complex64> = gprime
        .into_iter()
        .enumerate()
        .map(|(j, gp)| {
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                (gp * scale - f.values[j]) / f.grid.r(j)
            }
        })
        .collect();
    RadialField { grid: f.grid, values }
}

/// |∇|^s f for radial f: spectral weight (2πρ)^s on the sine spectrum of r·f.
pub fn fractional_gradient(f: &RadialField, s: f64) -> Result<RadialField> {
    if !(s >= 0.0 && s <= 2.0) {
        return Err(Error::domain(format!("fractional_gradient supports 0 ≤ s ≤ 2, got {s}")));
    }
    let mut s_hat = sine_spectrum(f);
    for (k, v) in s_hat.iter_mut().enumerate() {
        let w = (2.0 * std::f64::consts::PI * f.grid.rho(k)).powf(s);
        *v *= if k == 0 { 0.0 } else { w };
    }
    Ok(field_from_sine_spectrum(f.grid, &s_hat))
}
