//! Deterministic test-function families.
//!
//! Four families cover the hypothesis class of the experiments: a Gaussian,
//! a compactly supported smooth bump, a power tail χ_{≥1}(x)|x|^{−σ} that is
//! rough only through its slow decay, and a rough-spectral family with
//! amplitude ⟨ρ⟩^{−s₀−3/2−0.01} and pseudo-random phases, which lies in
//! H^{s₀} but not in H¹ in the continuum limit. Sampling is a pure function
//! of (spec, grid): the phases come from an explicitly seeded SplitMix64
//! stream, so repeated sampling is bit-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cutoff::{chi_geq, chi_leq};
use crate::error::{Error, Result};
use crate::field::{RadialField, RadialGrid, SpectralField};
use crate::transforms::inverse_radial_fourier;

/// SplitMix64: the 64-bit PRNG behind the rough-spectral phases.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Specification of a deterministic test field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TestFunctionSpec {
    /// amplitude · e^{−π (r/width)²}
    Gaussian {
        width: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    /// amplitude · χ_{≤radius}(r): C^∞, compactly supported.
    SmoothBump {
        radius: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    /// amplitude · χ_{≥1}(r) · r^{−σ}; needs σ > 3/2 for membership in L².
    PowerTail {
        sigma: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    /// Spectral amplitude ⟨ρ⟩^{−s₀−3/2−0.01} with SplitMix64 phases.
    /// `rho_cutoff` truncates the spectrum; `r_cutoff` applies a final
    /// spatial χ_{≤r_cutoff} so the sample fits a finite propagation domain;
    /// `r_inner` applies χ_{≥r_inner} for annulus-supported data.
    RoughSpectral {
        s0: f64,
        seed: u64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        rho_cutoff: Option<f64>,
        #[serde(default)]
        r_cutoff: Option<f64>,
        #[serde(default)]
        r_inner: Option<f64>,
    },
}

fn default_amplitude() -> f64 {
    1.0
}

impl TestFunctionSpec {
    pub fn gaussian(width: f64, amplitude: f64) -> Self {
        TestFunctionSpec::Gaussian { width, amplitude }
    }

    pub fn smooth_bump(radius: f64, amplitude: f64) -> Self {
        TestFunctionSpec::SmoothBump { radius, amplitude }
    }

    pub fn power_tail(sigma: f64, amplitude: f64) -> Self {
        TestFunctionSpec::PowerTail { sigma, amplitude }
    }

    pub fn rough_spectral(s0: f64, seed: u64, amplitude: f64) -> Self {
        TestFunctionSpec::RoughSpectral {
            s0,
            seed,
            amplitude,
            rho_cutoff: None,
            r_cutoff: None,
            r_inner: None,
        }
    }

    pub fn rough_spectral_localized(
        s0: f64,
        seed: u64,
        amplitude: f64,
        rho_cutoff: Option<f64>,
        r_cutoff: Option<f64>,
    ) -> Self {
        TestFunctionSpec::RoughSpectral { s0, seed, amplitude, rho_cutoff, r_cutoff, r_inner: None }
    }

    pub fn rough_spectral_annulus(
        s0: f64,
        seed: u64,
        amplitude: f64,
        r_inner: f64,
        r_cutoff: f64,
    ) -> Self {
        TestFunctionSpec::RoughSpectral {
            s0,
            seed,
            amplitude,
            rho_cutoff: None,
            r_cutoff: Some(r_cutoff),
            r_inner: Some(r_inner),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TestFunctionSpec::Gaussian { width, amplitude } => {
                if !(width > 0.0) || !amplitude.is_finite() {
                    return Err(Error::config(format!("gaussian needs width > 0, got {width}")));
                }
            }
            TestFunctionSpec::SmoothBump { radius, amplitude } => {
                if !(radius > 0.0) || !amplitude.is_finite() {
                    return Err(Error::config(format!("smooth-bump needs radius > 0, got {radius}")));
                }
            }
            TestFunctionSpec::PowerTail { sigma, amplitude } => {
                if !(sigma > 1.5) || !amplitude.is_finite() {
                    return Err(Error::config(format!(
                        "power-tail needs σ > 3/2 for L² membership, got {sigma}"
                    )));
                }
            }
            TestFunctionSpec::RoughSpectral { s0, rho_cutoff, r_cutoff, r_inner, amplitude, .. } => {
                if !(s0 > 5.0 / 6.0 && s0 < 1.0) || !amplitude.is_finite() {
                    return Err(Error::config(format!(
                        "rough-spectral needs s₀ ∈ (5/6, 1), got {s0}"
                    )));
                }
                for (name, value) in [("rho_cutoff", rho_cutoff), ("r_cutoff", r_cutoff), ("r_inner", r_inner)] {
                    if let Some(v) = value {
                        if !(v > 0.0) {
                            return Err(Error::config(format!("{name} must be positive")));
                        }
                    }
                }
                if let (Some(inner), Some(outer)) = (r_inner, r_cutoff) {
                    if !(inner < outer) {
                        return Err(Error::config(format!(
                            "r_inner = {inner} must lie below r_cutoff = {outer}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sample a test family on a grid. Pure: equal inputs give bit-equal outputs.
pub fn sample_field(spec: &TestFunctionSpec, grid: &RadialGrid) -> Result<RadialField> {
    spec.validate()?;
    let n = grid.n();
    match *spec {
        TestFunctionSpec::Gaussian { width, amplitude } => {
            let values = (0..n)
                .map(|j| {
                    let t = grid.r(j) / width;
                    Complex64::new(amplitude * (-std::f64::consts::PI * t * t).exp(), 0.0)
                })
                .collect();
            RadialField::new(*grid, values)
        }
        TestFunctionSpec::SmoothBump { radius, amplitude } => {
            let values = (0..n)
                .map(|j| Complex64::new(amplitude * chi_leq(radius, grid.r(j)), 0.0))
                .collect();
            RadialField::new(*grid, values)
        }
        TestFunctionSpec::PowerTail { sigma, amplitude } => {
            let values = (0..n)
                .map(|j| {
                    let r = grid.r(j);
                    let chi = chi_geq(1.0, r);
                    // plateau zeros are exact, so the r^{−σ} singularity is never touched
                    let v = if chi == 0.0 { 0.0 } else { amplitude * chi * r.powf(-sigma) };
                    Complex64::new(v, 0.0)
                })
                .collect();
            RadialField::new(*grid, values)
        }
        TestFunctionSpec::RoughSpectral { s0, seed, amplitude, rho_cutoff, r_cutoff, r_inner } => {
            let mut rng = SplitMix64::new(seed);
            let decay = -s0 - 1.5 - 0.01;
            let mut values = vec![Complex64::new(0.0, 0.0); n];
            for (k, v) in values.iter_mut().enumerate().skip(1) {
                let rho = grid.rho(k);
                // consume the stream unconditionally so rho_cutoff does not
                // shift the phases of retained modes
                let phase = 2.0 * std::f64::consts::PI * rng.next_f64();
                let keep = match rho_cutoff {
                    Some(rc) => rho <= rc,
                    None => true,
                };
                if keep {
                    let amp = amplitude * (1.0 + rho * rho).powf(0.5 * decay);
                    *v = Complex64::from_polar(amp, phase);
                }
            }
            let spec = SpectralField::for_grid(grid, values)?;
            let mut f = inverse_radial_fourier(&spec, grid)?;
            if let Some(rc) = r_cutoff {
                f = f.mul_radial_profile(|r| chi_leq(rc, r));
            }
            if let Some(ri) = r_inner {
                f = f.mul_radial_profile(|r| chi_geq(ri, r));
            }
            Ok(f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::sobolev_norm;

    #[test]
    fn gaussian_values() {
        let grid = RadialGrid::new(16.0, 64).unwrap();
        let f = sample_field(&TestFunctionSpec::gaussian(1.0, 1.0), &grid).unwrap();
        for j in [0usize, 5, 20] {
            let r = grid.r(j);
            assert_eq!(f.values[j].re, (-std::f64::consts::PI * r * r).exp());
        }
    }

    #[test]
    fn power_tail_value_at_two() {
        let grid = RadialGrid::new(16.0, 64).unwrap();
        let f = sample_field(&TestFunctionSpec::power_tail(2.0, 1.0), &grid).unwrap();
        let j = (2.0 / grid.dr()).round() as usize;
        assert_eq!(grid.r(j), 2.0);
        assert_eq!(f.values[j].re, 0.25);
    }

    #[test]
    fn power_tail_requires_l2_exponent() {
        assert!(TestFunctionSpec::power_tail(1.4, 1.0).validate().is_err());
    }

    #[test]
    fn rough_spectral_is_reproducible() {
        let grid = RadialGrid::new(32.0, 512).unwrap();
        let spec = TestFunctionSpec::rough_spectral(0.9, 7, 1.0);
        let a = sample_field(&spec, &grid).unwrap();
        let b = sample_field(&spec, &grid).unwrap();
        assert_eq!(a, b, "sampling must be bit-identical");
        let c = sample_field(&TestFunctionSpec::rough_spectral(0.9, 8, 1.0), &grid).unwrap();
        assert_ne!(a, c, "different seeds must differ");
    }

    #[test]
    fn rough_spectral_regularity_gap() {
        // The H¹ mass keeps growing with the resolved frequency range while
        // the H^{s₀} mass saturates: H¹ grows strictly faster under refinement.
        let spec = TestFunctionSpec::rough_spectral(0.9, 11, 1.0);
        let coarse = RadialGrid::new(32.0, 1024).unwrap();
        let fine = RadialGrid::new(32.0, 8192).unwrap();
        let norms = |g: &RadialGrid| {
            let f = sample_field(&spec, g).unwrap();
            (
                sobolev_norm(&f, 1.0, false).unwrap(),
                sobolev_norm(&f, 0.9, false).unwrap(),
            )
        };
        let (h1_c, hs_c) = norms(&coarse);
        let (h1_f, hs_f) = norms(&fine);
        let h1_growth = h1_f / h1_c;
        let hs_growth = hs_f / hs_c;
        assert!(
            h1_growth > 1.05 * hs_growth,
            "H¹ growth {h1_growth} should outpace H^s0 growth {hs_growth}"
        );
    }

    #[test]
    fn splitmix_reference_stream() {
        // first outputs for seed 1234567 (reference values of the standard constants)
        let mut rng = SplitMix64::new(0);
        let first = rng.next_u64();
        assert_eq!(first, 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn unknown_family_is_a_config_error() {
        let text = r#"{"family": "lorentzian", "width": 1.0}"#;
        let parsed: std::result::Result<TestFunctionSpec, _> = serde_json::from_str(text);
        assert!(parsed.is_err());
    }
}
