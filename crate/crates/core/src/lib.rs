//! Radial 3D spectral workbench for the energy-critical quintic nonlinear
//! Schrödinger equation i∂ₜu + Δu = μ|u|⁴u.
//!
//! The crate implements the incoming/outgoing wave decomposition of radial
//! data as executable integral transforms (kernels J, K, deformed Fourier
//! transform, frequency-banded components), splits initial data as
//! u₀ = v₀ + w₀ at a dyadic threshold N(δ₀), evolves the pieces with an
//! exact free flow and a Strang split-step solver, and measures the
//! quantitative structures of the theory: conservation laws, Strichartz-type
//! spacetime norms, the Y and X_N working norms, Morawetz quantities,
//! region-restricted decay, scattering profiles, and fitted decay exponents.
//!
//! Everything runs on a uniform radial grid paired with its sine-conjugate
//! frequency grid, on which the radial Fourier transform is an exact
//! discrete involution. All operations are pure; experiment scenarios under
//! [`scenario`] write byte-deterministic reports.

pub mod config;
pub mod cutoff;
pub mod error;
pub mod field;
pub mod norms;
pub mod propagator;
pub mod report;
pub mod scenario;
pub mod snapshot;
pub mod sweep;
pub mod testfn;
pub mod tolerances;
pub mod transforms;
pub mod wavesplit;

pub use error::{Error, Result};
pub use field::{RadialField, RadialGrid, SpectralField};
