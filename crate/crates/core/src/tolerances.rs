//! Central registry of every tolerance and acceptance budget the artifact
//! uses. The values are pinned here and recorded verbatim in each run
//! manifest, so a report is always traceable to the thresholds it was
//! produced under.

/// Kernel closed-form agreement (quadrature vs closed form, spherical-wave residuals).
pub const KERNEL_RESIDUAL: f64 = 1e-10;
/// Reconstruction f_out + f_in = f and f₊ + f₋ = f, relative L².
pub const RECONSTRUCTION_REL_L2: f64 = 1e-5;
/// Calibration constant agreement with 1/(2π), relative.
pub const CALIBRATION_REL: f64 = 1e-8;
/// L² boundedness constant for the outgoing component.
pub const OUTGOING_L2_BOUND: f64 = 3.0;
/// Banded-remainder fitted slope ceiling over k ∈ {2..5}.
pub const BAND_REMAINDER_SLOPE_MAX: f64 = -5.0;
/// Inside-region propagation fitted slope ceiling over k ∈ {3..6}.
pub const INSIDE_REGION_SLOPE_MAX: f64 = -1.5;
/// Slack added to the linear-estimate slopes (absorbs the paper's "+" epsilons).
pub const SWEEP_SLOPE_SLACK: f64 = 0.1;
/// Slack for the w₀ energy-growth slope.
pub const W0_SLOPE_SLACK: f64 = 0.15;
/// Relative mass drift budget for the split-step solver.
pub const MASS_DRIFT_MAX: f64 = 1e-10;
/// Relative energy drift budget at dt = 5e-3.
pub const ENERGY_DRIFT_MAX: f64 = 1e-5;
/// Expected energy-drift shrink factor when dt halves, ± its tolerance.
pub const ENERGY_REFINEMENT_FACTOR: f64 = 4.0;
pub const ENERGY_REFINEMENT_TOL: f64 = 0.5;
/// Morawetz inequality slack, relative to |action|.
pub const MORAWETZ_SLACK_REL: f64 = 1e-3;
/// Scattering convergence budget at the horizon.
pub const SCATTERING_CONVERGENCE_MAX: f64 = 1e-4;
/// Plancherel agreement for band-limited fields, relative.
pub const PLANCHEREL_REL: f64 = 1e-8;
/// Dyadic projector telescoping, relative L².
pub const PROJECTOR_PARTITION_REL: f64 = 1e-10;
/// Inequality-harness corpus-wide constant budget.
pub const INEQUALITY_BUDGET: f64 = 20.0;
/// Relative mass allowed beyond the boundary margin (fail-loud threshold).
pub const BOUNDARY_MASS_REL: f64 = 1e-8;

/// Everything above, by name, for the manifest.
pub fn registry() -> Vec<(&'static str, f64)> {
    vec![
        ("kernel_residual", KERNEL_RESIDUAL),
        ("reconstruction_rel_l2", RECONSTRUCTION_REL_L2),
        ("calibration_rel", CALIBRATION_REL),
        ("outgoing_l2_bound", OUTGOING_L2_BOUND),
        ("band_remainder_slope_max", BAND_REMAINDER_SLOPE_MAX),
        ("inside_region_slope_max", INSIDE_REGION_SLOPE_MAX),
        ("sweep_slope_slack", SWEEP_SLOPE_SLACK),
        ("w0_slope_slack", W0_SLOPE_SLACK),
        ("mass_drift_max", MASS_DRIFT_MAX),
        ("energy_drift_max", ENERGY_DRIFT_MAX),
        ("energy_refinement_factor", ENERGY_REFINEMENT_FACTOR),
        ("energy_refinement_tol", ENERGY_REFINEMENT_TOL),
        ("morawetz_slack_rel", MORAWETZ_SLACK_REL),
        ("scattering_convergence_max", SCATTERING_CONVERGENCE_MAX),
        ("plancherel_rel", PLANCHEREL_REL),
        ("projector_partition_rel", PROJECTOR_PARTITION_REL),
        ("inequality_budget", INEQUALITY_BUDGET),
        ("boundary_mass_rel", BOUNDARY_MASS_REL),
    ]
}
