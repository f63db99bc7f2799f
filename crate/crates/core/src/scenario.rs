//! Experiment scenarios: deterministic, file-producing runs binding the
//! decomposition, propagator, and norm machinery together.
//!
//! Every scenario writes its outputs under the config's output directory and
//! finishes with a `manifest.json` listing the config hash, the measured
//! calibration constant, the tolerance registry, and a content hash of every
//! file written. Re-running a config produces byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, Scenario};
use crate::error::Result;
use crate::field::RadialField;
use crate::norms::{
    energy, fit_exponent, lebesgue_norm, mass, mixed_norm, morawetz_report, s_norm,
    s_norm_split_density, scattering_profile, split_by_threshold, x_norm, Exponent, MixedNormSpec,
};
use crate::propagator::{evolve_linear_series, evolve_nls, linear_flow, perturbation_series};
use crate::report::{fmt_f64, sha256_hex, svg_loglog, CsvWriter, JsonWriter, SvgSeries};
use crate::snapshot::write_radial_snapshot;
use crate::sweep::{band_remainder_sweep, inside_region_sweep, y_sweep};
use crate::testfn::sample_field;
use crate::tolerances;
use crate::transforms::{
    deformed_fourier, inverse_radial_fourier, lp_project, radial_fourier, sobolev_norm,
    DecompositionParams, ProjectorBand,
};
use crate::wavesplit::{
    choose_n, component_split, kernel_j, kernel_j_quadrature, incoming_wave_residual,
    measure_calibration, modified_components, outgoing_wave_residual, split_initial_data,
};

/// Output collector: writes files under the run root and records content
/// hashes for the manifest (written last, single-threaded).
pub struct Sink {
    root: PathBuf,
    files: Vec<(String, String, u64)>,
}

impl Sink {
    pub fn new(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Sink { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.files.push((rel.to_string(), sha256_hex(bytes), bytes.len() as u64));
        Ok(())
    }

    /// Record snapshot pair files written through the snapshot module.
    fn record_existing(&mut self, rel: &str) -> Result<()> {
        let bytes = fs::read(self.root.join(rel))?;
        self.files.push((rel.to_string(), sha256_hex(&bytes), bytes.len() as u64));
        Ok(())
    }

    pub fn write_field(&mut self, rel_base: &str, f: &RadialField, t: f64, role: &str) -> Result<()> {
        let base = self.root.join(rel_base);
        if let Some(parent) = base.parent() {
            fs::create_dir_all(parent)?;
        }
        write_radial_snapshot(&base, f, t, role)?;
        self.record_existing(&format!("{rel_base}.bin"))?;
        self.record_existing(&format!("{rel_base}.json"))?;
        Ok(())
    }

    pub fn manifest(mut self, config: &ExperimentConfig, calibration_c: f64) -> Result<()> {
        let config_text = config.to_json();
        let mut w = JsonWriter::new();
        w.begin_object()
            .field_str("tool", "radialnls")
            .field_str("version", env!("CARGO_PKG_VERSION"))
            .field_str("scenario", config.scenario.name())
            .field_str("config_hash", &sha256_hex(config_text.as_bytes()))
            .field_f64("calibration_c", calibration_c)
            .key("tolerances")
            .begin_object();
        for (name, value) in tolerances::registry() {
            w.field_f64(name, value);
        }
        w.end_object().key("files").begin_array();
        self.files.sort();
        for (path, sha, bytes) in &self.files {
            w.begin_object()
                .field_str("path", path)
                .field_str("sha256", sha)
                .field_u64("bytes", *bytes)
                .end_object();
        }
        w.end_array().end_object();
        let text = w.finish();
        fs::write(self.root.join("manifest.json"), text)?;
        Ok(())
    }
}

/// Outcome of a scenario run: output files are always written; `failed`
/// carries the reason when the run should exit non-zero.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub failed: Option<String>,
}

fn calibration_probe(p: &DecompositionParams) -> Result<f64> {
    measure_calibration(4096, 64.0, p)
}

/// Run a validated config to completion.
pub fn run(config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;
    let mut sink = Sink::new(&config.output_dir)?;
    let calibration_c = calibration_probe(&config.params.base())?;
    let summary = match config.scenario {
        Scenario::Kernels => run_kernels(config, &mut sink)?,
        Scenario::Decompose => run_decompose(config, &mut sink, calibration_c)?,
        Scenario::LinearSweep => run_linear_sweep(config, &mut sink)?,
        Scenario::Evolve => run_evolve(config, &mut sink)?,
        Scenario::Scatter => run_scatter(config, &mut sink)?,
        Scenario::Check => run_check(config, &mut sink, calibration_c)?,
    };
    sink.manifest(config, calibration_c)?;
    Ok(summary)
}

fn run_kernels(_config: &ExperimentConfig, sink: &mut Sink) -> Result<RunSummary> {
    let count = 500;
    let (r_lo, r_hi) = (0.01, 50.0);
    let mut csv = CsvWriter::new(&[
        "r",
        "re_j",
        "im_j",
        "quadrature_residual",
        "outgoing_wave_residual",
        "incoming_wave_residual",
    ]);
    let mut max_quad = 0.0f64;
    let mut max_out = 0.0f64;
    let mut max_in = 0.0f64;
    for i in 0..count {
        let r = r_lo + (r_hi - r_lo) * i as f64 / (count - 1) as f64;
        let j = kernel_j(r);
        let quad_res = (kernel_j_quadrature(r) - j).norm();
        max_quad = max_quad.max(quad_res);
        let (out_res, in_res) = if r >= 2.2 {
            let o = outgoing_wave_residual(r);
            let i = incoming_wave_residual(r);
            max_out = max_out.max(o);
            max_in = max_in.max(i);
            (o, i)
        } else {
            (0.0, 0.0)
        };
        csv.row(&[r, j.re, j.im, quad_res, out_res, in_res]);
    }
    sink.write("series.csv", csv.finish().as_bytes())?;
    let pass = max_quad <= tolerances::KERNEL_RESIDUAL
        && max_out <= tolerances::KERNEL_RESIDUAL
        && max_in <= tolerances::KERNEL_RESIDUAL;
    let mut w = JsonWriter::new();
    w.begin_object()
        .field_u64("sample_count", count as u64)
        .field_f64("max_quadrature_residual", max_quad)
        .field_f64("max_outgoing_wave_residual", max_out)
        .field_f64("max_incoming_wave_residual", max_in)
        .field_f64("budget", tolerances::KERNEL_RESIDUAL)
        .field_bool("pass", pass)
        .end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: if pass { None } else { Some("kernel residuals exceed budget".into()) } })
}

fn write_params(w: &mut JsonWriter, p: &DecompositionParams) {
    w.key("params").begin_object();
    w.field_f64("alpha", p.alpha)
        .field_f64("beta", p.beta)
        .field_f64("epsilon0", p.epsilon0)
        .field_f64("n_dyadic", p.n_dyadic)
        .field_f64("s0", p.s0)
        .field_f64("delta0", p.delta0)
        .end_object();
}

fn run_decompose(config: &ExperimentConfig, sink: &mut Sink, calibration_c: f64) -> Result<RunSummary> {
    let grid = config.grid.build()?;
    let f = sample_field(&config.data, &grid)?;
    let p = config.params.base();
    let split = component_split(&f, &p)?;
    let modified = modified_components(&f, &p)?;
    sink.write_field("snapshots/f", &f, 0.0, "f")?;
    sink.write_field("snapshots/f_out", &split.out, 0.0, "f_out")?;
    sink.write_field("snapshots/f_in", &split.in_, 0.0, "f_in")?;
    sink.write_field("snapshots/f_plus", &modified.out, 0.0, "f_plus")?;
    sink.write_field("snapshots/f_minus", &modified.in_, 0.0, "f_minus")?;
    let f_l2 = f.l2_norm();
    let out_ratio = if f_l2 > 0.0 { split.out.l2_norm() / f_l2 } else { 0.0 };
    let in_ratio = if f_l2 > 0.0 { split.in_.l2_norm() / f_l2 } else { 0.0 };
    let pass = split.reconstruction_error <= tolerances::RECONSTRUCTION_REL_L2
        && modified.reconstruction_error <= tolerances::RECONSTRUCTION_REL_L2
        && (calibration_c * std::f64::consts::TAU - 1.0).abs() <= tolerances::CALIBRATION_REL
        && out_ratio <= tolerances::OUTGOING_L2_BOUND;
    let mut w = JsonWriter::new();
    w.begin_object()
        .field_f64("reconstruction_error", split.reconstruction_error)
        .field_f64("reconstruction_error_modified", modified.reconstruction_error)
        .field_f64("calibration_c", calibration_c)
        .field_f64("out_l2_ratio", out_ratio)
        .field_f64("in_l2_ratio", in_ratio)
        .field_f64("f_l2", f_l2)
        .field_bool("pass", pass);
    write_params(&mut w, &p);
    w.end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: if pass { None } else { Some("decomposition budgets exceeded".into()) } })
}

fn maybe_install_pool<T>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

fn run_linear_sweep(config: &ExperimentConfig, sink: &mut Sink) -> Result<RunSummary> {
    let grid = config.grid.build()?;
    let f = sample_field(&config.data, &grid)?;
    let sweep = config.sweep.as_ref().expect("validated");
    let p = config.params.base();

    let mut w = JsonWriter::new();
    w.begin_object();
    w.field_str("scenario", "linear-sweep");

    if let Some(n_list) = &sweep.n_list {
        let rows = maybe_install_pool(sweep.workers, || {
            y_sweep(&f, &p, n_list, sweep.t_end, sweep.late_window_start)
        })?;
        let mut csv = CsvWriter::new(&[
            "n",
            "tail_h_s0",
            "grad_l2l6",
            "l8l12",
            "linf_l6",
            "l2linf",
            "l2linf_late",
            "grad_l2linf_late",
            "w0_hdot1",
        ]);
        for r in &rows {
            csv.row(&[
                r.n_dyadic,
                r.tail_h_s0,
                r.grad_l2l6,
                r.l8l12,
                r.linf_l6,
                r.l2linf,
                r.l2linf_late,
                r.grad_l2linf_late,
                r.w0_hdot1,
            ]);
        }
        sink.write("series.csv", csv.finish().as_bytes())?;

        let series = |pick: fn(&crate::sweep::YSweepRow) -> f64| -> Vec<(f64, f64)> {
            rows.iter().map(|r| (r.n_dyadic, pick(r))).collect()
        };
        let fits: Vec<(&str, Vec<(f64, f64)>)> = vec![
            ("grad_l2l6", series(|r| r.grad_l2l6)),
            ("l8l12", series(|r| r.l8l12)),
            ("linf_l6", series(|r| r.linf_l6)),
            ("l2linf", series(|r| r.l2linf)),
            ("l2linf_late", series(|r| r.l2linf_late)),
            ("grad_l2linf_late", series(|r| r.grad_l2linf_late)),
            ("w0_hdot1", series(|r| r.w0_hdot1)),
            ("tail_h_s0", series(|r| r.tail_h_s0)),
        ];
        w.key("n_sweep").begin_object();
        w.field_f64("t_end", sweep.t_end).field_f64("late_window_start", sweep.late_window_start);
        w.key("slopes").begin_object();
        for (name, pts) in &fits {
            let fit = fit_exponent(pts)?;
            w.key(name)
                .begin_object()
                .field_f64("slope", fit.slope)
                .field_f64("intercept", fit.intercept)
                .field_f64("residual", fit.residual)
                .end_object();
        }
        w.end_object().end_object();

        let svg_series: Vec<SvgSeries> = fits[..4]
            .iter()
            .map(|(name, pts)| SvgSeries { label: name, points: pts })
            .collect();
        sink.write(
            "plots/n_sweep.svg",
            svg_loglog("linear-flow norms vs N", "N", "norm", &svg_series).as_bytes(),
        )?;
    }

    if let Some(k_list) = &sweep.inside_k_list {
        let rows = maybe_install_pool(sweep.workers, || {
            inside_region_sweep(&f, &p, k_list, sweep.delta, sweep.t_end.min(2.0))
        })?;
        let mut csv = CsvWriter::new(&["k", "two_pow_k", "band_l2", "inside_l2l6", "normalized"]);
        let mut raw_pts = Vec::new();
        let mut norm_pts = Vec::new();
        for r in &rows {
            let two_k = 2f64.powi(r.k);
            let normalized = if r.band_l2 > 0.0 { r.inside_l2l6 / r.band_l2 } else { 0.0 };
            csv.row(&[r.k as f64, two_k, r.band_l2, r.inside_l2l6, normalized]);
            raw_pts.push((two_k, r.inside_l2l6));
            norm_pts.push((two_k, normalized));
        }
        sink.write("inside_region.csv", csv.finish().as_bytes())?;
        let raw_fit = fit_exponent(&raw_pts)?;
        let norm_fit = fit_exponent(&norm_pts)?;
        w.key("inside_region").begin_object();
        w.field_f64("delta", sweep.delta)
            .field_f64("slope_raw", raw_fit.slope)
            .field_f64("slope_normalized", norm_fit.slope)
            .field_f64("residual_raw", raw_fit.residual)
            .end_object();
        sink.write(
            "plots/inside_region.svg",
            svg_loglog(
                "inside-region L2tL6x vs band",
                "2^k",
                "norm",
                &[
                    SvgSeries { label: "inside_l2l6", points: &raw_pts },
                    SvgSeries { label: "normalized", points: &norm_pts },
                ],
            )
            .as_bytes(),
        )?;
    }

    if let Some(k_list) = &sweep.remainder_k_list {
        let rows = maybe_install_pool(sweep.workers, || band_remainder_sweep(&f, &p, k_list))?;
        let mut csv = CsvWriter::new(&["k", "two_pow_k", "band_l2", "h2_norm", "ratio"]);
        let mut pts = Vec::new();
        for r in &rows {
            let two_k = 2f64.powi(r.k);
            csv.row(&[r.k as f64, two_k, r.band_l2, r.h2_norm, r.ratio]);
            pts.push((two_k, r.ratio));
        }
        sink.write("band_remainder.csv", csv.finish().as_bytes())?;
        let fit = fit_exponent(&pts)?;
        w.key("band_remainder").begin_object();
        w.field_f64("slope", fit.slope).field_f64("residual", fit.residual).end_object();
        sink.write(
            "plots/band_remainder.svg",
            svg_loglog(
                "banded remainder H2 ratio",
                "2^k",
                "ratio",
                &[SvgSeries { label: "h_k ratio", points: &pts }],
            )
            .as_bytes(),
        )?;
    }

    w.end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: None })
}

fn run_evolve(config: &ExperimentConfig, sink: &mut Sink) -> Result<RunSummary> {
    let grid = config.grid.build()?;
    let f = sample_field(&config.data, &grid)?;
    let base = config.params.base();
    let n_dyadic = match config.params.n_dyadic {
        Some(n) => n,
        None => choose_n(&f, &base)?,
    };
    let p = config.params.with_n(n_dyadic);
    let solver = config.solver.as_ref().expect("validated");

    let modified = modified_components(&f, &p)?;
    let u0 = modified.out.clone();
    let split = split_initial_data(&f, &p)?;

    let u_run = evolve_nls(&u0, solver)?;
    let v_run = evolve_linear_series(&split.v0, &u_run.times)?;
    let w_run = perturbation_series(&u_run, &v_run)?;
    let t_last = *u_run.times.last().unwrap();

    let hdot1_w = &w_run.norm_densities["hdot1"];
    let sup_hdot1 = hdot1_w.iter().cloned().fold(0.0, f64::max);
    let morawetz = morawetz_report(&w_run)?;

    let mut csv = CsvWriter::new(&["t", "mass", "energy", "hdot1_w", "morawetz_M"]);
    for i in 0..u_run.times.len() {
        csv.row(&[
            u_run.times[i],
            u_run.mass_series[i],
            u_run.energy_series[i],
            hdot1_w[i],
            morawetz.m_series.values[i],
        ]);
    }
    sink.write("series.csv", csv.finish().as_bytes())?;

    let x = x_norm(&w_run, n_dyadic, p.s0, (0.0, t_last))?;
    let s_w = s_norm(&w_run, (0.0, t_last))?;
    let density = s_norm_split_density(&w_run, config.eta)?;
    let intervals = split_by_threshold(&density, config.eta)?;

    sink.write_field("snapshots/u0", &u0, 0.0, "u0")?;
    sink.write_field("snapshots/v0", &split.v0, 0.0, "v0")?;
    sink.write_field("snapshots/w0", &split.w0, 0.0, "w0")?;
    sink.write_field("snapshots/u_final", u_run.snapshots.last().unwrap(), t_last, "u")?;
    sink.write_field("snapshots/v_final", v_run.snapshots.last().unwrap(), t_last, "v")?;
    sink.write_field("snapshots/w_final", w_run.snapshots.last().unwrap(), t_last, "w")?;

    let slack_rel = if morawetz.action.abs() > 0.0 {
        morawetz.slack / morawetz.action.abs()
    } else {
        0.0
    };
    let mut w = JsonWriter::new();
    w.begin_object()
        .field_f64("n_dyadic", n_dyadic)
        .field_f64("tail_h_s0", split.tail_h_s0)
        .field_f64("w0_hdot1", split.w0_hdot1)
        .field_f64("reconstruction_error_modified", modified.reconstruction_error)
        .field_f64("t_end", t_last)
        .field_f64("mass_drift", u_run.mass_drift())
        .field_f64("energy_drift", u_run.energy_drift())
        .field_f64("energy_excursion", u_run.energy_excursion())
        .field_f64("sup_hdot1_w", sup_hdot1)
        .field_f64("s_norm_w", s_w);
    w.key("x_norm").begin_object();
    for term in &x.terms {
        w.key(&term.label)
            .begin_object()
            .field_f64("weight_exponent", term.weight_exponent)
            .field_f64("raw", term.raw)
            .field_f64("weighted", term.weighted)
            .end_object();
    }
    w.field_f64("total", x.total).end_object();
    w.key("morawetz")
        .begin_object()
        .field_f64("action", morawetz.action)
        .field_f64("m_first", *morawetz.m_series.values.first().unwrap())
        .field_f64("m_last", *morawetz.m_series.values.last().unwrap())
        .field_f64("slack", morawetz.slack)
        .field_f64("slack_rel", slack_rel)
        .end_object();
    w.key("interval_split")
        .begin_object()
        .field_f64("eta", config.eta)
        .field_u64("count", intervals.interval_count() as u64)
        .key("boundaries")
        .begin_array();
    for &b in &intervals.boundaries {
        w.value_f64(b);
    }
    w.end_array().end_object();
    match &u_run.abort {
        Some(reason) => w.field_str("abort", reason),
        None => w.field_bool("completed", true),
    };
    write_params(&mut w, &p);
    w.end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: u_run.abort.clone() })
}

fn run_scatter(config: &ExperimentConfig, sink: &mut Sink) -> Result<RunSummary> {
    let grid = config.grid.build()?;
    let f = sample_field(&config.data, &grid)?;
    let p = config.params.base();
    let solver = config.solver.as_ref().expect("validated");
    let modified = modified_components(&f, &p)?;
    let u0 = modified.out.clone();
    let run = evolve_nls(&u0, solver)?;
    let profile = scattering_profile(&run, solver.mu, &u0)?;

    let mut csv = CsvWriter::new(&["t", "convergence", "mass", "energy"]);
    for i in 0..run.times.len() {
        csv.row(&[
            run.times[i],
            profile.convergence.values[i],
            run.mass_series[i],
            run.energy_series[i],
        ]);
    }
    sink.write("series.csv", csv.finish().as_bytes())?;
    sink.write_field("snapshots/u_plus", &profile.u_plus, 0.0, "u_plus")?;

    let t_last = *run.times.last().unwrap();
    let conv = &profile.convergence.values;
    let half_from = run.times.iter().position(|&t| t >= 0.5 * t_last - 1e-12).unwrap();
    let mut max_uptick = 0.0f64;
    for i in half_from..conv.len() - 1 {
        max_uptick = max_uptick.max(conv[i + 1] - conv[i]);
    }
    let nonincreasing = max_uptick <= 1e-12 * conv[half_from].max(1e-300);
    let floor = conv.iter().cloned().fold(f64::INFINITY, f64::min);
    let final_conv = *conv.last().unwrap();

    let mut w = JsonWriter::new();
    w.begin_object()
        .field_f64("convergence_final", final_conv)
        .field_f64("convergence_floor", floor)
        .field_bool("nonincreasing_tail", nonincreasing)
        .field_f64("max_uptick_tail", max_uptick)
        .field_bool("horizon_warning", profile.horizon_warning)
        .field_f64("mass_drift", run.mass_drift())
        .field_f64("energy_drift", run.energy_drift())
        .field_f64("energy_excursion", run.energy_excursion());
    match &run.abort {
        Some(reason) => w.field_str("abort", reason),
        None => w.field_bool("completed", true),
    };
    write_params(&mut w, &p);
    w.end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: run.abort.clone() })
}

struct CheckRow {
    name: &'static str,
    measured: f64,
    budget: f64,
}

impl CheckRow {
    fn pass(&self) -> bool {
        self.measured <= self.budget
    }
}

fn run_check(config: &ExperimentConfig, sink: &mut Sink, calibration_c: f64) -> Result<RunSummary> {
    use crate::cutoff::{chi_band, chi_leq};
    use crate::field::RadialGrid;
    use crate::propagator::SolverConfig;
    use crate::testfn::TestFunctionSpec;

    let mut rows: Vec<CheckRow> = Vec::new();

    // kernel closed forms vs quadrature
    let mut max_quad = 0.0f64;
    let mut max_wave = 0.0f64;
    for i in 0..=100 {
        let r = 0.01 + 50.0 * i as f64 / 100.0;
        max_quad = max_quad.max((kernel_j_quadrature(r) - kernel_j(r)).norm());
        if r >= 2.2 {
            max_wave = max_wave.max(outgoing_wave_residual(r)).max(incoming_wave_residual(r));
        }
    }
    rows.push(CheckRow { name: "kernel_quadrature_residual", measured: max_quad, budget: tolerances::KERNEL_RESIDUAL });
    rows.push(CheckRow { name: "kernel_wave_residual", measured: max_wave, budget: tolerances::KERNEL_RESIDUAL });

    // partition of unity and plateau exactness
    let mut max_partition = 0.0f64;
    for i in 0..=320 {
        let x = i as f64 * 0.05;
        let mut total = chi_leq(1.0, x);
        for k in 0..=4 {
            total += chi_band(2f64.powi(k), x);
        }
        if x <= 16.0 {
            max_partition = max_partition.max((total - 1.0).abs());
        }
    }
    rows.push(CheckRow { name: "partition_of_unity", measured: max_partition, budget: 0.0 });
    let plateau = (chi_leq(1.0, 0.999) - 1.0).abs() + chi_leq(1.0, 1.1).abs();
    rows.push(CheckRow { name: "cutoff_plateau_exactness", measured: plateau, budget: 0.0 });

    // transforms on a probe grid
    let probe_grid = RadialGrid::new(32.0, 2048)?;
    let gauss = sample_field(&TestFunctionSpec::gaussian(1.0, 1.0), &probe_grid)?;
    let spec = radial_fourier(&gauss);
    let plancherel = (spec.l2_norm() - gauss.l2_norm()).abs() / gauss.l2_norm();
    rows.push(CheckRow { name: "plancherel", measured: plancherel, budget: tolerances::PLANCHEREL_REL });
    let back = inverse_radial_fourier(&spec, &probe_grid)?;
    rows.push(CheckRow {
        name: "fourier_round_trip",
        measured: back.rel_l2_error(&gauss)?,
        budget: 1e-10,
    });
    let mut sum = lp_project(&gauss, ProjectorBand::Leq(1.0));
    for k in 0..=3 {
        sum = sum.add(&lp_project(&gauss, ProjectorBand::Dyadic(k)))?;
    }
    let whole = lp_project(&gauss, ProjectorBand::Leq(16.0));
    rows.push(CheckRow {
        name: "projector_partition",
        measured: sum.rel_l2_error(&whole)?,
        budget: tolerances::PROJECTOR_PARTITION_REL,
    });
    let cut = gauss.mul_radial_profile(|r| crate::cutoff::chi_geq(1.0, r));
    let p00 = DecompositionParams { alpha: 0.0, beta: 0.0, ..config.params.base() };
    let deformed = deformed_fourier(&cut, &p00)?;
    let plain = radial_fourier(&cut);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 1..probe_grid.n() {
        let rho = probe_grid.rho(k);
        num += (deformed.values[k] - plain.values[k]).norm_sqr() * rho * rho;
        den += plain.values[k].norm_sqr() * rho * rho;
    }
    rows.push(CheckRow {
        name: "deformed_degeneracy",
        measured: (num / den).sqrt(),
        budget: tolerances::PLANCHEREL_REL,
    });

    // decomposition on the configured data
    let grid = config.grid.build()?;
    let f = sample_field(&config.data, &grid)?;
    let p = config.params.base();
    let split = component_split(&f, &p)?;
    let modified = modified_components(&f, &p)?;
    rows.push(CheckRow {
        name: "reconstruction_components",
        measured: split.reconstruction_error,
        budget: tolerances::RECONSTRUCTION_REL_L2,
    });
    rows.push(CheckRow {
        name: "reconstruction_modified",
        measured: modified.reconstruction_error,
        budget: tolerances::RECONSTRUCTION_REL_L2,
    });
    rows.push(CheckRow {
        name: "calibration_constant",
        measured: (calibration_c * std::f64::consts::TAU - 1.0).abs(),
        budget: tolerances::CALIBRATION_REL,
    });
    let f_l2 = f.l2_norm();
    rows.push(CheckRow {
        name: "outgoing_l2_ratio",
        measured: if f_l2 > 0.0 { split.out.l2_norm() / f_l2 } else { 0.0 },
        budget: tolerances::OUTGOING_L2_BOUND,
    });

    // propagation
    let flowed = linear_flow(&gauss, 0.4);
    rows.push(CheckRow {
        name: "linear_flow_unitarity",
        measured: (mass(&flowed) - mass(&gauss)).abs() / mass(&gauss),
        budget: 1e-10,
    });
    let two_step = linear_flow(&linear_flow(&gauss, 0.25), 0.15);
    rows.push(CheckRow {
        name: "linear_flow_group_law",
        measured: two_step.rel_l2_error(&flowed)?,
        budget: 1e-9,
    });
    let solver = SolverConfig {
        dt: 5e-3,
        t_end: 0.5,
        mu: 1.0,
        snapshot_stride: 10,
        dealias_fraction: 2.0 / 3.0,
        boundary_margin: 0.0625,
        linf_guard_factor: 100.0,
        accumulate_duhamel: false,
    };
    let small_run = evolve_nls(&gauss, &solver)?.into_result()?;
    rows.push(CheckRow {
        name: "mass_conservation",
        measured: small_run.mass_drift(),
        budget: tolerances::MASS_DRIFT_MAX,
    });
    let linear_solver = SolverConfig { mu: 0.0, ..solver };
    let linear_run = evolve_nls(&gauss, &linear_solver)?.into_result()?;
    let mut mu0_dev = 0.0f64;
    for (i, &t) in linear_run.times.iter().enumerate() {
        mu0_dev = mu0_dev.max(linear_run.snapshots[i].rel_l2_error(&linear_flow(&gauss, t))?);
    }
    rows.push(CheckRow { name: "mu0_matches_free_flow", measured: mu0_dev, budget: 1e-9 });

    // norms and fits
    let l2_vs_sobolev = (lebesgue_norm(&gauss, Exponent::Finite(2.0), false)?
        - sobolev_norm(&gauss, 0.0, false)?)
    .abs()
        / gauss.l2_norm();
    rows.push(CheckRow { name: "l2_matches_sobolev0", measured: l2_vs_sobolev, budget: 1e-8 });
    let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n: &f64| (n, 7.0 * n.powf(-2.0))).collect();
    let fit = fit_exponent(&pts)?;
    rows.push(CheckRow {
        name: "fit_exponent_synthetic",
        measured: (fit.slope + 2.0).abs(),
        budget: 1e-10,
    });
    let mixed_static = {
        let times: Vec<f64> = (0..=16).map(|i| i as f64 * 0.0625).collect();
        let run = evolve_linear_series(&gauss, &times)?;
        mixed_norm(
            &run,
            &MixedNormSpec::new(Exponent::Infinity, Exponent::Finite(2.0), (0.0, 1.0)),
        )?
    };
    rows.push(CheckRow {
        name: "mixed_norm_sup_mass",
        measured: (mixed_static - gauss.l2_norm()).abs() / gauss.l2_norm(),
        budget: 1e-8,
    });

    // determinism of sampling
    let again = sample_field(&config.data, &grid)?;
    rows.push(CheckRow {
        name: "sampling_determinism",
        measured: if again == f { 0.0 } else { 1.0 },
        budget: 0.0,
    });
    // energy check
    rows.push(CheckRow {
        name: "energy_of_zero_field",
        measured: energy(&RadialField::zeros(probe_grid), 1.0).abs(),
        budget: 0.0,
    });

    let all_pass = rows.iter().all(|r| r.pass());
    let mut table = String::new();
    table.push_str(&format!("{:<32} {:>24} {:>24} {:>6}\n", "check", "measured", "budget", "pass"));
    for r in &rows {
        table.push_str(&format!(
            "{:<32} {:>24} {:>24} {:>6}\n",
            r.name,
            fmt_f64(r.measured),
            fmt_f64(r.budget),
            if r.pass() { "ok" } else { "FAIL" }
        ));
    }
    print!("{table}");
    println!("check: {}", if all_pass { "ALL PASS" } else { "FAILURES PRESENT" });

    let mut w = JsonWriter::new();
    w.begin_object().field_bool("all_pass", all_pass).key("checks").begin_array();
    for r in &rows {
        w.begin_object()
            .field_str("name", r.name)
            .field_f64("measured", r.measured)
            .field_f64("budget", r.budget)
            .field_bool("pass", r.pass())
            .end_object();
    }
    w.end_array().end_object();
    sink.write("report.json", w.finish().as_bytes())?;
    Ok(RunSummary { failed: if all_pass { None } else { Some("invariant checks failed".into()) } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GridConfig, ParamsConfig};
    use crate::testfn::TestFunctionSpec;

    fn outdir(tag: &str) -> PathBuf {
        std::env::temp_dir().join(format!("radialnls-scn-{tag}-{}", std::process::id()))
    }

    #[test]
    fn kernels_scenario_passes_and_is_deterministic() {
        // re-running the same config overwrites the outputs byte-identically
        let dir = outdir("kern");
        let config = ExperimentConfig {
            scenario: Scenario::Kernels,
            grid: GridConfig { r_max: 32.0, n: 256 },
            data: TestFunctionSpec::gaussian(1.0, 1.0),
            params: ParamsConfig::default(),
            solver: None,
            sweep: None,
            eta: 1.0,
            output_dir: dir.clone(),
        };
        let run_once = || {
            let summary = run(&config).unwrap();
            assert!(summary.failed.is_none());
            (
                fs::read(dir.join("report.json")).unwrap(),
                fs::read(dir.join("series.csv")).unwrap(),
                fs::read(dir.join("manifest.json")).unwrap(),
            )
        };
        let (r1, s1, m1) = run_once();
        let (r2, s2, m2) = run_once();
        assert_eq!(r1, r2, "report.json must be byte-identical");
        assert_eq!(s1, s2, "series.csv must be byte-identical");
        assert_eq!(m1, m2, "manifest.json must be byte-identical");
        let manifest: serde_json::Value = serde_json::from_slice(&m1).unwrap();
        assert!(manifest["files"].as_array().unwrap().len() >= 2);
        assert!(manifest["calibration_c"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn decompose_scenario_reports_reconstruction() {
        let dir = outdir("dec");
        let config = ExperimentConfig {
            scenario: Scenario::Decompose,
            grid: GridConfig { r_max: 32.0, n: 512 },
            data: TestFunctionSpec::power_tail(2.0, 1.0),
            params: ParamsConfig::default(),
            solver: None,
            sweep: None,
            eta: 1.0,
            output_dir: dir.clone(),
        };
        let summary = run(&config).unwrap();
        assert!(summary.failed.is_none());
        let report: serde_json::Value =
            serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap();
        assert!(report["reconstruction_error"].as_f64().unwrap() < 1e-10);
        assert!(report["pass"].as_bool().unwrap());
        // snapshots present and readable
        let (f_out, _, role) =
            crate::snapshot::read_radial_snapshot(&dir.join("snapshots/f_out")).unwrap();
        assert_eq!(role, "f_out");
        assert_eq!(f_out.n(), 512);
    }
}
