//! Command-line entry point:
//!
//!   radialnls <scenario> --config <path> [--out <dir>] [--dt <x>] [--t-end <x>]
//!
//! Scenarios: kernels, decompose, linear-sweep, evolve, scatter, check.
//! Exit codes: 0 success, 1 runtime failure, 2 config error, 3 infeasible
//! precondition. Failures print a single-line machine-readable JSON object.

use std::process::ExitCode;

use radialnls::config::{ExperimentConfig, Scenario};
use radialnls::error::Error;
use radialnls::report::json_string;
use radialnls::scenario;

struct Args {
    scenario: String,
    config_path: String,
    out: Option<String>,
    dt: Option<f64>,
    t_end: Option<f64>,
}

const USAGE: &str = "usage: radialnls <scenario> --config <path> [--out <dir>] [--dt <x>] [--t-end <x>]
scenarios: kernels | decompose | linear-sweep | evolve | scatter | check";

fn parse_args(argv: &[String]) -> Result<Args, String> {
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" {
        return Err(USAGE.to_string());
    }
    let scenario = argv[0].clone();
    let mut config_path = None;
    let mut out = None;
    let mut dt = None;
    let mut t_end = None;
    let mut i = 1;
    while i < argv.len() {
        let flag = argv[i].as_str();
        let value = argv
            .get(i + 1)
            .ok_or_else(|| format!("flag {flag} needs a value\n{USAGE}"))?;
        match flag {
            "--config" => config_path = Some(value.clone()),
            "--out" => out = Some(value.clone()),
            "--dt" => dt = Some(value.parse().map_err(|e| format!("bad --dt: {e}"))?),
            "--t-end" => t_end = Some(value.parse().map_err(|e| format!("bad --t-end: {e}"))?),
            other => return Err(format!("unknown flag {other}\n{USAGE}")),
        }
        i += 2;
    }
    Ok(Args {
        scenario,
        config_path: config_path.ok_or_else(|| format!("--config is required\n{USAGE}"))?,
        out,
        dt,
        t_end,
    })
}

fn error_exit(kind: &str, message: &str, code: u8) -> ExitCode {
    println!(
        "{{\"error\":{},\"kind\":{},\"exit\":{}}}",
        json_string(message),
        json_string(kind),
        code
    );
    ExitCode::from(code)
}

fn classify(err: &Error) -> (&'static str, u8) {
    match err {
        Error::Config(_) => ("config", 2),
        Error::Precondition(_) | Error::Infeasible { .. } => ("infeasible", 3),
        Error::Domain(_) => ("config", 2),
        _ => ("runtime", 1),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let scenario = match Scenario::parse(&args.scenario) {
        Ok(s) => s,
        Err(e) => return error_exit("config", &e.to_string(), 2),
    };
    let text = match std::fs::read_to_string(&args.config_path) {
        Ok(t) => t,
        Err(e) => {
            return error_exit("config", &format!("cannot read {}: {e}", args.config_path), 2)
        }
    };
    let mut config = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return error_exit("config", &e.to_string(), 2),
    };
    if config.scenario != scenario {
        return error_exit(
            "config",
            &format!(
                "scenario argument `{}` does not match config scenario `{}`",
                scenario.name(),
                config.scenario.name()
            ),
            2,
        );
    }
    if let Some(out) = args.out {
        config.output_dir = out.into();
    }
    if let Some(dt) = args.dt {
        match config.solver.as_mut() {
            Some(s) => s.dt = dt,
            None => return error_exit("config", "--dt given but the config has no solver block", 2),
        }
    }
    if let Some(t_end) = args.t_end {
        match config.solver.as_mut() {
            Some(s) => s.t_end = t_end,
            None => {
                return error_exit("config", "--t-end given but the config has no solver block", 2)
            }
        }
    }
    match scenario::run(&config) {
        Ok(summary) => match summary.failed {
            None => ExitCode::SUCCESS,
            Some(reason) => error_exit("runtime", &reason, 1),
        },
        Err(err) => {
            let (kind, code) = classify(&err);
            error_exit(kind, &err.to_string(), code)
        }
    }
}
