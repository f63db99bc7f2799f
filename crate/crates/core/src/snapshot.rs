//! Field snapshot files: flat little-endian f64 (Re, Im) pairs in node order
//! plus a JSON sidecar carrying the grid geometry, timestamp, and role.
//! Round-trips are bit-exact; the sidecar floats are printed at 17
//! significant digits so they parse back to the same bits.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{RadialField, RadialGrid, SpectralField};
use crate::report::{fmt_f64, json_string};

fn values_to_bytes(values: &[Complex64]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(values.len() * 16);
    for v in values {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    bytes
}

fn values_from_bytes(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if bytes.len() % 16 != 0 {
        return Err(Error::config(format!(
            "snapshot payload length {} is not a multiple of 16",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[0..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..16].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

fn sidecar(n: usize, dr: f64, t: f64, role: &str, domain: &str) -> String {
    format!(
        "{{\"n\":{n},\"dr\":{},\"t\":{},\"role\":{},\"domain\":{}}}\n",
        fmt_f64(dr),
        fmt_f64(t),
        json_string(role),
        json_string(domain)
    )
}

struct Sidecar {
    n: usize,
    dr: f64,
    t: f64,
    role: String,
    domain: String,
}

fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("bad snapshot sidecar {}: {e}", path.display())))?;
    let field = |k: &str| {
        v.get(k)
            .cloned()
            .ok_or_else(|| Error::config(format!("sidecar {} missing key {k}", path.display())))
    };
    Ok(Sidecar {
        n: field("n")?
            .as_u64()
            .ok_or_else(|| Error::config("sidecar n must be an integer".to_string()))? as usize,
        dr: field("dr")?
            .as_f64()
            .ok_or_else(|| Error::config("sidecar dr must be a number".to_string()))?,
        t: field("t")?
            .as_f64()
            .ok_or_else(|| Error::config("sidecar t must be a number".to_string()))?,
        role: field("role")?.as_str().unwrap_or_default().to_string(),
        domain: field("domain")?.as_str().unwrap_or_default().to_string(),
    })
}

/// Write `<base>.bin` and `<base>.json` for a radial field.
pub fn write_radial_snapshot(base: &Path, f: &RadialField, t: f64, role: &str) -> Result<()> {
    fs::write(base.with_extension("bin"), values_to_bytes(&f.values))?;
    fs::write(
        base.with_extension("json"),
        sidecar(f.n(), f.grid.dr(), t, role, "radial"),
    )?;
    Ok(())
}

pub fn read_radial_snapshot(base: &Path) -> Result<(RadialField, f64, String)> {
    let side = read_sidecar(&base.with_extension("json"))?;
    if side.domain != "radial" {
        return Err(Error::config(format!("expected radial snapshot, got {}", side.domain)));
    }
    let values = values_from_bytes(&fs::read(base.with_extension("bin"))?)?;
    if values.len() != side.n {
        return Err(Error::config(format!(
            "snapshot payload has {} nodes, sidecar says {}",
            values.len(),
            side.n
        )));
    }
    let grid = RadialGrid::new(side.dr * side.n as f64, side.n)?;
    Ok((RadialField::new(grid, values)?, side.t, side.role))
}

/// Write `<base>.bin` and `<base>.json` for a spectral field
/// (same layout, sidecar `dr` carries dρ and domain is "frequency").
pub fn write_spectral_snapshot(base: &Path, f: &SpectralField, t: f64, role: &str) -> Result<()> {
    fs::write(base.with_extension("bin"), values_to_bytes(&f.values))?;
    fs::write(
        base.with_extension("json"),
        sidecar(f.n(), f.drho, t, role, "frequency"),
    )?;
    Ok(())
}

pub fn read_spectral_snapshot(base: &Path) -> Result<(SpectralField, f64, String)> {
    let side = read_sidecar(&base.with_extension("json"))?;
    if side.domain != "frequency" {
        return Err(Error::config(format!("expected frequency snapshot, got {}", side.domain)));
    }
    let values = values_from_bytes(&fs::read(base.with_extension("bin"))?)?;
    if values.len() != side.n {
        return Err(Error::config(format!(
            "snapshot payload has {} nodes, sidecar says {}",
            values.len(),
            side.n
        )));
    }
    let drho = side.dr;
    Ok((
        SpectralField { rho_max: drho * side.n as f64, drho, values },
        side.t,
        side.role,
    ))
}
