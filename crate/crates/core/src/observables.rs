//! Local density diagnostics of BdG eigenstates.
//!
//! For the site spinor `(α_p, α_h)` of site `n`:
//! `ρ = |α_p|² + |α_h|²`, `τz = |α_p|² − |α_h|²`, `τx = 2 Re(α_p* α_h)`,
//! `τy = 2 Im(α_p* α_h)`. With this `τy`, the onsite pairing expectation at
//! phase φ is `Δ₀ (τx cos φ − τy sin φ)`.

use std::io::Write;

use serde::Serialize;

use crate::bdg::C64;
use crate::error::{Error, Result};
use crate::lattice::{DeviceSpec, SiteId};
use crate::sweep::SweepResult;

/// Site spinor expectation values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SiteDensity {
    pub rho: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

impl SiteDensity {
    pub fn from_spinor(p: C64, h: C64) -> Self {
        let z = p.conj() * h;
        SiteDensity {
            rho: p.norm_sqr() + h.norm_sqr(),
            tx: 2.0 * z.re,
            ty: 2.0 * z.im,
            tz: p.norm_sqr() - h.norm_sqr(),
        }
    }

    /// `|τ|² − ρ²`, zero for any spinor.
    pub fn bloch_defect(&self) -> f64 {
        (self.tx * self.tx + self.ty * self.ty + self.tz * self.tz - self.rho * self.rho).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDensityField {
    pub sites: Vec<SiteDensity>,
}

impl LocalDensityField {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn total_rho(&self) -> f64 {
        self.sites.iter().map(|s| s.rho).sum()
    }

    pub fn max_bloch_defect(&self) -> f64 {
        self.sites.iter().map(SiteDensity::bloch_defect).fold(0.0, f64::max)
    }

    /// Summed weight on a set of sites.
    pub fn weight_on(&self, sites: &[SiteId]) -> f64 {
        sites.iter().map(|&s| self.sites[s].rho).sum()
    }

    /// `1 / Σ ρ²`: about the number of sites the state occupies.
    pub fn participation_ratio(&self) -> f64 {
        let s: f64 = self.sites.iter().map(|d| d.rho * d.rho).sum();
        if s > 0.0 {
            self.total_rho().powi(2) / s
        } else {
            0.0
        }
    }
}

pub fn local_densities(state: &[C64], spec: &DeviceSpec) -> Result<LocalDensityField> {
    let n = spec.n_sites();
    if state.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            actual: state.len(),
        });
    }
    Ok(LocalDensityField {
        sites: (0..n)
            .map(|s| SiteDensity::from_spinor(state[2 * s], state[2 * s + 1]))
            .collect(),
    })
}

/// `Σ_n τz_n`: particle minus hole weight of the state.
pub fn total_charge(field: &LocalDensityField) -> f64 {
    field.sites.iter().map(|s| s.tz).sum()
}

/// Where a state sits: its participation ratio and its weight on a window
/// of sites (typically a chain edge).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Localization {
    pub participation_ratio: f64,
    pub window_weight: f64,
}

pub fn localization(field: &LocalDensityField, window: &[SiteId]) -> Localization {
    Localization {
        participation_ratio: field.participation_ratio(),
        window_weight: field.weight_on(window),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrbitPoint {
    pub phi: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

/// `(τx, τy, τz)` of one site along a tracked branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitTrace {
    pub site: SiteId,
    pub points: Vec<OrbitPoint>,
}

impl OrbitTrace {
    /// Distance between the first and last point.
    pub fn closure_defect(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => ((a.tx - b.tx).powi(2) + (a.ty - b.ty).powi(2) + (a.tz - b.tz).powi(2)).sqrt(),
            _ => 0.0,
        }
    }

    /// Largest distance of any point from the first.
    pub fn extent(&self) -> f64 {
        let Some(a) = self.points.first() else { return 0.0 };
        self.points
            .iter()
            .map(|b| ((a.tx - b.tx).powi(2) + (a.ty - b.ty).powi(2) + (a.tz - b.tz).powi(2)).sqrt())
            .fold(0.0, f64::max)
    }

    /// Columns `phi_rad,tx,ty,tz`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "phi_rad,tx,ty,tz")?;
        for p in &self.points {
            writeln!(w, "{:.12e},{:.12e},{:.12e},{:.12e}", p.phi, p.tx, p.ty, p.tz)?;
        }
        Ok(())
    }
}

pub fn orbit_trace(result: &SweepResult, branch: usize, site: SiteId) -> Result<OrbitTrace> {
    let curve = result
        .curves
        .get(branch)
        .ok_or_else(|| Error::InvalidSweep(format!("no branch {branch}")))?;
    let mut points = Vec::with_capacity(curve.points.len());
    for p in &curve.points {
        let v = result.state(p);
        if 2 * site + 1 >= v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len() / 2,
                actual: site + 1,
            });
        }
        let d = SiteDensity::from_spinor(v[2 * site], v[2 * site + 1]);
        points.push(OrbitPoint {
            phi: p.phi,
            tx: d.tx,
            ty: d.ty,
            tz: d.tz,
        });
    }
    Ok(OrbitTrace { site, points })
}

/// Densities of every point of a branch. The device is rebuilt per φ only
/// for its site count, so the sweep's family must not change size with φ.
pub fn branch_densities(result: &SweepResult, branch: usize) -> Result<Vec<(f64, LocalDensityField)>> {
    let curve = result
        .curves
        .get(branch)
        .ok_or_else(|| Error::InvalidSweep(format!("no branch {branch}")))?;
    let spec = result.config.family.build(result.config.swept, 0.0)?;
    curve
        .points
        .iter()
        .map(|p| Ok((p.phi, local_densities(result.state(p), &spec)?)))
        .collect()
}

/// Columns `phi_rad,site,rho,tx,ty,tz`.
pub fn write_densities_csv<W: Write>(mut w: W, rows: &[(f64, LocalDensityField)]) -> std::io::Result<()> {
    writeln!(w, "phi_rad,site,rho,tx,ty,tz")?;
    for (phi, field) in rows {
        for (n, d) in field.sites.iter().enumerate() {
            writeln!(
                w,
                "{:.12e},{},{:.12e},{:.12e},{:.12e},{:.12e}",
                phi, n, d.rho, d.tx, d.ty, d.tz
            )?;
        }
    }
    Ok(())
}
