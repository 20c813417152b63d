//! Bulk bands of each region model and the gap edge used to decide which
//! finite-device states are in-gap.
//!
//! The 2×2 Bloch block is not written down per model: it is read off a
//! three-site chain assembled by [`crate::bdg`], so the momentum-space and
//! real-space conventions cannot drift apart. With `O` the onsite block and
//! `B` the block at `n+1 ← n`, `h(k) = O + B e^{−ik} + B† e^{ik}`.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::bdg::{assemble_with, Block, OnsiteConvention, C64};
use crate::error::Result;
use crate::lattice::{DeviceSpec, RegionKind, RegionModel, Site};

/// In-gap margin: a state is in-gap iff `|E| < gap_edge − GAP_MARGIN`.
pub const GAP_MARGIN: f64 = 1e-6;

fn chain(region: &RegionModel, n: usize, periodic: bool) -> DeviceSpec {
    let mut spec = DeviceSpec {
        regions: vec![region.clone()],
        ..Default::default()
    };
    for i in 0..n {
        spec.sites.push(Site {
            region: 0,
            coord: (0, i as i32),
        });
        if i + 1 < n {
            spec.bonds.push((i, i + 1));
        }
    }
    if periodic && n > 2 {
        spec.bonds.push((n - 1, 0));
    }
    spec
}

/// Uniform open chain of `n` sites of one region.
pub fn open_chain(region: &RegionModel, n: usize) -> DeviceSpec {
    chain(region, n, false)
}

/// Uniform chain of `n` sites closed into a ring.
pub fn periodic_ring(region: &RegionModel, n: usize) -> DeviceSpec {
    chain(region, n, true)
}

/// Onsite and forward-bond blocks of a region, as the assembler builds them.
pub fn stencil(region: &RegionModel, convention: OnsiteConvention) -> Result<(Block, Block)> {
    let h = assemble_with(&open_chain(region, 3), convention)?;
    Ok((h.block(1, 1), h.block(2, 1)))
}

pub fn bloch_block(region: &RegionModel, k: f64) -> Result<Block> {
    bloch_block_with(region, k, OnsiteConvention::default())
}

pub fn bloch_block_with(region: &RegionModel, k: f64, convention: OnsiteConvention) -> Result<Block> {
    let (o, b) = stencil(region, convention)?;
    Ok(bloch_from_stencil(&o, &b, k))
}

fn bloch_from_stencil(o: &Block, b: &Block, k: f64) -> Block {
    let back = C64::from_polar(1.0, -k);
    let fwd = C64::from_polar(1.0, k);
    let mut h = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            h[i][j] = o[i][j] + b[i][j] * back + b[j][i].conj() * fwd;
        }
    }
    h
}

/// Eigenvalues `(lower, upper)` of a 2×2 Hermitian block.
pub fn block_eigenvalues(h: &Block) -> (f64, f64) {
    let a = h[0][0].re;
    let d = h[1][1].re;
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + h[0][1].norm_sqr()).sqrt();
    (mean - r, mean + r)
}

#[derive(Clone, Debug, Serialize)]
pub struct BulkBands {
    pub k_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// `min_k |E(k)|`, refined between grid points.
    pub gap_edge: f64,
}

impl BulkBands {
    /// Columns `k,E_minus,E_plus`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,E_minus,E_plus")?;
        for i in 0..self.k_grid.len() {
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e}",
                self.k_grid[i], self.lower[i], self.upper[i]
            )?;
        }
        Ok(())
    }
}

/// Bands on `n_k` uniform points of `[−π, π]`.
pub fn bulk_bands(region: &RegionModel, n_k: usize) -> Result<BulkBands> {
    bulk_bands_with(region, n_k, OnsiteConvention::default())
}

pub fn bulk_bands_with(region: &RegionModel, n_k: usize, convention: OnsiteConvention) -> Result<BulkBands> {
    let n_k = n_k.max(16);
    let (o, b) = stencil(region, convention)?;
    let k_grid: Vec<f64> = (0..n_k).map(|i| -PI + 2.0 * PI * i as f64 / (n_k - 1) as f64).collect();
    let (lower, upper): (Vec<f64>, Vec<f64>) = k_grid
        .iter()
        .map(|&k| block_eigenvalues(&bloch_from_stencil(&o, &b, k)))
        .unzip();

    let gap_at = |k: f64| {
        let (lo, hi) = block_eigenvalues(&bloch_from_stencil(&o, &b, k));
        lo.abs().min(hi.abs())
    };
    let (best, _) = k_grid
        .iter()
        .enumerate()
        .map(|(i, &k)| (i, gap_at(k)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let step = 2.0 * PI / (n_k - 1) as f64;
    let refined = golden_min(gap_at, k_grid[best] - step, k_grid[best] + step);
    let gap_edge = refined.min(gap_at(k_grid[best]));
    Ok(BulkBands {
        k_grid,
        lower,
        upper,
        gap_edge,
    })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

/// Smallest bulk gap over the device's regions, optionally restricted to
/// regions of one kind.
pub fn device_gap_edge(spec: &DeviceSpec, only: Option<RegionKind>) -> Result<f64> {
    let mut gap = f64::INFINITY;
    for region in &spec.regions {
        if only.is_some_and(|k| k != region.kind) {
            continue;
        }
        gap = gap.min(bulk_bands(region, 512)?.gap_edge);
    }
    Ok(gap)
}
