//! Phase sweeps: rediagonalize a device over a uniform grid of one phase
//! variable, keep the in-gap eigenpairs, and thread them into continuous
//! `E(φ)` branches.
//!
//! Threading matches states at neighbouring grid points by eigenvector
//! overlap (greedy bipartite matching on `|⟨v_i(φ_j), v_k(φ_{j+1})⟩|`), not
//! by energy rank, so branches stay intact through level crossings.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bdg::{assemble, C64};
use crate::bulk::{device_gap_edge, GAP_MARGIN};
use crate::eigen::{eig_hermitian, eig_hermitian_window, inner, EigenSolution};
use crate::error::{Error, Result};
use crate::lattice::{
    build_msq, build_sc_sc, build_sc_tsc, build_tsc_tsc_with_junction, DeviceSpec, MsqGeometry, MsqParams, RegionKind,
};

/// Minimum overlap for two states at neighbouring grid points to belong to
/// the same branch.
pub const MIN_OVERLAP: f64 = 0.5;

/// Matrices up to this dimension are fully diagonalized; larger ones use
/// the windowed solver.
pub const FULL_SOLVE_MAX_DIM: usize = 600;

/// Default number of grid points over `[0, 2π]`.
pub const DEFAULT_N_PHI: usize = 128;

/// Energies below this are treated as exact zeros when counting crossings.
pub const ZERO_NOISE: f64 = 1e-9;

/// Which phase the sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweptPhase {
    /// Junction phase φ (right host in SC-SC, TSC-TSC and MSQ; the s-wave
    /// side in SC-TSC).
    Phi,
    /// MSQ wire island phase.
    Phi1,
    /// MSQ bar island phase.
    Phi2,
}

/// A device family with every parameter fixed except the swept phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DeviceFamily {
    ScSc {
        n: usize,
        mu: f64,
        t: f64,
        delta0: f64,
        v_junction: f64,
    },
    ScTsc {
        n: usize,
        mu: f64,
        t: f64,
        delta0: f64,
        v_c: f64,
    },
    TscTsc {
        n: usize,
        mu_left: f64,
        mu_right: f64,
        t: f64,
        delta0: f64,
        v_junction: f64,
    },
    Msq {
        phi: f64,
        phi1: f64,
        phi2: f64,
        gates: [f64; 6],
        geometry: MsqGeometry,
        params: MsqParams,
    },
    /// Arbitrary device; the swept phase is that of region `region`.
    Custom { spec: DeviceSpec, region: usize },
}

impl DeviceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DeviceFamily::ScSc { .. } => "sc_sc",
            DeviceFamily::ScTsc { .. } => "sc_tsc",
            DeviceFamily::TscTsc { .. } => "tsc_tsc",
            DeviceFamily::Msq { .. } => "msq",
            DeviceFamily::Custom { .. } => "custom",
        }
    }

    /// Builds the device with the swept phase set to `value`.
    pub fn build(&self, swept: SweptPhase, value: f64) -> Result<DeviceSpec> {
        if !matches!(self, DeviceFamily::Msq { .. }) && swept != SweptPhase::Phi {
            return Err(Error::InvalidSweep(format!(
                "{swept:?} is only defined for the MSQ family"
            )));
        }
        match self {
            &DeviceFamily::ScSc {
                n,
                mu,
                t,
                delta0,
                v_junction,
            } => build_sc_sc(n, mu, t, delta0, value, v_junction),
            &DeviceFamily::ScTsc { n, mu, t, delta0, v_c } => build_sc_tsc(n, mu, t, delta0, value, v_c),
            &DeviceFamily::TscTsc {
                n,
                mu_left,
                mu_right,
                t,
                delta0,
                v_junction,
            } => build_tsc_tsc_with_junction(n, mu_left, mu_right, t, delta0, value, v_junction),
            DeviceFamily::Msq {
                phi,
                phi1,
                phi2,
                gates,
                geometry,
                params,
            } => {
                let (mut a, mut b, mut c) = (*phi, *phi1, *phi2);
                match swept {
                    SweptPhase::Phi => a = value,
                    SweptPhase::Phi1 => b = value,
                    SweptPhase::Phi2 => c = value,
                }
                build_msq(a, b, c, gates, geometry, *params)
            }
            DeviceFamily::Custom { spec, region } => {
                if *region >= spec.regions.len() {
                    return Err(Error::InvalidSweep(format!("region index {region} out of range")));
                }
                Ok(spec.with_region_phase(*region, value))
            }
        }
    }

    /// Gap edge used for in-gap classification: the smallest bulk gap over
    /// the device's regions. For MSQ that is the island gap, which lies
    /// below the gap of the 1D model of the s-wave hosts.
    pub fn gap_edge(&self) -> Result<f64> {
        device_gap_edge(&self.build(SweptPhase::Phi, 0.0)?, None)
    }
}

/// Restricts each grid point to the states with the most weight on a set of
/// sites (used to pick the island-bound states of the MSQ device).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFilter {
    pub sites: Vec<usize>,
    /// Number of states kept per grid point.
    pub keep: usize,
    /// States with less summed weight than this are dropped first.
    pub min_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: DeviceFamily,
    pub swept: SweptPhase,
    pub n_phi: usize,
    pub track: bool,
    /// Overrides the bulk gap edge.
    pub gap_edge: Option<f64>,
    pub filter: Option<WeightFilter>,
}

impl SweepConfig {
    pub fn new(family: DeviceFamily) -> Self {
        SweepConfig {
            family,
            swept: SweptPhase::Phi,
            n_phi: DEFAULT_N_PHI,
            track: true,
            gap_edge: None,
            filter: None,
        }
    }

    pub fn with_n_phi(mut self, n_phi: usize) -> Self {
        self.n_phi = n_phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_phi < 16 {
            return Err(Error::InvalidSweep(format!(
                "n_phi must be at least 16, got {}",
                self.n_phi
            )));
        }
        self.family.build(self.swept, 0.0)?;
        Ok(())
    }

    /// `n_phi` points covering `[0, 2π]` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        phase_grid(self.n_phi)
    }
}

pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / (n - 1) as f64).collect()
}

/// In-gap eigenpairs at one grid point.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub phi: f64,
    /// Ascending in-gap energies.
    pub energies: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub max_residual: f64,
    /// Smallest and largest eigenvalue of the whole spectrum closest to the
    /// gap, for diagnostics.
    pub spectrum_symmetry_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub grid_index: usize,
    pub phi: f64,
    pub energy: f64,
    /// Index into the snapshot's states.
    pub state: usize,
    /// Overlap with the previous point (1 for the first point).
    pub overlap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundStateCurve {
    pub branch_id: usize,
    pub points: Vec<CurvePoint>,
    /// True when the branch does not cover the whole grid.
    pub truncated: bool,
}

impl BoundStateCurve {
    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.energy).sum::<f64>() / self.points.len() as f64
    }

    /// `max E − min E`.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.energy), hi.max(p.energy))
            });
        hi - lo
    }

    pub fn min_overlap(&self) -> f64 {
        self.points.iter().map(|p| p.overlap).fold(1.0, f64::min)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.energy).collect()
    }

    /// Grid phases where the branch changes sign (linear interpolation).
    /// Sign flips of a branch pinned at zero (both ends below
    /// [`ZERO_NOISE`]) are rounding noise and are skipped.
    pub fn zero_crossings(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .filter(|w| w[0].energy != 0.0 && w[0].energy.signum() != w[1].energy.signum())
            .filter(|w| w[0].energy.abs().max(w[1].energy.abs()) > ZERO_NOISE)
            .map(|w| {
                let (e0, e1) = (w[0].energy, w[1].energy);
                w[0].phi + (w[1].phi - w[0].phi) * e0 / (e0 - e1)
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub gap_edge: f64,
    pub snapshots: Vec<Snapshot>,
    /// Ordered by mean energy; `branch_id` is the position.
    pub curves: Vec<BoundStateCurve>,
}

impl SweepResult {
    pub fn state(&self, point: &CurvePoint) -> &[C64] {
        &self.snapshots[point.grid_index].states[point.state]
    }

    /// For every full-length branch, the branch whose first state best
    /// matches this branch's last state (`None` for truncated branches).
    /// The Hamiltonian at φ = 2π equals the one at φ = 0, so any entry that
    /// is not the identity is a branch exchange.
    pub fn closure_permutation(&self) -> Vec<Option<usize>> {
        let n = self.snapshots.len();
        self.curves
            .iter()
            .map(|c| {
                if c.truncated || c.points.len() != n {
                    return None;
                }
                let end = self.state(c.points.last().unwrap());
                self.curves
                    .iter()
                    .filter(|o| !o.truncated && o.points[0].grid_index == 0)
                    .map(|o| (o.branch_id, inner(self.state(&o.points[0]), end).norm()))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(id, _)| id)
            })
            .collect()
    }

    /// Branches whose end state is not their own start state.
    pub fn exchanged_branches(&self) -> Vec<usize> {
        self.closure_permutation()
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.filter(|&j| j != i).map(|_| i))
            .collect()
    }

    /// Columns `phi_rad,branch_id,energy_ev,overlap_score`.
    pub fn write_curves_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "phi_rad,branch_id,energy_ev,overlap_score")?;
        for c in &self.curves {
            for p in &c.points {
                writeln!(w, "{:.12e},{},{:.12e},{:.12e}", p.phi, c.branch_id, p.energy, p.overlap)?;
            }
        }
        Ok(())
    }
}

/// Indices `k` with `|E_k| < gap_edge − GAP_MARGIN`.
pub fn classify_in_gap(sol: &EigenSolution, gap_edge: f64) -> Vec<usize> {
    classify_values(&sol.values, gap_edge)
}

fn classify_values(values: &[f64], gap_edge: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() < gap_edge - GAP_MARGIN)
        .map(|(k, _)| k)
        .collect()
}

fn spectrum_symmetry(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n)
        .map(|k| (values[k] + values[n - 1 - k]).abs())
        .fold(0.0, f64::max)
}

/// In-gap eigenpairs of a device.
pub fn in_gap_states(spec: &DeviceSpec, gap_edge: f64) -> Result<Snapshot> {
    let h = assemble(spec)?;
    let limit = gap_edge - GAP_MARGIN;
    let (values, sol, spectrum_defect) = if h.dim() <= FULL_SOLVE_MAX_DIM {
        let sol = eig_hermitian(&h)?;
        let idx = classify_in_gap(&sol, gap_edge);
        let defect = spectrum_symmetry(&sol.values);
        (
            idx.iter().map(|&k| sol.values[k]).collect::<Vec<_>>(),
            sol.select(&idx),
            defect,
        )
    } else {
        let win = eig_hermitian_window(&h, -limit, limit)?;
        let defect = spectrum_symmetry(&win.spectrum);
        let idx = classify_in_gap(&win.selected, gap_edge);
        (
            idx.iter().map(|&k| win.selected.values[k]).collect(),
            win.selected.select(&idx),
            defect,
        )
    };
    Ok(Snapshot {
        phi: f64::NAN,
        energies: values,
        states: sol.vectors().to_vec(),
        max_residual: sol.max_residual,
        spectrum_symmetry_defect: spectrum_defect,
    })
}

fn apply_filter(snap: &mut Snapshot, filter: &WeightFilter) {
    let weight = |v: &[C64]| -> f64 {
        filter
            .sites
            .iter()
            .map(|&s| v[2 * s].norm_sqr() + v[2 * s + 1].norm_sqr())
            .sum()
    };
    let mut ranked: Vec<(usize, f64)> = snap
        .states
        .iter()
        .enumerate()
        .map(|(k, v)| (k, weight(v)))
        .filter(|(_, w)| *w >= filter.min_weight)
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut keep: Vec<usize> = ranked.iter().take(filter.keep).map(|(k, _)| *k).collect();
    keep.sort_unstable();
    snap.energies = keep.iter().map(|&k| snap.energies[k]).collect();
    snap.states = keep.iter().map(|&k| snap.states[k].clone()).collect();
}

/// Runs the sweep. Grid points are diagonalized in parallel; threading is a
/// sequential pass, so results do not depend on the thread count.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let gap_edge = match config.gap_edge {
        Some(g) => g,
        None => config.family.gap_edge()?,
    };
    let grid = config.grid();
    let snapshots: Vec<Snapshot> = grid
        .par_iter()
        .map(|&phi| {
            let spec = config.family.build(config.swept, phi)?;
            let mut snap = in_gap_states(&spec, gap_edge)?;
            snap.phi = phi;
            if let Some(f) = &config.filter {
                apply_filter(&mut snap, f);
            }
            Ok(snap)
        })
        .collect::<Result<_>>()?;
    let mut snapshots = snapshots;
    if config.track {
        for g in 1..snapshots.len() {
            let (done, rest) = snapshots.split_at_mut(g);
            align_degenerate(&done[g - 1].states, &mut rest[0], DEGENERACY_TOL);
        }
    }
    let curves = thread_branches(&snapshots, config.track);
    Ok(SweepResult {
        config: config.clone(),
        gap_edge,
        snapshots,
        curves,
    })
}

/// States closer in energy than this are treated as one degenerate subspace.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Picks the basis of each degenerate cluster of `snap` that best continues
/// `prev`: previous states are projected onto the cluster and
/// orthonormalized, largest projection first. Any basis of a degenerate
/// subspace is equally valid, but the solver returns an arbitrary one.
pub fn align_degenerate(prev: &[Vec<C64>], snap: &mut Snapshot, tol: f64) {
    let n = snap.energies.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && snap.energies[end] - snap.energies[end - 1] < tol {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec<C64>> = snap.states[start..end].to_vec();
            let project = |p: &[C64]| -> Vec<C64> {
                let mut q = vec![C64::new(0.0, 0.0); p.len()];
                for v in &cluster {
                    let c = inner(v, p);
                    for (qi, vi) in q.iter_mut().zip(v) {
                        *qi += vi * c;
                    }
                }
                q
            };
            let mut candidates: Vec<Vec<C64>> = prev.iter().map(|p| project(p)).collect();
            candidates.sort_by(|a, b| norm(b).total_cmp(&norm(a)));
            candidates.extend(cluster.iter().cloned());
            let mut basis: Vec<Vec<C64>> = Vec::with_capacity(end - start);
            for mut c in candidates {
                if basis.len() == end - start {
                    break;
                }
                for b in &basis {
                    let o = inner(b, &c);
                    for (ci, bi) in c.iter_mut().zip(b) {
                        *ci -= bi * o;
                    }
                }
                let nc = norm(&c);
                if nc > 1e-3 {
                    basis.push(c.into_iter().map(|x| x / nc).collect());
                }
            }
            if basis.len() == end - start {
                for (k, b) in basis.into_iter().enumerate() {
                    snap.states[start + k] = b;
                }
            }
        }
        start = end;
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Greedy maximum-overlap matching between two state sets. Returns
/// `(prev, cur, overlap)` triples with overlap ≥ `threshold`.
pub fn match_states(prev: &[Vec<C64>], cur: &[Vec<C64>], threshold: f64) -> Vec<(usize, usize, f64)> {
    let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(prev.len() * cur.len());
    for (i, p) in prev.iter().enumerate() {
        for (j, c) in cur.iter().enumerate() {
            pairs.push((i, j, inner(p, c).norm()));
        }
    }
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut used_prev = vec![false; prev.len()];
    let mut used_cur = vec![false; cur.len()];
    let mut out = Vec::new();
    for (i, j, o) in pairs {
        if o < threshold {
            break;
        }
        if !used_prev[i] && !used_cur[j] {
            used_prev[i] = true;
            used_cur[j] = true;
            out.push((i, j, o));
        }
    }
    out
}

fn thread_branches(snapshots: &[Snapshot], track: bool) -> Vec<BoundStateCurve> {
    struct Open {
        points: Vec<CurvePoint>,
    }
    let n = snapshots.len();
    let mut finished: Vec<Vec<CurvePoint>> = Vec::new();
    let mut open: Vec<Open> = Vec::new();
    // open[b] currently ends at state `tail[b]` of the previous snapshot
    let mut tail: Vec<usize> = Vec::new();

    for (g, snap) in snapshots.iter().enumerate() {
        if g == 0 {
            for (k, &e) in snap.energies.iter().enumerate() {
                open.push(Open {
                    points: vec![CurvePoint {
                        grid_index: 0,
                        phi: snap.phi,
                        energy: e,
                        state: k,
                        overlap: 1.0,
                    }],
                });
                tail.push(k);
            }
            continue;
        }
        let prev = &snapshots[g - 1];
        let links: Vec<(usize, usize, f64)> = if track {
            match_states(&prev.states, &snap.states, MIN_OVERLAP)
        } else if prev.states.len() == snap.states.len() {
            (0..snap.states.len())
                .map(|k| (k, k, inner(&prev.states[k], &snap.states[k]).norm()))
                .collect()
        } else {
            Vec::new()
        };

        let mut next_open = Vec::new();
        let mut next_tail = Vec::new();
        let mut cur_taken = vec![false; snap.energies.len()];
        for (b, branch) in open.into_iter().enumerate() {
            let link = links.iter().find(|l| l.0 == tail[b]);
            match link {
                Some(&(_, j, o)) => {
                    let mut branch = branch;
                    branch.points.push(CurvePoint {
                        grid_index: g,
                        phi: snap.phi,
                        energy: snap.energies[j],
                        state: j,
                        overlap: o,
                    });
                    cur_taken[j] = true;
                    next_open.push(branch);
                    next_tail.push(j);
                }
                None => finished.push(branch.points),
            }
        }
        for (k, &e) in snap.energies.iter().enumerate() {
            if !cur_taken[k] {
                next_open.push(Open {
                    points: vec![CurvePoint {
                        grid_index: g,
                        phi: snap.phi,
                        energy: e,
                        state: k,
                        overlap: 1.0,
                    }],
                });
                next_tail.push(k);
            }
        }
        open = next_open;
        tail = next_tail;
    }
    finished.extend(open.into_iter().map(|o| o.points));

    let mut curves: Vec<BoundStateCurve> = finished
        .into_iter()
        .map(|points| BoundStateCurve {
            branch_id: 0,
            truncated: points.len() != n,
            points,
        })
        .collect();
    curves.sort_by(|a, b| {
        a.mean_energy()
            .total_cmp(&b.mean_energy())
            .then(a.points[0].grid_index.cmp(&b.points[0].grid_index))
            .then(a.points[0].state.cmp(&b.points[0].state))
    });
    for (i, c) in curves.iter_mut().enumerate() {
        c.branch_id = i;
    }
    curves
}

/// Refines each sign change of `branch` to an interval narrower than `tol`
/// by bisection, following the branch through eigenvector overlap.
pub fn refine_zero_crossings(result: &SweepResult, branch: usize, tol: f64) -> Result<Vec<f64>> {
    let curve = &result.curves[branch];
    let config = &result.config;
    let mut out = Vec::new();
    for w in curve.points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.energy == 0.0 || a.energy.signum() == b.energy.signum() {
            continue;
        }
        let (mut lo, mut hi) = (a.phi, b.phi);
        let mut anchor = result.state(a).to_vec();
        let sign_lo = a.energy.signum();
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let spec = config.family.build(config.swept, mid)?;
            let snap = in_gap_states(&spec, result.gap_edge)?;
            let best = snap
                .states
                .iter()
                .enumerate()
                .map(|(k, v)| (k, inner(&anchor, v).norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1));
            let Some((k, _)) = best else { break };
            if snap.energies[k].signum() == sign_lo {
                lo = mid;
                anchor = snap.states[k].clone();
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Sweeps φ for the MSQ device at fixed island phases and keeps the eight
/// in-gap states with the most weight on the two islands.
pub fn msq_sweep(phi1: f64, phi2: f64, gates: [f64; 6], geometry: &MsqGeometry, n_phi: usize) -> Result<SweepResult> {
    let config = msq_config(phi1, phi2, gates, geometry, n_phi)?;
    sweep(&config)
}

pub fn msq_config(phi1: f64, phi2: f64, gates: [f64; 6], geometry: &MsqGeometry, n_phi: usize) -> Result<SweepConfig> {
    let family = DeviceFamily::Msq {
        phi: 0.0,
        phi1,
        phi2,
        gates,
        geometry: geometry.clone(),
        params: MsqParams::default(),
    };
    let spec = family.build(SweptPhase::Phi, 0.0)?;
    let islands: Vec<usize> = (0..spec.n_sites())
        .filter(|&s| spec.region_of(s).kind == RegionKind::TscPhaseHopping)
        .collect();
    let mut config = SweepConfig::new(family).with_n_phi(n_phi);
    config.filter = Some(WeightFilter {
        sites: islands,
        keep: MSQ_BRANCHES,
        min_weight: MSQ_MIN_ISLAND_WEIGHT,
    });
    Ok(config)
}

/// Number of island-bound branches reported for the MSQ device.
pub const MSQ_BRANCHES: usize = 8;
/// Minimum summed island weight for an MSQ state to count as island-bound.
pub const MSQ_MIN_ISLAND_WEIGHT: f64 = 0.2;

/// Branches whose spread over φ exceeds this are φ-sensitive.
pub const FLAT_SPREAD: f64 = 0.1;
/// Median `|E|` range of a near-zero flat branch.
pub const NEAR_ZERO_BAND: (f64, f64) = (1e-4, 1e-2);
/// Two flat branches are mirror images when `|m₁ + m₂| ≤ tol · max(|m₁|, |m₂|)`
/// for their median energies `m₁`, `m₂`.
pub const MIRROR_TOL: f64 = 0.1;

/// Label of an MSQ branch: `a`..`h` in order of mean energy.
pub fn msq_label(branch_id: usize) -> char {
    (b'a' + branch_id.min(25) as u8) as char
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Partition of MSQ branches by their shape over φ.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MsqPattern {
    pub phase_sensitive: Vec<usize>,
    /// Flat branches paired with a flat branch of opposite energy.
    pub mirrored_flat: Vec<usize>,
    pub near_zero: Vec<usize>,
    pub flat: Vec<usize>,
}

impl MsqPattern {
    pub fn classify(curves: &[BoundStateCurve]) -> Self {
        let mut out = MsqPattern::default();
        let mut flat: Vec<(usize, f64)> = Vec::new();
        for c in curves {
            let m = median(c.energies());
            let level = median(c.energies().iter().map(|e| e.abs()).collect());
            if c.spread() > FLAT_SPREAD {
                out.phase_sensitive.push(c.branch_id);
            } else if (NEAR_ZERO_BAND.0..=NEAR_ZERO_BAND.1).contains(&level) {
                out.near_zero.push(c.branch_id);
            } else {
                flat.push((c.branch_id, m));
            }
        }
        let mut used = vec![false; flat.len()];
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in 0..flat.len() {
                for j in i + 1..flat.len() {
                    if used[i] || used[j] {
                        continue;
                    }
                    let (a, b) = (flat[i].1, flat[j].1);
                    let rel = (a + b).abs() / a.abs().max(b.abs());
                    if rel <= MIRROR_TOL && best.is_none_or(|x| rel < x.2) {
                        best = Some((i, j, rel));
                    }
                }
            }
            let Some((i, j, _)) = best else { break };
            used[i] = true;
            used[j] = true;
            out.mirrored_flat.extend([flat[i].0, flat[j].0]);
        }
        out.mirrored_flat.sort_unstable();
        out.flat = flat.iter().zip(&used).filter(|(_, u)| !**u).map(|(f, _)| f.0).collect();
        out
    }

    /// Two of each kind, as for the canonical device with contacts 3 and 6
    /// gated off.
    pub fn is_reference(&self) -> bool {
        [&self.phase_sensitive, &self.mirrored_flat, &self.near_zero, &self.flat]
            .iter()
            .all(|v| v.len() == 2)
    }
}

/// Branches with `|E| ≤ tol` at every grid point.
pub fn pinned_branches(curves: &[BoundStateCurve], tol: f64) -> Vec<usize> {
    curves
        .iter()
        .filter(|c| c.points.iter().all(|p| p.energy.abs() <= tol))
        .map(|c| c.branch_id)
        .collect()
}
