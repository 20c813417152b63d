//! Named, parameter-complete device configurations, one per figure of the
//! reference study, each producing a CSV + JSON bundle under
//! `<out>/<preset>/`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::bdg::assemble;
use crate::bulk::device_gap_edge;
use crate::continuum::abs_energy;
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::lattice::{MsqGeometry, MsqParams};
use crate::observables::{branch_densities, local_densities, orbit_trace, write_densities_csv, LocalDensityField};
use crate::output::{ensure_dir, write_analytic_csv, write_json, write_spectrum_csv, write_with, Manifest};
use crate::sweep::{
    in_gap_states, msq_config, msq_label, pinned_branches, sweep, DeviceFamily, MsqPattern, SweepConfig, SweepResult,
    SweptPhase,
};

/// Gates of the reference MSQ configuration: contacts 3 and 6 off.
pub const MSQ_GATES: [f64; 6] = [1.0, 1.0, 0.0, 1.0, 1.0, 0.0];

/// Default φ points for 1D presets.
pub const PRESET_N_PHI: usize = 128;
/// Default φ points for MSQ presets, sized to finish within two minutes
/// on one core.
pub const MSQ_PRESET_N_PHI: usize = 32;
/// Fig11's orbit sweep.
pub const MSQ_ORBIT_N_PHI: usize = 24;

const SC_SC_N: usize = 30;
const SC_TSC_N: usize = 30;
const TSC_TSC_N: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PresetId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8Upper,
    Fig8Lower,
    Fig9,
    /// MSQ sweep at fixed island phases `(φ₁, φ₂)`.
    Fig10 {
        phi1: f64,
        phi2: f64,
    },
    Fig11,
}

impl PresetId {
    pub const ALL: [PresetId; 11] = [
        PresetId::Fig2,
        PresetId::Fig3,
        PresetId::Fig4,
        PresetId::Fig5,
        PresetId::Fig6,
        PresetId::Fig7,
        PresetId::Fig8Upper,
        PresetId::Fig8Lower,
        PresetId::Fig9,
        PresetId::Fig10 { phi1: 0.0, phi2: 0.0 },
        PresetId::Fig11,
    ];

    /// Directory name of the bundle.
    pub fn dir_name(&self) -> String {
        match self {
            PresetId::Fig10 { phi1, phi2 } if *phi1 == 0.0 && *phi2 == 0.0 => "Fig10".into(),
            PresetId::Fig10 { phi1, phi2 } => format!("Fig10_phi1_{phi1:.4}_phi2_{phi2:.4}"),
            other => other.to_string(),
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            PresetId::Fig2 => "SC-SC in-gap branches over phi with the transparent-barrier analytic curve",
            PresetId::Fig3 => "SC-SC full spectrum at phi = pi with in-gap flags",
            PresetId::Fig4 => "SC-SC lower ABS local densities and junction-site orbits",
            PresetId::Fig5 => "SC-TSC full spectrum with in-gap flags",
            PresetId::Fig6 => "SC-TSC in-gap branches while mu/t moves from trivial (3) through the gap closing (2) to topological (1)",
            PresetId::Fig7 => "SC-TSC near the transition (mu/t = 1.429) for several junction couplings",
            PresetId::Fig8Upper => "TSC-TSC with the left chain topological and the right chain's mu/t varied",
            PresetId::Fig8Lower => "TSC-TSC with both chains' mu/t varied together",
            PresetId::Fig9 => "TSC-TSC ABS local densities and junction-site orbits at mu/t = 1",
            PresetId::Fig10 { .. } => "MSQ island-bound branches over phi at fixed island phases",
            PresetId::Fig11 => "MSQ tau_x snapshots of the island states and contact-2 orbits",
        }
    }

    /// The device families a preset diagonalizes.
    pub fn families(&self) -> Vec<DeviceFamily> {
        match *self {
            PresetId::Fig2 | PresetId::Fig3 | PresetId::Fig4 => vec![sc_sc()],
            PresetId::Fig5 => vec![sc_tsc(1.0, 1.0)],
            PresetId::Fig6 => FIG6_MU.iter().map(|&m| sc_tsc(m, 1.0)).collect(),
            PresetId::Fig7 => FIG7_VC.iter().map(|&v| sc_tsc(FIG7_MU, v)).collect(),
            PresetId::Fig8Upper => FIG8_MU.iter().map(|&m| tsc_tsc(1.0, m)).collect(),
            PresetId::Fig8Lower => FIG8_MU.iter().map(|&m| tsc_tsc(m, m)).collect(),
            PresetId::Fig9 => vec![tsc_tsc(1.0, 1.0)],
            PresetId::Fig10 { phi1, phi2 } => vec![msq(0.0, phi1, phi2)],
            PresetId::Fig11 => vec![msq(FRAC_PI_4, PI, 0.0), msq(0.0, 0.0, 0.0)],
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PresetId::Fig2 => "Fig2",
            PresetId::Fig3 => "Fig3",
            PresetId::Fig4 => "Fig4",
            PresetId::Fig5 => "Fig5",
            PresetId::Fig6 => "Fig6",
            PresetId::Fig7 => "Fig7",
            PresetId::Fig8Upper => "Fig8upper",
            PresetId::Fig8Lower => "Fig8lower",
            PresetId::Fig9 => "Fig9",
            PresetId::Fig10 { .. } => "Fig10",
            PresetId::Fig11 => "Fig11",
        };
        f.write_str(s)
    }
}

impl FromStr for PresetId {
    type Err = Error;

    /// Case-insensitive. `Fig10` takes optional island phases in radians:
    /// `Fig10:0.785,0`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (head, args) = match lower.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (lower.as_str(), None),
        };
        let bad = || Error::InvalidSweep(format!("unknown preset '{s}'"));
        let id = match head {
            "fig2" => PresetId::Fig2,
            "fig3" => PresetId::Fig3,
            "fig4" => PresetId::Fig4,
            "fig5" => PresetId::Fig5,
            "fig6" => PresetId::Fig6,
            "fig7" => PresetId::Fig7,
            "fig8upper" => PresetId::Fig8Upper,
            "fig8lower" => PresetId::Fig8Lower,
            "fig9" => PresetId::Fig9,
            "fig10" => {
                let (phi1, phi2) = match args {
                    None => (0.0, 0.0),
                    Some(a) => {
                        let v: Vec<f64> = a
                            .split(',')
                            .map(|x| x.trim().parse::<f64>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|_| bad())?;
                        match v[..] {
                            [p1, p2] if p1.is_finite() && p2.is_finite() => (p1, p2),
                            _ => return Err(bad()),
                        }
                    }
                };
                return Ok(PresetId::Fig10 { phi1, phi2 });
            }
            "fig11" => PresetId::Fig11,
            _ => return Err(bad()),
        };
        if args.is_some() {
            return Err(bad());
        }
        Ok(id)
    }
}

/// μ/t = 2 is the gap-closing point of the Kitaev chain with onsite term
/// −μτz, so 3 is added as a trivial end point.
const FIG6_MU: [f64; 6] = [3.0, 2.0, 1.75, 1.5, 1.25, 1.0];
const FIG7_MU: f64 = 1.429;
const FIG7_VC: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
const FIG8_MU: [f64; 4] = [4.0, 2.0, 1.4, 1.0];

fn sc_sc() -> DeviceFamily {
    DeviceFamily::ScSc {
        n: SC_SC_N,
        mu: 0.5,
        t: 1.0,
        delta0: 1.0,
        v_junction: 1.0,
    }
}

fn sc_tsc(mu_over_t: f64, v_c: f64) -> DeviceFamily {
    DeviceFamily::ScTsc {
        n: SC_TSC_N,
        mu: mu_over_t,
        t: 1.0,
        delta0: 1.0,
        v_c,
    }
}

fn tsc_tsc(mu_left: f64, mu_right: f64) -> DeviceFamily {
    DeviceFamily::TscTsc {
        n: TSC_TSC_N,
        mu_left,
        mu_right,
        t: 1.0,
        delta0: 1.0,
        v_junction: 1.0,
    }
}

fn msq(phi: f64, phi1: f64, phi2: f64) -> DeviceFamily {
    DeviceFamily::Msq {
        phi,
        phi1,
        phi2,
        gates: MSQ_GATES,
        geometry: MsqGeometry::canonical(),
        params: MsqParams::default(),
    }
}

/// Run options shared by all presets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PresetOptions {
    /// Overrides the preset's φ grid size.
    pub n_phi: Option<usize>,
    pub track: bool,
}

impl Default for PresetOptions {
    fn default() -> Self {
        PresetOptions {
            n_phi: None,
            track: true,
        }
    }
}

struct Bundle<'a> {
    dir: &'a Path,
    manifest: Manifest,
}

impl Bundle<'_> {
    fn file(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut std::io::BufWriter<std::fs::File>) -> std::io::Result<()>,
    ) -> Result<()> {
        write_with(&self.dir.join(name), f)?;
        self.manifest.files.push(name.into());
        Ok(())
    }

    fn curves(&mut self, name: &str, result: &SweepResult) -> Result<()> {
        self.file(name, |w| result.write_curves_csv(w))
    }
}

/// Runs a preset and writes its bundle to `out_root/<preset>/`.
pub fn run_preset(id: PresetId, out_root: &Path, opts: PresetOptions) -> Result<Manifest> {
    let dir = ensure_dir(&out_root.join(id.dir_name()))?;
    let mut b = Bundle {
        dir: &dir,
        manifest: Manifest::new(id.dir_name(), id.description()),
    };
    let n_phi = opts.n_phi.unwrap_or(match id {
        PresetId::Fig10 { .. } => MSQ_PRESET_N_PHI,
        PresetId::Fig11 => MSQ_ORBIT_N_PHI,
        _ => PRESET_N_PHI,
    });
    let cfg = |family: DeviceFamily| {
        let mut c = SweepConfig::new(family).with_n_phi(n_phi);
        c.track = opts.track;
        c
    };
    let mut unspecified: Vec<&str> = vec!["n_phi"];
    match id {
        PresetId::Fig2 => {
            let family = sc_sc();
            let r = sweep(&cfg(family.clone()))?;
            b.curves("curves.csv", &r)?;
            // The continuum curve uses the lattice bulk gap as Δ.
            let rows: Vec<(f64, f64, f64)> = r
                .config
                .grid()
                .iter()
                .map(|&phi| {
                    let (p, m) = abs_energy(phi, r.gap_edge, 1.0);
                    (phi, p, m)
                })
                .collect();
            b.file("analytic.csv", |w| write_analytic_csv(w, &rows))?;
            unspecified.push("v_junction");
            b.manifest.parameters = json!({ "family": family, "analytic_delta": r.gap_edge, "analytic_eta": 1.0 });
            b.manifest.summary = sweep_summary(&r);
        }
        PresetId::Fig3 | PresetId::Fig5 => {
            let (family, phi) = if id == PresetId::Fig3 {
                (sc_sc(), PI)
            } else {
                (sc_tsc(1.0, 1.0), 0.0)
            };
            let spec = family.build(SweptPhase::Phi, phi)?;
            let gap = device_gap_edge(&spec, None)?;
            let sol = eig_hermitian(&assemble(&spec)?)?;
            b.file("spectrum.csv", |w| write_spectrum_csv(w, phi, &sol, gap))?;
            let in_gap: Vec<f64> = crate::sweep::classify_in_gap(&sol, gap)
                .iter()
                .map(|&k| sol.values[k])
                .collect();
            if id == PresetId::Fig3 {
                unspecified.push("v_junction");
            } else {
                unspecified.push("phi");
            }
            unspecified.retain(|k| *k != "n_phi");
            b.manifest.parameters = json!({ "family": family, "phi": phi });
            let region_gaps: Vec<Value> = spec
                .regions
                .iter()
                .map(|r| Ok(json!({ "region": r.name, "gap_edge": crate::bulk::bulk_bands(r, 512)?.gap_edge })))
                .collect::<Result<_>>()?;
            b.manifest.summary = json!({ "gap_edge": gap, "region_gap_edges": region_gaps, "in_gap_energies": in_gap });
        }
        PresetId::Fig4 | PresetId::Fig9 => {
            let family = if id == PresetId::Fig4 {
                sc_sc()
            } else {
                tsc_tsc(1.0, 1.0)
            };
            let r = sweep(&cfg(family.clone()))?;
            b.curves("curves.csv", &r)?;
            let spec = family.build(SweptPhase::Phi, 0.0)?;
            let targets = if id == PresetId::Fig4 {
                unspecified.push("v_junction");
                vec![lowest_full_branch(&r)?]
            } else {
                unspecified.push("n");
                abs_branches(&r)
            };
            let (jl, jr) = (
                spec.label("junction_left").unwrap(),
                spec.label("junction_right").unwrap(),
            );
            for (k, &branch) in targets.iter().enumerate() {
                let suffix = if k == 0 { String::new() } else { format!("_{}", k + 1) };
                let rows = branch_densities(&r, branch)?;
                b.file(&format!("densities{suffix}.csv"), |w| write_densities_csv(w, &rows))?;
                for (side, site) in [("left", jl), ("right", jr)] {
                    let orbit = orbit_trace(&r, branch, site)?;
                    b.file(&format!("orbit_{side}{suffix}.csv"), |w| orbit.write_csv(w))?;
                }
            }
            b.manifest.parameters = json!({ "family": family, "density_branches": targets, "orbit_sites": [jl, jr] });
            b.manifest.summary = sweep_summary(&r);
        }
        PresetId::Fig6 | PresetId::Fig7 | PresetId::Fig8Upper | PresetId::Fig8Lower => {
            let families = id.families();
            let mut summaries = Vec::new();
            for (k, family) in families.iter().enumerate() {
                let r = sweep(&cfg(family.clone()))?;
                let tag = match (id, family) {
                    (PresetId::Fig6, DeviceFamily::ScTsc { mu, .. }) => format!("mu_over_t_{mu:.3}"),
                    (PresetId::Fig7, DeviceFamily::ScTsc { v_c, .. }) => format!("vc_{v_c:.3}"),
                    (_, DeviceFamily::TscTsc { mu_left, mu_right, .. }) => format!("mu_{mu_left:.3}_{mu_right:.3}"),
                    _ => format!("{k}"),
                };
                b.curves(&format!("curves_{tag}.csv"), &r)?;
                if k + 1 == families.len() {
                    b.curves("curves.csv", &r)?;
                }
                let mut s = sweep_summary(&r);
                s["tag"] = json!(tag);
                summaries.push(s);
            }
            match id {
                PresetId::Fig6 => unspecified.extend(["intermediate mu/t values", "trivial end point mu/t = 3"]),
                PresetId::Fig7 => {}
                _ => {
                    unspecified.push("n");
                    unspecified.push("which chain stays topological (left)");
                }
            }
            b.manifest.parameters = json!({ "families": families });
            b.manifest.summary = json!({ "runs": summaries });
        }
        PresetId::Fig10 { phi1, phi2 } => {
            let geometry = MsqGeometry::canonical();
            let mut c = msq_config(phi1, phi2, MSQ_GATES, &geometry, n_phi)?;
            c.track = opts.track;
            let r = sweep(&c)?;
            b.curves("curves.csv", &r)?;
            unspecified.push("geometry");
            b.manifest.parameters = json!({ "phi1": phi1, "phi2": phi2, "gates": MSQ_GATES, "params": MsqParams::default(), "geometry": geometry });
            let mut s = sweep_summary(&r);
            s["pattern"] = json!(MsqPattern::classify(&r.curves));
            s["labels"] = json!(r
                .curves
                .iter()
                .map(|c| msq_label(c.branch_id).to_string())
                .collect::<Vec<_>>());
            s["pinned_1e-3"] = json!(pinned_branches(&r.curves, 1e-3));
            b.manifest.summary = s;
        }
        PresetId::Fig11 => {
            let geometry = MsqGeometry::canonical();
            // Upper panel: one snapshot of the island states.
            let (phi, phi1, phi2) = (FRAC_PI_4, PI, 0.0);
            let snap_cfg = msq_config(phi1, phi2, MSQ_GATES, &geometry, 16)?;
            let spec = snap_cfg.family.build(SweptPhase::Phi, phi)?;
            let gap = snap_cfg.family.gap_edge()?;
            let mut snap = in_gap_states(&spec, gap)?;
            let filter = snap_cfg.filter.as_ref().unwrap();
            let mut ranked: Vec<(usize, f64)> = snap
                .states
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    (
                        k,
                        filter
                            .sites
                            .iter()
                            .map(|&s| v[2 * s].norm_sqr() + v[2 * s + 1].norm_sqr())
                            .sum(),
                    )
                })
                .collect();
            ranked.sort_by(|a, c| c.1.total_cmp(&a.1).then(a.0.cmp(&c.0)));
            let mut keep: Vec<usize> = ranked.iter().take(filter.keep).map(|x| x.0).collect();
            keep.sort_by(|&a, &c| snap.energies[a].total_cmp(&snap.energies[c]));
            snap.phi = phi;
            let mut energies = Vec::new();
            for (k, &s) in keep.iter().enumerate() {
                let field: LocalDensityField = local_densities(&snap.states[s], &spec)?;
                let rows = vec![(phi, field)];
                b.file(&format!("densities_{}.csv", msq_label(k)), |w| {
                    write_densities_csv(w, &rows)
                })?;
                energies.push(snap.energies[s]);
            }
            // Lower panel: orbits at contact 2 and its host site over φ.
            let mut c = msq_config(0.0, 0.0, MSQ_GATES, &geometry, n_phi)?;
            c.track = opts.track;
            let r = sweep(&c)?;
            b.curves("curves.csv", &r)?;
            let base = c.family.build(SweptPhase::Phi, 0.0)?;
            let (island, host) = (base.label("contact2").unwrap(), base.label("contact2_host").unwrap());
            let branch = branch_at_site(&r, island)?;
            for (side, site) in [("left", island), ("right", host)] {
                let orbit = orbit_trace(&r, branch, site)?;
                b.file(&format!("orbit_{side}.csv"), |w| orbit.write_csv(w))?;
            }
            unspecified.push("geometry");
            b.manifest.parameters = json!({
                "snapshot": { "phi": phi, "phi1": phi1, "phi2": phi2 },
                "orbit": { "phi1": 0.0, "phi2": 0.0, "branch": branch, "sites": [island, host] },
                "gates": MSQ_GATES,
                "params": MsqParams::default(),
                "geometry": geometry,
            });
            b.manifest.summary = json!({ "snapshot_energies": energies, "orbit_sweep": sweep_summary(&r) });
        }
    }
    if !matches!(id, PresetId::Fig3 | PresetId::Fig5) {
        b.manifest.grids = json!({ "n_phi": n_phi, "track": opts.track });
    }
    b.manifest.paper_unspecified = unspecified.iter().map(|s| s.to_string()).collect();
    write_json(&dir.join("manifest.json"), &b.manifest)?;
    Ok(b.manifest)
}

fn sweep_summary(r: &SweepResult) -> Value {
    let branches: Vec<Value> = r
        .curves
        .iter()
        .map(|c| {
            json!({
                "branch_id": c.branch_id,
                "points": c.points.len(),
                "truncated": c.truncated,
                "mean_energy": c.mean_energy(),
                "spread": c.spread(),
                "zero_crossings": c.zero_crossings(),
            })
        })
        .collect();
    json!({
        "gap_edge": r.gap_edge,
        "n_branches": r.curves.len(),
        "branches": branches,
        "exchanged_branches": r.exchanged_branches(),
    })
}

/// Lowest-energy branch among those spanning the most grid points.
fn lowest_full_branch(r: &SweepResult) -> Result<usize> {
    let longest = r
        .curves
        .iter()
        .map(|c| c.points.len())
        .max()
        .ok_or_else(|| Error::InvalidSweep("no in-gap branches".into()))?;
    Ok(r.curves
        .iter()
        .filter(|c| c.points.len() == longest)
        .map(|c| c.branch_id)
        .next()
        .unwrap())
}

/// Full-length branches that move with φ (the spread threshold separates
/// them from pinned edge modes).
fn abs_branches(r: &SweepResult) -> Vec<usize> {
    let n = r.snapshots.len();
    r.curves
        .iter()
        .filter(|c| c.points.len() == n && c.spread() > 1e-3)
        .map(|c| c.branch_id)
        .collect()
}

/// Full-length branch with the most mean weight on `site`.
fn branch_at_site(r: &SweepResult, site: usize) -> Result<usize> {
    let n = r.snapshots.len();
    r.curves
        .iter()
        .filter(|c| c.points.len() == n)
        .map(|c| {
            let w: f64 = c
                .points
                .iter()
                .map(|p| {
                    let v = r.state(p);
                    v[2 * site].norm_sqr() + v[2 * site + 1].norm_sqr()
                })
                .sum();
            (c.branch_id, w)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|x| x.0)
        .ok_or_else(|| Error::InvalidSweep("no full-length branch".into()))
}

/// φ values used when checking a preset's states without a full sweep.
pub fn probe_phases(id: PresetId) -> Vec<f64> {
    match id {
        PresetId::Fig10 { .. } | PresetId::Fig11 => vec![FRAC_PI_2],
        _ => vec![0.3, FRAC_PI_2, 2.0, 4.4],
    }
}
