//! `junctionlab` command line.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 numerical failure.
//! Results go to the output directory (`--out`, else `$JUNCTIONLAB_OUT`,
//! else `./out`); logs go to standard error; standard output carries a JSON
//! summary only when `--json` is given.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bdg::assemble;
use crate::bulk::bulk_bands;
use crate::config::{parse_config, DeviceConfig, SweepSettings};
use crate::continuum::abs_energy;
use crate::error::{Error, Result};
use crate::lattice::{MsqGeometry, RegionKind, RegionModel};
use crate::observables::{branch_densities, orbit_trace, write_densities_csv};
use crate::output::{ensure_dir, to_json_string, write_analytic_csv, write_json, write_with, OUT_ENV};
use crate::presets::{run_preset, PresetId, PresetOptions, MSQ_GATES, MSQ_PRESET_N_PHI};
use crate::sweep::{
    msq_config, msq_label, phase_grid, pinned_branches, sweep, DeviceFamily, MsqPattern, SweepResult, SweptPhase,
};

#[derive(Parser, Debug)]
#[command(
    name = "junctionlab",
    version,
    about = "Energy-phase relations of normal and topological Josephson junctions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output directory [default: $JUNCTIONLAB_OUT or ./out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of phase grid points over [0, 2π]
    #[arg(long, global = true)]
    phi_steps: Option<usize>,
    /// Thread branches by eigenvector overlap (default)
    #[arg(long, global = true, overrides_with = "no_track")]
    track: bool,
    /// Sort states by energy at each point instead of tracking
    #[arg(long, global = true, overrides_with = "track")]
    no_track: bool,
    /// Worker threads for the phase grid (results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print a JSON summary on standard output
    #[arg(long, global = true)]
    json: bool,
}

impl Global {
    fn track(&self) -> Option<bool> {
        if self.no_track {
            Some(false)
        } else if self.track {
            Some(true)
        } else {
            None
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

/// A device from a config file or inline parameters.
#[derive(Args, Debug, Clone)]
struct DeviceArgs {
    /// Device config file
    config: Option<PathBuf>,
    /// Inline family: sc_sc, sc_tsc or tsc_tsc
    #[arg(long, conflicts_with = "config")]
    family: Option<String>,
    #[arg(long, default_value_t = 30)]
    sites: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    mu: f64,
    /// TSC-TSC left chemical potential [default: --mu]
    #[arg(long, allow_negative_numbers = true)]
    mu_left: Option<f64>,
    /// TSC-TSC right chemical potential [default: --mu]
    #[arg(long, allow_negative_numbers = true)]
    mu_right: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    delta0: f64,
    /// Junction coupling [default: --t]
    #[arg(long)]
    coupling: Option<f64>,
    /// Override the in-gap threshold
    #[arg(long)]
    gap_edge: Option<f64>,
    /// Also write the BdG matrix at this phase as (row, col, re, im) CSV
    #[arg(long, allow_negative_numbers = true)]
    dump_matrix: Option<f64>,
}

impl DeviceArgs {
    fn resolve(&self) -> Result<DeviceConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            let mut cfg = parse_config(&text)?;
            if self.gap_edge.is_some() {
                cfg.sweep.gap_edge = self.gap_edge;
            }
            return Ok(cfg);
        }
        let Some(family) = &self.family else {
            return Err(usage("give a config file or --family"));
        };
        let coupling = self.coupling.unwrap_or(self.t);
        let (n, mu, t, delta0) = (self.sites, self.mu, self.t, self.delta0);
        let family = match family.as_str() {
            "sc_sc" => DeviceFamily::ScSc {
                n,
                mu,
                t,
                delta0,
                v_junction: coupling,
            },
            "sc_tsc" => DeviceFamily::ScTsc {
                n,
                mu,
                t,
                delta0,
                v_c: coupling,
            },
            "tsc_tsc" => DeviceFamily::TscTsc {
                n,
                mu_left: self.mu_left.unwrap_or(mu),
                mu_right: self.mu_right.unwrap_or(mu),
                t,
                delta0,
                v_junction: coupling,
            },
            other => return Err(usage(&format!("unknown family '{other}' (sc_sc, sc_tsc, tsc_tsc)"))),
        };
        family.build(SweptPhase::Phi, 0.0)?;
        Ok(DeviceConfig {
            family,
            phase: 0.0,
            sweep: SweepSettings {
                gap_edge: self.gap_edge,
                ..Default::default()
            },
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep φ and write tracked in-gap branches (curves.csv)
    Sweep {
        #[command(flatten)]
        device: DeviceArgs,
    },
    /// Sweep φ and write local densities of one branch (densities.csv)
    Densities {
        #[command(flatten)]
        device: DeviceArgs,
        /// Branch index (branches are ordered by mean energy)
        #[arg(long, default_value_t = 0)]
        branch: usize,
        /// Also write the (τx, τy, τz) orbit of these sites
        #[arg(long, value_delimiter = ',')]
        orbit_sites: Vec<usize>,
    },
    /// Bulk bands of one region kind (bands.csv)
    Bulk {
        /// normal_sc, kitaev_tsc or tsc_phase_hopping
        #[arg(long, default_value = "normal_sc")]
        kind: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        delta0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        #[arg(long, default_value_t = 256)]
        n_k: usize,
    },
    /// Closed-form continuum ABS curve (analytic.csv)
    Analytic {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Junction transparency in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// MSQ device sweep over φ at fixed island phases (curves.csv)
    Msq {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi2: f64,
        /// Six comma-separated contact strengths
        #[arg(long, value_delimiter = ',')]
        gates: Option<Vec<f64>>,
    },
    /// Run a named figure preset into <out>/<preset>/
    Preset {
        /// Fig2 .. Fig11, Fig8upper, Fig8lower; Fig10:PHI1,PHI2 for other island phases
        id: String,
    },
    /// Parse and check a device config without computing
    Validate { config: PathBuf },
}

fn usage(msg: &str) -> Error {
    Error::InvalidSweep(msg.to_string())
}

/// Exit code of an error: config and argument problems are usage errors.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ConfigSyntax { .. }
        | Error::ConfigSemantic { .. }
        | Error::InvalidSweep(_)
        | Error::InvalidDevice(_)
        | Error::InvalidGeometry(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .try_init();
    match execute(&cli) {
        Ok(summary) => {
            if cli.global.json {
                match to_json_string(&summary) {
                    Ok(s) => print!("{s}"),
                    Err(e) => {
                        log::error!("{e}");
                        return 2;
                    }
                }
            }
            0
        }
        Err(e) => {
            log::error!("{e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads.unwrap_or(0))
        .build()
        .map_err(|e| usage(&e.to_string()))?;
    pool.install(|| dispatch(&cli.command, g))
}

fn dispatch(command: &Command, g: &Global) -> Result<Value> {
    match command {
        Command::Validate { config } => {
            let text = std::fs::read_to_string(config)?;
            let cfg = parse_config(&text)?;
            let spec = cfg.spec()?;
            log::info!(
                "{}: valid, {} sites in {} regions",
                config.display(),
                spec.n_sites(),
                spec.regions.len()
            );
            Ok(json!({
                "valid": true,
                "family": cfg.family.name(),
                "sites": spec.n_sites(),
                "regions": spec.regions.iter().map(|r| json!({ "name": r.name, "kind": r.kind.as_str(), "phase": r.phase })).collect::<Vec<_>>(),
                "sweep": cfg.sweep,
            }))
        }
        Command::Preset { id } => {
            let id: PresetId = id.parse()?;
            let out = ensure_dir(&g.out_dir())?;
            let opts = PresetOptions {
                n_phi: g.phi_steps,
                track: g.track().unwrap_or(true),
            };
            log::info!("running preset {id} into {}", out.join(id.dir_name()).display());
            let m = run_preset(id, &out, opts)?;
            Ok(json!({ "preset": m.bundle, "dir": out.join(id.dir_name()), "files": m.files, "summary": m.summary }))
        }
        Command::Analytic { delta, eta } => {
            if !(0.0..=1.0).contains(eta) || *delta <= 0.0 {
                return Err(usage("need delta > 0 and 0 <= eta <= 1"));
            }
            let out = ensure_dir(&g.out_dir())?;
            let n = g.phi_steps.unwrap_or(128).max(2);
            let rows: Vec<(f64, f64, f64)> = phase_grid(n)
                .into_iter()
                .map(|phi| {
                    let (p, m) = abs_energy(phi, *delta, *eta);
                    (phi, p, m)
                })
                .collect();
            write_with(&out.join("analytic.csv"), |w| write_analytic_csv(w, &rows))?;
            Ok(json!({ "file": "analytic.csv", "n_phi": n, "delta": delta, "eta": eta }))
        }
        Command::Bulk {
            kind,
            mu,
            t,
            delta0,
            phase,
            n_k,
        } => {
            let k = RegionKind::parse(kind).ok_or_else(|| usage(&format!("unknown region kind '{kind}'")))?;
            let bands = bulk_bands(&RegionModel::new("bulk", k, *mu, *t, *delta0, *phase), *n_k)?;
            let out = ensure_dir(&g.out_dir())?;
            write_with(&out.join("bands.csv"), |w| bands.write_csv(w))?;
            log::info!("{} gap edge {:.6}", k.as_str(), bands.gap_edge);
            Ok(
                json!({ "file": "bands.csv", "kind": k.as_str(), "gap_edge": bands.gap_edge, "n_k": bands.k_grid.len() }),
            )
        }
        Command::Sweep { device } => {
            let (cfg, r, out) = run_sweep(device, g)?;
            write_with(&out.join("curves.csv"), |w| r.write_curves_csv(w))?;
            let summary = sweep_json(&cfg, &r);
            write_json(&out.join("summary.json"), &summary)?;
            Ok(summary)
        }
        Command::Densities {
            device,
            branch,
            orbit_sites,
        } => {
            let (cfg, r, out) = run_sweep(device, g)?;
            let rows = branch_densities(&r, *branch)?;
            write_with(&out.join("densities.csv"), |w| write_densities_csv(w, &rows))?;
            write_with(&out.join("curves.csv"), |w| r.write_curves_csv(w))?;
            for &s in orbit_sites {
                let orbit = orbit_trace(&r, *branch, s)?;
                write_with(&out.join(format!("orbit_site_{s}.csv")), |w| orbit.write_csv(w))?;
            }
            let mut summary = sweep_json(&cfg, &r);
            summary["density_branch"] = json!(branch);
            Ok(summary)
        }
        Command::Msq { phi1, phi2, gates } => {
            let gates: [f64; 6] = match gates {
                Some(v) => v.as_slice().try_into().map_err(|_| usage("--gates needs six values"))?,
                None => MSQ_GATES,
            };
            let mut c = msq_config(
                *phi1,
                *phi2,
                gates,
                &MsqGeometry::canonical(),
                g.phi_steps.unwrap_or(MSQ_PRESET_N_PHI),
            )?;
            c.track = g.track().unwrap_or(true);
            log::info!(
                "MSQ sweep: {} φ points, {} sites",
                c.n_phi,
                c.family.build(SweptPhase::Phi, 0.0)?.n_sites()
            );
            let r = sweep(&c)?;
            let out = ensure_dir(&g.out_dir())?;
            write_with(&out.join("curves.csv"), |w| r.write_curves_csv(w))?;
            let summary = json!({
                "file": "curves.csv",
                "phi1": phi1,
                "phi2": phi2,
                "gates": gates,
                "gap_edge": r.gap_edge,
                "labels": r.curves.iter().map(|c| msq_label(c.branch_id).to_string()).collect::<Vec<_>>(),
                "spreads": r.curves.iter().map(|c| c.spread()).collect::<Vec<_>>(),
                "pattern": MsqPattern::classify(&r.curves),
                "pinned_1e-3": pinned_branches(&r.curves, 1e-3),
            });
            write_json(&out.join("summary.json"), &summary)?;
            Ok(summary)
        }
    }
}

fn run_sweep(device: &DeviceArgs, g: &Global) -> Result<(DeviceConfig, SweepResult, PathBuf)> {
    let cfg = device.resolve()?;
    let mut c = cfg.sweep_config();
    if let Some(n) = g.phi_steps {
        c.n_phi = n;
    }
    if let Some(t) = g.track() {
        c.track = t;
    }
    let out = ensure_dir(&g.out_dir())?;
    if let Some(phi) = device.dump_matrix {
        dump_matrix(&cfg, phi, &out)?;
    }
    log::info!("{} sweep: {} φ points", cfg.family.name(), c.n_phi);
    let r = sweep(&c)?;
    Ok((cfg, r, out))
}

fn dump_matrix(cfg: &DeviceConfig, phi: f64, out: &Path) -> Result<()> {
    let h = assemble(&cfg.family.build(SweptPhase::Phi, phi)?)?;
    write_with(&out.join("matrix.csv"), |w| h.write_csv(w))
}

fn sweep_json(cfg: &DeviceConfig, r: &SweepResult) -> Value {
    json!({
        "file": "curves.csv",
        "family": cfg.family.name(),
        "n_phi": r.config.n_phi,
        "track": r.config.track,
        "gap_edge": r.gap_edge,
        "branches": r.curves.iter().map(|c| json!({
            "branch_id": c.branch_id,
            "points": c.points.len(),
            "mean_energy": c.mean_energy(),
            "spread": c.spread(),
            "zero_crossings": c.zero_crossings(),
        })).collect::<Vec<_>>(),
        "exchanged_branches": r.exchanged_branches(),
    })
}
