//! Deterministic file output: CSV with a header row, `.` decimals and `\n`
//! line ends; JSON with sorted keys and a trailing newline. No timestamps,
//! so identical inputs give byte-identical files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::eigen::EigenSolution;
use crate::error::Result;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the output directory when `--out` is absent.
pub const OUT_ENV: &str = "JUNCTIONLAB_OUT";

/// Creates `dir` (and parents) and returns it.
pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

/// Writes a file through a buffered writer, flushing before returning.
pub fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Pretty JSON with keys sorted (serde_json's default map is ordered).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Formats a float the way every CSV in this crate does.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.12e}")
}

/// Full spectrum at one phase, columns `phi_rad,index,energy_ev,in_gap`.
pub fn write_spectrum_csv<W: Write>(mut w: W, phi: f64, sol: &EigenSolution, gap_edge: f64) -> std::io::Result<()> {
    writeln!(w, "phi_rad,index,energy_ev,in_gap")?;
    let in_gap = crate::sweep::classify_in_gap(sol, gap_edge);
    for (k, e) in sol.values.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(phi),
            k,
            fmt_f64(*e),
            u8::from(in_gap.contains(&k))
        )?;
    }
    Ok(())
}

/// Analytic ABS curve, columns `phi_rad,E_plus,E_minus`.
pub fn write_analytic_csv<W: Write>(mut w: W, rows: &[(f64, f64, f64)]) -> std::io::Result<()> {
    writeln!(w, "phi_rad,E_plus,E_minus")?;
    for (phi, p, m) in rows {
        writeln!(w, "{},{},{}", fmt_f64(*phi), fmt_f64(*p), fmt_f64(*m))?;
    }
    Ok(())
}

/// Description of an artifact bundle.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Manifest {
    pub bundle: String,
    pub description: String,
    pub code_version: String,
    /// Every parameter that produced the bundle.
    pub parameters: Value,
    /// Grid sizes (`n_phi`, `n_k`, ...).
    pub grids: Value,
    /// Parameters pinned to a documented default because the source figure
    /// does not state them.
    pub paper_unspecified: Vec<String>,
    /// Derived numbers worth a glance (gap edges, branch counts, ...).
    pub summary: Value,
    /// Files in the bundle, manifest excluded.
    pub files: Vec<String>,
}

impl Manifest {
    pub fn new(bundle: impl Into<String>, description: impl Into<String>) -> Self {
        Manifest {
            bundle: bundle.into(),
            description: description.into(),
            code_version: CODE_VERSION.into(),
            parameters: Value::Object(Default::default()),
            grids: Value::Object(Default::default()),
            paper_unspecified: Vec::new(),
            summary: Value::Object(Default::default()),
            files: Vec::new(),
        }
    }
}
