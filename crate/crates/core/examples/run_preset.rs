//! Writes a figure bundle. Usage: run_preset [PRESET] [OUT_DIR]

use std::path::PathBuf;

use junctionlab::presets::{run_preset, PresetId, PresetOptions};

fn main() -> junctionlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let id: PresetId = args.next().unwrap_or_else(|| "Fig4".into()).parse()?;
    let out = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let manifest = run_preset(id, &out, PresetOptions::default())?;
    println!("{} -> {}", id, out.join(id.dir_name()).display());
    for f in &manifest.files {
        println!("  {f}");
    }
    Ok(())
}
