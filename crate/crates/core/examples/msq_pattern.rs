//! Two-island device on 2D hosts. Slow: roughly a minute per sweep on one core.

use junctionlab::presets::MSQ_GATES;
use junctionlab::sweep::{msq_label, msq_sweep, MsqPattern};
use junctionlab::MsqGeometry;

fn main() -> junctionlab::Result<()> {
    let n_phi = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let result = msq_sweep(0.0, 0.0, MSQ_GATES, &MsqGeometry::canonical(), n_phi)?;
    for c in &result.curves {
        println!(
            "{} (branch {}): mean {:+.4e} spread {:.3e}",
            msq_label(c.branch_id),
            c.branch_id,
            c.mean_energy(),
            c.spread()
        );
    }
    let pattern = MsqPattern::classify(&result.curves);
    println!("{pattern:?}");
    println!("reference 2+2+2+2 pattern: {}", pattern.is_reference());
    Ok(())
}
