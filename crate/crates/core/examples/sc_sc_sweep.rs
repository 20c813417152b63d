//! Andreev bound states of an s-wave junction over one phase period.

use junctionlab::sweep::{sweep, DeviceFamily, SweepConfig};

fn main() -> junctionlab::Result<()> {
    let family = DeviceFamily::ScSc {
        n: 30,
        mu: 0.5,
        t: 1.0,
        delta0: 1.0,
        v_junction: 1.0,
    };
    let result = sweep(&SweepConfig::new(family).with_n_phi(64))?;
    println!("gap edge {:.4}", result.gap_edge);
    for c in &result.curves {
        println!(
            "branch {}: {} points, mean {:+.4}, spread {:.4}",
            c.branch_id,
            c.points.len(),
            c.mean_energy(),
            c.spread()
        );
    }
    result.write_curves_csv(std::io::stdout().lock()).map_err(Into::into)
}
