//! Two Kitaev chains: four in-gap branches, two of which trade places after
//! one period (the 4π effect).

use junctionlab::sweep::{pinned_branches, sweep, DeviceFamily, SweepConfig};

fn main() -> junctionlab::Result<()> {
    let family = DeviceFamily::TscTsc {
        n: 60,
        mu_left: 1.0,
        mu_right: 1.0,
        t: 1.0,
        delta0: 1.0,
        v_junction: 1.0,
    };
    let result = sweep(&SweepConfig::new(family).with_n_phi(96))?;
    println!("branches: {}", result.curves.len());
    println!("pinned at zero: {:?}", pinned_branches(&result.curves, 1e-6));
    println!("closure permutation: {:?}", result.closure_permutation());
    println!("exchanged: {:?}", result.exchanged_branches());
    Ok(())
}
