//! s-wave / Kitaev junction: a phase-insensitive edge mode plus a dispersive
//! bound state that crosses zero.

use junctionlab::sweep::{refine_zero_crossings, sweep, DeviceFamily, SweepConfig};

fn main() -> junctionlab::Result<()> {
    for v_c in [0.0, 0.5, 1.0] {
        let family = DeviceFamily::ScTsc {
            n: 30,
            mu: 1.0,
            t: 1.0,
            delta0: 1.0,
            v_c,
        };
        let result = sweep(&SweepConfig::new(family).with_n_phi(64))?;
        println!("V_c = {v_c}");
        for c in &result.curves {
            let zeros = refine_zero_crossings(&result, c.branch_id, 1e-10)?;
            println!(
                "  branch {} spread {:.2e} zero crossings {:?}",
                c.branch_id,
                c.spread(),
                zeros
            );
        }
    }
    Ok(())
}
