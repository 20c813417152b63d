//! Local densities of a bound state and its Bloch-vector orbit at the
//! junction site.

use junctionlab::observables::{branch_densities, localization, orbit_trace, write_densities_csv};
use junctionlab::sweep::{sweep, DeviceFamily, SweepConfig};

fn main() -> junctionlab::Result<()> {
    let family = DeviceFamily::ScTsc {
        n: 30,
        mu: 1.0,
        t: 1.0,
        delta0: 1.0,
        v_c: 1.0,
    };
    let result = sweep(&SweepConfig::new(family).with_n_phi(32))?;
    let spec = result.config.family.build(result.config.swept, 0.0)?;
    let site = spec.label("junction_left").expect("junction label");
    let branch = result
        .curves
        .iter()
        .max_by(|a, b| a.spread().total_cmp(&b.spread()))
        .unwrap()
        .branch_id;

    let rows = branch_densities(&result, branch)?;
    let window: Vec<usize> = (site.saturating_sub(3)..site + 4).collect();
    for (phi, field) in rows.iter().step_by(8) {
        println!(
            "phi {phi:.3}: weight near junction {:.3}",
            localization(field, &window).window_weight
        );
    }
    let orbit = orbit_trace(&result, branch, site)?;
    println!(
        "orbit extent {:.3e}, closure defect {:.3e}",
        orbit.extent(),
        orbit.closure_defect()
    );
    write_densities_csv(std::io::sink(), &rows).map_err(Into::into)
}
