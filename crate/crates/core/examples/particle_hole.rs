//! Particle-hole check of assembled Hamiltonians.

use std::f64::consts::PI;

use junctionlab::symmetry::{ph_defect, spectrum_symmetry_defect};
use junctionlab::{assemble, build_sc_sc, build_sc_tsc, build_tsc_tsc, eig_hermitian};

fn main() -> junctionlab::Result<()> {
    let devices = [
        ("sc_sc", build_sc_sc(30, 0.5, 1.0, 1.0, PI / 3.0, 1.0)?),
        ("sc_tsc", build_sc_tsc(30, 1.0, 1.0, 1.0, PI / 3.0, 1.0)?),
        ("tsc_tsc", build_tsc_tsc(40, 1.0, 1.0, 1.0, 1.0, PI / 3.0)?),
    ];
    for (name, spec) in devices {
        let h = assemble(&spec)?;
        let report = ph_defect(&h);
        let spectrum = spectrum_symmetry_defect(&eig_hermitian(&h)?);
        println!(
            "{name}: P-defect {:.3e}, {} P-even terms (s-wave pairing), spectrum +-E defect {spectrum:.2e}",
            report.defect,
            report.symmetric_terms.len()
        );
    }
    Ok(())
}
