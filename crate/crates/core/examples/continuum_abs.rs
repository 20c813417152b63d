//! Continuum bound-state energy: closed form against the root of the pole
//! condition, and the delta-barrier scattering amplitudes.

use std::f64::consts::TAU;

use junctionlab::continuum::{abs_energy, delta_scattering, pole_root, ContinuumParams};

fn main() -> junctionlab::Result<()> {
    for i in 0..=8 {
        let phi = 0.05 + (TAU - 0.1) * i as f64 / 8.0;
        let (plus, _) = abs_energy(phi, 1.0, 1.0);
        println!(
            "phi {phi:.3}: closed form {plus:.12}, pole root {:.12}",
            pole_root(phi, 1.0)?
        );
    }
    let params = ContinuumParams::default();
    for v_c in [0.0, 1.0, 10.0] {
        let s = delta_scattering(1.0, v_c, &params);
        println!(
            "V_c {v_c}: |B/A|^2 {:.4}, |C/A|^2 {:.4}",
            s.b_over_a.norm_sqr(),
            s.c_over_a.norm_sqr()
        );
    }
    Ok(())
}
