//! Edge-mode splitting of an open Kitaev chain across the transition.

use junctionlab::symmetry::edge_splitting_scan;

fn main() -> junctionlab::Result<()> {
    let ratios: Vec<f64> = (0..=12).map(|i| 0.5 + 0.25 * i as f64).collect();
    for n in [20, 40] {
        for p in edge_splitting_scan(n, 1.0, 1.0, &ratios)? {
            println!("N {n:>3} mu/t {:.2}: min |E| {:.3e}", p.mu_over_t, p.min_abs_energy);
        }
    }
    Ok(())
}
