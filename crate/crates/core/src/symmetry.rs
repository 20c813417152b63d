//! Particle-hole check `P H P⁻¹ = −H` with `P = T_x K`, where `T_x` applies
//! τx to every site block and `K` is complex conjugation.
//!
//! Kitaev and phase-hopping pairing are odd under `P`; onsite s-wave pairing
//! is even, so it is the only term that survives in `P H P⁻¹ + H`.

use serde::Serialize;

use crate::bdg::{BdgMatrix, C64};
use crate::bulk::open_chain;
use crate::eigen::{eigvalsh, EigenSolution};
use crate::error::Result;
use crate::lattice::{RegionKind, RegionModel};

/// One site-pair block of `P H P⁻¹ + H` above the reporting threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricTerm {
    pub site_a: usize,
    pub site_b: usize,
    /// Frobenius norm of the block.
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// Frobenius norm of `P H P⁻¹ + H`.
    pub defect: f64,
    pub symmetric_terms: Vec<SymmetricTerm>,
    /// `max_k |E_k + E_{2N−1−k}|`, when a spectrum was supplied.
    pub spectrum_defect: Option<f64>,
}

/// Blocks with norm below this are not listed.
pub const TERM_THRESHOLD: f64 = 1e-12;

/// `T_x conj(H) T_x`.
pub fn conjugate_by_p(h: &BdgMatrix) -> BdgMatrix {
    let n = h.dim();
    let mut out = BdgMatrix::zeros(n);
    let flip = |i: usize| i ^ 1;
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = h[(flip(i), flip(j))].conj();
        }
    }
    out
}

pub fn ph_defect(h: &BdgMatrix) -> SymmetryReport {
    let p = conjugate_by_p(h);
    let n_sites = h.dim() / 2;
    let mut defect = 0.0;
    let mut symmetric_terms = Vec::new();
    for a in 0..n_sites {
        for b in 0..n_sites {
            let mut block = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    let x: C64 = p[(2 * a + i, 2 * b + j)] + h[(2 * a + i, 2 * b + j)];
                    block += x.norm_sqr();
                }
            }
            defect += block;
            if block.sqrt() > TERM_THRESHOLD && a <= b {
                symmetric_terms.push(SymmetricTerm {
                    site_a: a,
                    site_b: b,
                    norm: block.sqrt(),
                });
            }
        }
    }
    SymmetryReport {
        defect: defect.sqrt(),
        symmetric_terms,
        spectrum_defect: None,
    }
}

/// `max_k |E_k + E_{n−1−k}|` over an ascending spectrum. Zero for spectra
/// symmetric about zero; devices mixing s-wave and p-wave pairing are not.
pub fn spectrum_symmetry_defect(sol: &EigenSolution) -> f64 {
    values_symmetry_defect(&sol.values)
}

pub fn values_symmetry_defect(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n)
        .map(|k| (values[k] + values[n - 1 - k]).abs())
        .fold(0.0, f64::max)
}

/// Smallest `|E|` of an open Kitaev chain: the edge-mode splitting, which
/// is exponentially small in `n` in the topological phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplittingPoint {
    pub mu_over_t: f64,
    pub min_abs_energy: f64,
}

pub fn edge_splitting_scan(n: usize, t: f64, delta0: f64, mu_over_t: &[f64]) -> Result<Vec<SplittingPoint>> {
    mu_over_t
        .iter()
        .map(|&r| {
            let region = RegionModel::new("kitaev", RegionKind::KitaevTsc, r * t, t, delta0, 0.0);
            let values = eigvalsh(&crate::bdg::assemble(&open_chain(&region, n))?)?;
            let min_abs_energy = values.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
            Ok(SplittingPoint {
                mu_over_t: r,
                min_abs_energy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdg::{assemble, assemble_pairing};
    use crate::lattice::build_sc_sc;

    #[test]
    fn zero_matrix() {
        assert_eq!(ph_defect(&BdgMatrix::zeros(4)).defect, 0.0);
    }

    #[test]
    fn kitaev_chain_is_antisymmetric() {
        for (mu, t, d) in [(0.0, 1.0, 1.0), (0.7, 1.3, 0.4), (-2.0, 0.5, 2.0)] {
            let r = RegionModel::new("k", RegionKind::KitaevTsc, mu, t, d, 0.0);
            let h = assemble(&open_chain(&r, 9)).unwrap();
            assert!(ph_defect(&h).defect < 1e-12);
        }
    }

    #[test]
    fn sc_sc_defect_is_doubled_pairing() {
        let spec = build_sc_sc(10, 0.5, 1.0, 1.0, 1.1, 1.0).unwrap();
        let rep = ph_defect(&assemble(&spec).unwrap());
        let pairing = assemble_pairing(&spec, Some(RegionKind::NormalSc)).unwrap();
        assert!((rep.defect - 2.0 * pairing.frobenius_norm()).abs() < 1e-10);
        assert_eq!(rep.symmetric_terms.len(), 10);
        assert!(rep.symmetric_terms.iter().all(|t| t.site_a == t.site_b));
    }

    #[test]
    fn two_site_kitaev_spectrum() {
        let r = RegionModel::new("k", RegionKind::KitaevTsc, 0.0, 1.0, 1.0, 0.0);
        let v = eigvalsh(&assemble(&open_chain(&r, 2)).unwrap()).unwrap();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(values_symmetry_defect(&v) < 1e-14);
    }

    #[test]
    fn toy_spectrum() {
        assert_eq!(values_symmetry_defect(&[1.0, 2.0]), 3.0);
    }

    #[test]
    fn splitting_grows_toward_transition() {
        let s = edge_splitting_scan(40, 1.0, 1.0, &[1.0, 1.429, 4.0]).unwrap();
        assert!(s[0].min_abs_energy < 1e-10);
        assert!(s[0].min_abs_energy < s[1].min_abs_energy && s[1].min_abs_energy < s[2].min_abs_energy);
        assert!(s[2].min_abs_energy > 0.5);
    }
}
