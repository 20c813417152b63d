//! Device construction and assembly properties.

use std::f64::consts::PI;

use junctionlab::bdg::{assemble, assemble_pairing, assemble_with, OnsiteConvention};
use junctionlab::lattice::{build_msq, build_sc_sc, build_sc_tsc, build_tsc_tsc, MsqGeometry, MsqParams, RegionKind};
use junctionlab::presets::MSQ_GATES;
use junctionlab::DeviceSpec;

fn families(phi: f64) -> Vec<DeviceSpec> {
    vec![
        build_sc_sc(30, 0.5, 1.0, 1.0, phi, 1.0).unwrap(),
        build_sc_tsc(30, 1.0, 1.0, 1.0, phi, 1.0).unwrap(),
        build_tsc_tsc(40, 1.0, 2.0, 1.0, 1.0, phi).unwrap(),
    ]
}

#[test]
fn assembled_matrices_are_hermitian() {
    for phi in [0.0, 0.7, PI, 5.1] {
        for spec in families(phi) {
            assert!(spec.validate().is_empty());
            let h = assemble(&spec).unwrap();
            assert_eq!(h.dim(), 2 * spec.n_sites());
            assert!(h.hermiticity_defect() <= 1e-14 * h.max_abs());
        }
    }
}

#[test]
fn msq_is_hermitian_and_labelled() {
    let g = MsqGeometry::canonical();
    let spec = build_msq(0.3, 1.1, 2.0, &MSQ_GATES, &g, MsqParams::default()).unwrap();
    assert_eq!(spec.n_sites(), 2 * g.host_sites() + 40);
    let h = assemble(&spec).unwrap();
    assert!(h.hermiticity_defect() <= 1e-14 * h.max_abs());
    for k in 1..=6 {
        assert!(spec.label(&format!("contact{k}")).is_some());
    }
    // gated-off contacts still exist, with zero strength
    assert_eq!(spec.couplings.iter().filter(|c| c.strength == 0.0).count(), 2);
}

#[test]
fn pairing_sector_is_linear_in_delta() {
    let a = build_sc_tsc(20, 1.0, 1.0, 0.8, 1.3, 0.6).unwrap();
    let b = build_sc_tsc(20, 1.0, 1.0, 1.6, 1.3, 0.6).unwrap();
    let (ha, hb) = (assemble(&a).unwrap(), assemble(&b).unwrap());
    let (pa, pb) = (assemble_pairing(&a, None).unwrap(), assemble_pairing(&b, None).unwrap());
    let diff = hb.sub(&ha);
    // H(2Δ) − H(Δ) is exactly the pairing part at Δ
    assert!(diff.sub(&pa).max_abs() < 1e-15);
    assert!(pb.sub(&pa).sub(&pa).max_abs() < 1e-15);
}

#[test]
fn onsite_conventions_differ_only_on_the_diagonal_blocks() {
    let spec = build_sc_sc(10, 0.5, 1.0, 1.0, 0.4, 1.0).unwrap();
    let h1 = assemble_with(&spec, OnsiteConvention::Hermitian).unwrap();
    let h2 = assemble_with(&spec, OnsiteConvention::DoubledHc).unwrap();
    let d = h2.sub(&h1);
    for a in 0..spec.n_sites() {
        for b in 0..spec.n_sites() {
            let blk = d.block(a, b);
            let norm: f64 = blk.iter().flatten().map(|z| z.norm()).sum();
            if a != b {
                assert_eq!(norm, 0.0);
            }
        }
    }
}

#[test]
fn phase_only_enters_its_region() {
    let s0 = build_sc_sc(12, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap();
    let s1 = build_sc_sc(12, 0.5, 1.0, 1.0, 2.0, 1.0).unwrap();
    let d = assemble(&s1).unwrap().sub(&assemble(&s0).unwrap());
    let left = s0.sites_in_region(0);
    for &a in &left {
        for b in 0..12 {
            let norm: f64 = d.block(a, b).iter().flatten().map(|z| z.norm()).sum();
            assert_eq!(norm, 0.0);
        }
    }
    assert_eq!(s0.regions[1].kind, RegionKind::NormalSc);
}
