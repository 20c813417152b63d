//! Dense BdG matrix assembly.
//!
//! Basis ordering: site `n` occupies rows `2n` (particle) and `2n + 1`
//! (hole). Every directed bond `(a, b)` contributes a 2×2 block `B` at
//! `H[b][a]` and `B†` at `H[a][b]`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DeviceSpec, RegionKind, SiteId};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// 2×2 complex block, row-major.
pub type Block = [[C64; 2]; 2];

fn block_adjoint(b: &Block) -> Block {
    [[b[0][0].conj(), b[1][0].conj()], [b[0][1].conj(), b[1][1].conj()]]
}

fn block_add(a: &Block, b: &Block) -> Block {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

/// `τz` scaled by `s`.
fn tau_z(s: f64) -> Block {
    [[C64::new(s, 0.0), ZERO], [ZERO, C64::new(-s, 0.0)]]
}

/// Onsite s-wave pairing `Δ₀ [[0, e^{iφ}], [e^{-iφ}, 0]]`.
pub fn pairing_onsite_block(delta0: f64, phi: f64) -> Block {
    let e = C64::from_polar(delta0, phi);
    [[ZERO, e], [e.conj(), ZERO]]
}

/// Kitaev hopping pairing `−iΔ₀τy`, placed at `n+1 ← n`.
pub fn kitaev_hopping_block(delta0: f64) -> Block {
    [[ZERO, C64::new(-delta0, 0.0)], [C64::new(delta0, 0.0), ZERO]]
}

/// Phase-carrying hopping pairing `−Δ̂(φ)τz`, placed at `n+1 ← n`.
pub fn tsc_phase_hopping_block(delta0: f64, phi: f64) -> Block {
    let d = pairing_onsite_block(delta0, phi);
    // right-multiplying by τz negates the second column
    [[-d[0][0], d[0][1]], [-d[1][0], d[1][1]]]
}

/// How the onsite chemical-potential term is lifted into the matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnsiteConvention {
    /// Onsite block `−μτz`: the `+h.c.` is taken to complete only the
    /// off-diagonal (bond) terms.
    #[default]
    Hermitian,
    /// `+h.c.` applied to the onsite term too, giving `−2μτz`.
    DoubledHc,
}

impl OnsiteConvention {
    fn mu_factor(self) -> f64 {
        match self {
            OnsiteConvention::Hermitian => 1.0,
            OnsiteConvention::DoubledHc => 2.0,
        }
    }
}

/// Dense Hermitian matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct BdgMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl BdgMatrix {
    pub fn zeros(dim: usize) -> Self {
        BdgMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    /// Builds from row-major data without checking Hermiticity.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(BdgMatrix { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = BdgMatrix::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of lattice sites (half the dimension).
    pub fn n_sites(&self) -> usize {
        self.dim / 2
    }

    /// Row offset of site `site`'s particle orbital.
    pub fn site_offset(&self, site: SiteId) -> usize {
        2 * site
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn block(&self, row_site: SiteId, col_site: SiteId) -> Block {
        let (r, c) = (2 * row_site, 2 * col_site);
        [
            [self[(r, c)], self[(r, c + 1)]],
            [self[(r + 1, c)], self[(r + 1, c + 1)]],
        ]
    }

    fn add_block(&mut self, row_site: SiteId, col_site: SiteId, b: &Block) {
        let (r, c) = (2 * row_site, 2 * col_site);
        for i in 0..2 {
            for j in 0..2 {
                self[(r + i, c + j)] += b[i][j];
            }
        }
    }

    /// Adds `b` at `to ← from` and its adjoint at `from ← to`.
    fn add_bond(&mut self, from: SiteId, to: SiteId, b: &Block) {
        self.add_block(to, from, b);
        self.add_block(from, to, &block_adjoint(b));
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |H[i][j] − conj(H[j][i])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn mat_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &BdgMatrix) -> BdgMatrix {
        BdgMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Writes `(row, col, re, im)` triplets for the non-zero entries.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                if z != ZERO {
                    writeln!(w, "{i},{j},{:e},{:e}", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for BdgMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for BdgMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Which terms of the Hamiltonian to include.
#[derive(Clone, Copy)]
struct Sectors {
    normal: bool,
    pairing: Option<PairingFilter>,
}

#[derive(Clone, Copy)]
enum PairingFilter {
    All,
    Kind(RegionKind),
}

impl PairingFilter {
    fn admits(self, kind: RegionKind) -> bool {
        match self {
            PairingFilter::All => true,
            PairingFilter::Kind(k) => k == kind,
        }
    }
}

/// Assembles the full BdG matrix with the default onsite convention.
pub fn assemble(spec: &DeviceSpec) -> Result<BdgMatrix> {
    assemble_with(spec, OnsiteConvention::default())
}

pub fn assemble_with(spec: &DeviceSpec, convention: OnsiteConvention) -> Result<BdgMatrix> {
    spec.ensure_valid()?;
    Ok(build(
        spec,
        convention,
        Sectors {
            normal: true,
            pairing: Some(PairingFilter::All),
        },
    ))
}

/// Only the pairing blocks, optionally restricted to one region kind.
pub fn assemble_pairing(spec: &DeviceSpec, kind: Option<RegionKind>) -> Result<BdgMatrix> {
    spec.ensure_valid()?;
    let filter = kind.map_or(PairingFilter::All, PairingFilter::Kind);
    Ok(build(
        spec,
        OnsiteConvention::default(),
        Sectors {
            normal: false,
            pairing: Some(filter),
        },
    ))
}

fn build(spec: &DeviceSpec, convention: OnsiteConvention, sectors: Sectors) -> BdgMatrix {
    let mut h = BdgMatrix::zeros(2 * spec.n_sites());
    let mu_factor = convention.mu_factor();

    for (site, s) in spec.sites.iter().enumerate() {
        let region = &spec.regions[s.region];
        let mut b = [[ZERO; 2]; 2];
        if sectors.normal {
            b = tau_z(-mu_factor * region.mu);
        }
        if region.kind == RegionKind::NormalSc && sectors.pairing.is_some_and(|f| f.admits(region.kind)) {
            b = block_add(&b, &pairing_onsite_block(region.delta0, region.phase));
        }
        h.add_block(site, site, &b);
    }

    for &(from, to) in &spec.bonds {
        let region = spec.region_of(from);
        let mut b = [[ZERO; 2]; 2];
        if sectors.normal {
            b = tau_z(-region.t);
        }
        if sectors.pairing.is_some_and(|f| f.admits(region.kind)) {
            let p = match region.kind {
                RegionKind::NormalSc => None,
                RegionKind::KitaevTsc => Some(kitaev_hopping_block(region.delta0)),
                RegionKind::TscPhaseHopping => Some(tsc_phase_hopping_block(region.delta0, region.phase)),
            };
            if let Some(p) = p {
                b = block_add(&b, &p);
            }
        }
        h.add_bond(from, to, &b);
    }

    if sectors.normal {
        for c in &spec.couplings {
            h.add_bond(c.site_a, c.site_b, &tau_z(-c.strength));
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_sc_sc, build_sc_tsc, build_tsc_tsc};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &Block, b: &Block) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < 1e-15))
    }

    #[test]
    fn onsite_pairing_blocks() {
        assert!(close(
            &pairing_onsite_block(1.0, 0.0),
            &[[ZERO, c(1.0, 0.0)], [c(1.0, 0.0), ZERO]]
        ));
        assert!(close(
            &pairing_onsite_block(1.0, PI / 2.0),
            &[[ZERO, c(0.0, 1.0)], [c(0.0, -1.0), ZERO]]
        ));
        assert!(close(&pairing_onsite_block(0.0, 1.234), &[[ZERO; 2]; 2]));
        // τx cos φ − τy sin φ
        let phi = 0.7;
        let b = pairing_onsite_block(1.0, phi);
        let expect = [[ZERO, c(phi.cos(), phi.sin())], [c(phi.cos(), -phi.sin()), ZERO]];
        assert!(close(&b, &expect));
    }

    #[test]
    fn hopping_pairing_blocks() {
        assert!(close(
            &kitaev_hopping_block(1.0),
            &[[ZERO, c(-1.0, 0.0)], [c(1.0, 0.0), ZERO]]
        ));
        assert!(close(&kitaev_hopping_block(0.0), &[[ZERO; 2]; 2]));
        assert!(close(
            &tsc_phase_hopping_block(1.0, 0.0),
            &[[ZERO, c(1.0, 0.0)], [c(-1.0, 0.0), ZERO]]
        ));
        assert!(close(
            &tsc_phase_hopping_block(1.0, PI),
            &[[ZERO, c(-1.0, 0.0)], [c(1.0, 0.0), ZERO]]
        ));
    }

    #[test]
    fn sc_sc_small_is_hermitian() {
        let spec = build_sc_sc(4, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let h = assemble(&spec).unwrap();
        assert_eq!(h.dim(), 8);
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert_eq!(h[(0, 0)], c(-1.0, 0.0));
        assert_eq!(h[(0, 1)], c(1.0, 0.0));
        assert_eq!(h[(2, 0)], c(-1.0, 0.0));
        assert_eq!(h[(3, 1)], c(1.0, 0.0));
    }

    #[test]
    fn doubled_convention_only_touches_onsite() {
        let spec = build_sc_tsc(6, 0.7, 1.0, 1.0, 0.3, 1.0).unwrap();
        let a = assemble(&spec).unwrap();
        let b = assemble_with(&spec, OnsiteConvention::DoubledHc).unwrap();
        let d = b.sub(&a);
        for i in 0..d.dim() {
            for j in 0..d.dim() {
                let expect = if i == j {
                    if i % 2 == 0 {
                        -0.7
                    } else {
                        0.7
                    }
                } else {
                    0.0
                };
                assert!((d[(i, j)] - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_coupling_is_block_diagonal() {
        let spec = build_sc_tsc(30, 1.0, 1.0, 1.0, 0.4, 0.0).unwrap();
        let h = assemble(&spec).unwrap();
        for i in 0..30 {
            for j in 30..60 {
                assert_eq!(h[(i, j)], ZERO);
                assert_eq!(h[(j, i)], ZERO);
            }
        }
    }

    #[test]
    fn two_pi_phase_gives_identical_matrix() {
        for phi in [0.0, PI, 1.3] {
            let a = assemble(&build_sc_sc(30, 0.5, 1.0, 1.0, phi, 1.0).unwrap()).unwrap();
            let b = assemble(&build_sc_sc(30, 0.5, 1.0, 1.0, phi + 2.0 * PI, 1.0).unwrap()).unwrap();
            let diff = a.sub(&b).max_abs();
            assert!(diff <= 1e-15, "phi={phi} diff={diff}");
        }
        let a = assemble(&build_sc_sc(30, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        let b = assemble(&build_sc_sc(30, 0.5, 1.0, 1.0, 2.0 * PI, 1.0).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairing_is_linear_in_delta() {
        let a = assemble(&build_tsc_tsc(10, 1.0, 2.0, 1.0, 0.6, 0.9).unwrap()).unwrap();
        let b = assemble(&build_tsc_tsc(10, 1.0, 2.0, 1.0, 1.2, 0.9).unwrap()).unwrap();
        let pa = assemble_pairing(&build_tsc_tsc(10, 1.0, 2.0, 1.0, 0.6, 0.9).unwrap(), None).unwrap();
        // b − a must equal exactly the pairing sector at Δ₀ = 0.6
        assert!(b.sub(&a).sub(&pa).max_abs() < 1e-15);
    }

    #[test]
    fn csv_dump_lists_nonzeros() {
        let h = assemble(&build_sc_sc(4, 0.0, 1.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        let mut out = Vec::new();
        h.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("row,col,re,im\n"));
        // 3 bonds × 2 directions × 2 orbitals
        assert_eq!(text.lines().count(), 1 + 12);
    }
}
