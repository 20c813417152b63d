//! Tight-binding Bogoliubov–de Gennes simulator for the energy–phase
//! relation of normal and topological Josephson junctions.
//!
//! The pipeline is: build a [`lattice::DeviceSpec`], assemble its dense
//! [`bdg::BdgMatrix`], diagonalize with [`eigen::eig_hermitian`], pick the
//! states inside the bulk gap ([`bulk`]), and thread them across a phase
//! sweep into continuous branches ([`sweep`]). [`observables`] turns
//! eigenstates into local densities and phase orbits, [`symmetry`] checks
//! particle-hole antisymmetry, and [`continuum`] holds the closed-form
//! continuum results used to cross-check the lattice numerics.

pub mod bdg;
pub mod bulk;
pub mod cli;
pub mod config;
pub mod continuum;
pub mod eigen;
pub mod error;
pub mod lattice;
pub mod observables;
pub mod output;
pub mod presets;
pub mod sweep;
pub mod symmetry;

pub use bdg::{assemble, BdgMatrix, C64};
pub use eigen::{eig_hermitian, EigenSolution};
pub use error::{Error, Result};
pub use lattice::{
    build_msq, build_sc_sc, build_sc_tsc, build_tsc_tsc, DeviceSpec, MsqGeometry, RegionKind, RegionModel,
};
