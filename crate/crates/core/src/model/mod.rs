//! Lattice, fixed-sector Fock basis, and the sparse operators acting on it.

mod basis;
mod lattice;
mod operators;

pub use basis::{Configuration, FockBasis, MAX_BASIS_DIMENSION};
pub use lattice::{LatticeGeometry, WaveVector};
pub use operators::{
    build_density_excitation, build_hamiltonian, build_momentum_number, build_site_number, Channel, DensityExcitation,
    HubbardParams, Spin, SpinMode,
};
