//! Spectra, eigenstate fidelities, and clustering for 1D non-Hermitian
//! lattices.
//!
//! The crate builds tight-binding Hamiltonians with nonreciprocal hopping
//! and on-site gain/loss, computes their complex spectra with a dense QR
//! eigensolver, measures eigenstate similarity through pairwise fidelities,
//! and groups states with a deterministic seeded k-means. Around an
//! exceptional point the eigenstates pile up near a common base state; the
//! [`ep`] module quantifies that proximity (nilpotency index, eigenvalue
//! gap, fidelity ceiling) and the [`sweep`] module scans lattice parameters
//! and exports the results as CSV data.
//!
//! All numerics are generic over the real scalar type through the
//! [`real::Real`] trait (`f32` or `f64`); the aliases below fix the common
//! double-precision choices.
//!
//! ```
//! use epcluster::lattice::{build_hamiltonian, Boundary, LatticeSpec};
//! use epcluster::eigen::eig_default;
//! use epcluster::fidelity::{fidelity_matrix, offdiagonal_set};
//!
//! // nonreciprocal open chain: all eigenstates pile up at the left edge
//! let spec = LatticeSpec::uniform(12, 0.1, 0.05, 0.0, Boundary::Open);
//! let h = build_hamiltonian(&spec).unwrap();
//! let s = eig_default(&h).unwrap();
//! let fids = offdiagonal_set(&fidelity_matrix(&s));
//! assert_eq!(fids.len(), 66);
//! ```

pub mod cluster;
pub mod cmatrix;
pub mod dynamics;
pub mod eigen;
pub mod ep;
pub mod fidelity;
pub mod io;
pub mod lattice;
pub mod real;
pub mod rng;
pub mod sweep;

pub use real::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;

pub type LatticeSpec64 = lattice::LatticeSpec<f64>;
pub type Hamiltonian64 = lattice::Hamiltonian<f64>;
pub type Spectrum64 = eigen::Spectrum<f64>;
pub type FidelityMatrix64 = fidelity::FidelityMatrix<f64>;
pub type FeatureSpace64 = fidelity::FeatureSpace<f64>;
pub type ClusterModel64 = cluster::ClusterModel<f64>;
pub type EpReport64 = ep::EpReport<f64>;
pub type WavePacket64 = dynamics::WavePacket<f64>;
