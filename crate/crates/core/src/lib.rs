//! Local (single-site) entanglement of the one-dimensional extended Hubbard
//! model.
//!
//! Ground states come from exact diagonalization of fixed-number sectors
//! ([`fock_basis`], [`hamiltonian`], [`eigensolver`]); the half-filled Hubbard
//! chain in the thermodynamic limit is available independently through the
//! Bethe-ansatz integrals in [`bethe`]. [`scan`] sweeps couplings and filling
//! and flags extrema and cusps of the entanglement curves.

pub mod bethe;
pub mod eigensolver;
pub mod error;
pub mod fock_basis;
pub mod hamiltonian;
pub mod observables;
pub mod scan;

pub use eigensolver::{lowest_eigenpairs, GroundStateResult, SolverConfig};
pub use error::{HubbardError, Result};
pub use fock_basis::{apply_hop, Boundary, SectorBasis};
pub use hamiltonian::{apply_hamiltonian, diagonal_energy, Hamiltonian, ModelParams};
pub use observables::{charge_gap, entanglement_at, local_rdm, von_neumann_entropy, GapResult, LocalRdm};
pub use scan::{detect_features, scan_filling, scan_uv, scan_v, select_sector_by_mu, slope_jump_at_half_filling};
