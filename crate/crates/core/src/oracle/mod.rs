//! Truncated number-basis ground truth.
//!
//! States are built from their series definitions in the discrete-series
//! basis `|m; k⟩`, evolved exactly by diagonalizing the tridiagonal
//! Hamiltonian, and measured. Nothing here uses the SO(2,1) transport or
//! any closed form, so agreement with those paths is an independent check.

mod basis;
mod evolve;
mod truncation;

pub use basis::{
    bgcs_fock_vector, build_generators, expectations, pcs_fock_vector, FockBasisSpec, FockVector,
    Generators, Measurement, MAX_TAIL_TOL, MIN_TRUNCATION,
};
pub use evolve::{evolve, Factorization};
pub use truncation::{
    adaptive_truncation, Converged, Oracle, OracleConfig, DEFAULT_DRIFT_TOL, DEFAULT_N_MAX,
    DEFAULT_N_START, DEFAULT_TAIL_TOL,
};
