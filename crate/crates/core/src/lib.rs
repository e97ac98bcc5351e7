//! Squeezing of SU(1,1) coherent states under `H = 2ω K_z + 2λ K_x`.
//!
//! Heisenberg-picture transport of first and second moments of
//! `(K_x, K_y, K_z)`, closed-form variances for Perelomov (PCS) and
//! Barut–Girardello (BGCS) coherent states, a truncated Fock-basis oracle
//! and phase-plane scans of the squeezing factors.

pub mod error;
pub mod hamiltonian;
pub mod special;
pub mod squeeze;
pub mod pcs;
pub mod bgcs;
pub mod oracle;
pub mod scan;
pub mod validate;

pub use error::{Error, Result};

// Links the LAPACK backend used by the oracle's eigensolver.
use lapack_src as _;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/scans.md")]
    mod scans {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
