//! Classical, numerically exact simulation of the phase-estimation approach
//! to dynamic linear response on a quantum computer.
//!
//! The pipeline mirrors the quantum algorithm step by step:
//!
//! 1. [`model`] builds a Hubbard lattice in a fixed particle-number sector,
//!    together with density excitations and momentum-mode occupations.
//! 2. [`spectral`] finds the ground state and maps the spectrum onto
//!    `[0, 1]`.
//! 3. [`prep`] simulates the ancilla-rotation preparation of `O|ψ0⟩`.
//! 4. [`response`] computes the exact phase-estimation outcome distribution,
//!    samples it, and converts it back to physical units.
//! 5. [`finalstate`] collapses the register on an outcome and runs
//!    Hadamard-test measurements of momentum distributions.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod finalstate;
pub mod linalg;
pub mod model;
pub mod opfunc;
pub mod prep;
pub mod response;
pub mod sparse;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::StateVector;
pub use num_complex::Complex64;
pub use sparse::SparseOperator;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/prep.md")]
    mod prep {}
    #[doc = include_str!("../../../book/src/response.md")]
    mod response {}
    #[doc = include_str!("../../../book/src/finalstate.md")]
    mod finalstate {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
