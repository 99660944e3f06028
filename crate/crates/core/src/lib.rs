//! Discrete diffusion semigroups generated by multiplication operators in
//! orthonormal bases: classical Jacobi polynomials, exceptional Jacobi
//! polynomials obtained by one Darboux step, and Dunkl-Jacobi functions on
//! `[-pi, pi]`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation; file formats and the command line live in the `specsemi`
//! crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dunkl;
pub mod error;
pub mod exceptional;
pub mod fourier;
pub mod harness;
pub mod index;
pub mod jacobi;
pub mod linalg;
pub mod math;
pub mod poly;
pub mod quadrature;
pub mod semigroup;

pub use error::{Error, Result};
pub use index::IndexSet;
pub use jacobi::JacobiParams;
pub use poly::{Poly, Rational};
pub use quadrature::QuadratureRule;
