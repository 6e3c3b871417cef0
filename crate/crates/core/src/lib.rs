//! Polynomial TPS-like radial kernels and their fractional variants, with
//! conditionally positive definite interpolation, a shifted-QR preconditioner and
//! Kansa collocation for radial fractional operators.
//!
//! ```
//! use frbf::kernels::{make_kernel, Family, KernelSpec};
//!
//! let kernel = make_kernel(&KernelSpec::new(Family::FalseTps, 3.22, 1.0)).unwrap();
//! assert_eq!(kernel.len(), 3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collocate;
mod dense;
pub mod error;
pub mod experiment;
pub mod interpolate;
pub mod kernels;
pub mod monomial;
pub mod nodes;
pub mod precond;
pub mod problems;
pub mod specfun;

pub use error::{Error, Result};
pub use monomial::{MonomialSum, MonomialTerm};
