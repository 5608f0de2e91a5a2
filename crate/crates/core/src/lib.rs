//! Elliptic gamma function, contour quadrature on the unit torus, and
//! integral elliptic Bailey pairs.
//!
//! The crate is `no_std` and only needs `alloc`. Enabling the `parallel`
//! feature runs grid evaluations on rayon's thread pool; results are
//! bit-identical with and without it because partial sums are always
//! combined in index order.
//!
//! Layout:
//! - [`ellgamma`]: `(a;q)_inf`, `theta(z;p)`, `Gamma(z;q,p)` and `kappa`.
//! - [`expr`]: symbolic products of elliptic gamma factors.
//! - [`quadrature`]: trapezoidal rule on `T^m` with factor tables.
//! - [`bailey`]: Bailey pair expression trees, both lemmas, tree words.
//! - [`constraints`]: parameter-region records attached to pairs.
//! - [`identities`]: both sides of every certified integral identity.
//! - [`verify`]: seeded sampling and verification reports.

#![no_std]
// range checks are written as `!(x < bound)` so NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bailey;
pub mod constraints;
pub mod ellgamma;
mod error;
pub mod expr;
pub mod identities;
pub mod quadrature;
mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use sum::CompensatedSum;
