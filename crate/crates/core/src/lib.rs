//! Restricted root systems of compact symmetric spaces and the invariant
//! almost Hermitian and almost contact metric structures on their tangent
//! (sphere) bundles.
//!
//! The crate is layered:
//!
//! - [`lie_core`]: matrix Lie algebras with structure constants and inner products;
//! - [`symspace`]: symmetric pairs, restricted roots, chambers and sphere charts;
//! - [`qcatalog`]: the scalar functions `q` and coefficient recipes;
//! - [`frames`]: frame-field calculus at points `(o_H, w)`;
//! - [`verify`]: theorem checkers producing structured reports.

pub mod error;
pub mod linalg;
pub mod lie_core;
pub mod symspace;
pub mod qcatalog;
pub mod frames;
pub mod verify;

pub use error::{Error, Result};
