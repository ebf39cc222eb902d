//! Adjoint Reidemeister torsion of knot exteriors and connected sums.

// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjoint;
pub mod cli;
pub mod connected_sum;
pub mod error;
pub mod numeric;
pub mod presentation;
pub mod representation;
pub mod sl2;
pub mod torsion;

pub use error::{Error, Result};
