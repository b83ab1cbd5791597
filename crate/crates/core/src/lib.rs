//! Locally convex curves on the spheres `S2` and `S3`.
//!
//! Frenet frames and Jacobi profiles, spin lifts through the quaternion
//! double covers, the correspondence between curves on `S3` and pairs of
//! curves on `S2`, global-convexity analysis, and hemisphere/rotation-number
//! computations for closed curves on `S2`.

// `!(x > tol)` is used deliberately so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod convexity;
pub mod curves;
pub mod decomp;
pub mod error;
pub mod frenet;
pub mod io;
pub mod numeric;
pub mod quatspin;
pub mod sphere2;

pub use error::{Error, Result};
