//! Monotonized finite-difference schemes.
//!
//! A monotonizing operator `M` (a local three-point average in 1D, a
//! seven-point average in 3D) is built into the undifferentiated term of a
//! difference scheme. The auxiliary scheme `F(Mv, D1 v, D2 v) = 0` is solved
//! for `v` and the answer is `y = Mv`; the balance relations are written for
//! `y`, so the smoothing happens inside the scheme rather than after it.
//!
//! Modules:
//! - [`grid`]: regular meshes, mesh functions and index maps.
//! - [`stencil`]: difference operators, `M` and its inverse, 3D boundary policies.
//! - [`metrics`]: oscillation detection, max step change, extrema and sharpness.
//! - [`bvp1d`]: the 1D constant-coefficient boundary-value problem.
//! - [`ns3d`]: steady incompressible flow through a cubic filter cell.
//! - [`timestep`]: weighted time stepping of base and monotonized schemes.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod bvp1d;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod ns3d;
pub mod stencil;
pub mod timestep;

pub use error::{Error, Result};
pub use grid::{flat_index, unflatten, BoundaryData1D, Field1D, Field3D, Mesh1D, Mesh3D, MeshFunction};
pub use metrics::{MonotonicityReport, Region3D};

/// C-norm (max absolute value) of a slice. Empty slices have norm zero.
pub fn norm_c(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// C-norm of the difference of two equally long slices.
pub fn dist_c(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dist_c: length mismatch");
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
