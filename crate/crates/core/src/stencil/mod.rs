//! Difference operators and monotonizing operators.
//!
//! 1D operators act on interior values and consume [`BoundaryData1D`] as a
//! known affine contribution. 3D operators act on cell-centered fields and
//! resolve missing neighbors through a [`BoundaryPolicy3D`].
//!
//! [`BoundaryData1D`]: crate::BoundaryData1D

mod one_d;
mod three_d;
mod tridiag;

pub use one_d::{
    apply_d1_1d, apply_d2_1d, apply_m_1d, solve_m_1d, StencilKind, StencilOperator1D,
};
pub use three_d::{
    apply_m_3d, div_3d, grad_3d, laplacian_3d, m3d_norm_c, second_derivative_3d, solve_m_3d,
    Axis, BoundaryPolicy3D, Face, FaceRule, GhostRule,
};
pub use tridiag::{Tridiagonal, TridiagonalLu};
