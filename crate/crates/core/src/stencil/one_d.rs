use serde::{Deserialize, Serialize};

use super::Tridiagonal;
use crate::{BoundaryData1D, Error, Field1D, Mesh1D, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilKind {
    /// `(u_{i+1} - u_{i-1}) / 2h`
    D1,
    /// `(u_{i+1} - 2 u_i + u_{i-1}) / h^2`
    D2,
    /// `(u_{i+1} + 2 u_i + u_{i-1}) / 4`
    M,
    Identity,
}

/// A three-point operator on the interior of a [`Mesh1D`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilOperator1D {
    pub kind: StencilKind,
    pub mesh: Mesh1D,
}

impl StencilOperator1D {
    pub fn new(kind: StencilKind, mesh: Mesh1D) -> Self {
        Self { kind, mesh }
    }

    /// Unscaled row pattern.
    pub fn pattern(&self) -> (f64, f64, f64) {
        match self.kind {
            StencilKind::D1 => (-0.5, 0.0, 0.5),
            StencilKind::D2 => (1.0, -2.0, 1.0),
            StencilKind::M => (0.25, 0.5, 0.25),
            StencilKind::Identity => (0.0, 1.0, 0.0),
        }
    }

    pub fn scale(&self) -> f64 {
        let h = self.mesh.h();
        match self.kind {
            StencilKind::D1 => 1.0 / h,
            StencilKind::D2 => 1.0 / (h * h),
            StencilKind::M | StencilKind::Identity => 1.0,
        }
    }

    /// Scaled row weights `(lower, diagonal, upper)`.
    pub fn weights(&self) -> (f64, f64, f64) {
        let (l, d, u) = self.pattern();
        let s = self.scale();
        (l * s, d * s, u * s)
    }

    /// Linear part acting on the interior unknowns.
    pub fn matrix(&self) -> Tridiagonal {
        let (l, d, u) = self.weights();
        Tridiagonal::toeplitz(self.mesh.n(), l, d, u)
    }

    /// Affine part contributed by the boundary values.
    pub fn boundary_term(&self, bc: &BoundaryData1D) -> Vec<f64> {
        let n = self.mesh.n();
        let (l, _, u) = self.weights();
        let mut t = vec![0.0; n];
        t[0] += l * bc.u0;
        t[n - 1] += u * bc.u_np1;
        t
    }

    pub fn apply(&self, u: &Field1D, bc: &BoundaryData1D) -> Field1D {
        assert_eq!(*u.mesh(), self.mesh, "operator and field live on different meshes");
        let full = u.with_boundary(bc);
        let (l, d, r) = self.weights();
        let out = full.windows(3).map(|w| l * w[0] + d * w[1] + r * w[2]).collect();
        u.with_values(out)
    }

    /// C-norm of the linear part: max absolute row sum over interior rows.
    pub fn norm_c(&self) -> f64 {
        self.matrix().norm_c()
    }
}

pub fn apply_d1_1d(u: &Field1D, bc: &BoundaryData1D) -> Field1D {
    StencilOperator1D::new(StencilKind::D1, *u.mesh()).apply(u, bc)
}

pub fn apply_d2_1d(u: &Field1D, bc: &BoundaryData1D) -> Field1D {
    StencilOperator1D::new(StencilKind::D2, *u.mesh()).apply(u, bc)
}

pub fn apply_m_1d(u: &Field1D, bc: &BoundaryData1D) -> Field1D {
    StencilOperator1D::new(StencilKind::M, *u.mesh()).apply(u, bc)
}

/// Solve `M a = b` for `a`, with `a`'s boundary values given by `bc`.
pub fn solve_m_1d(b: &Field1D, bc: &BoundaryData1D) -> Result<Field1D> {
    let op = StencilOperator1D::new(StencilKind::M, *b.mesh());
    let rhs: Vec<f64> =
        b.values().iter().zip(op.boundary_term(bc)).map(|(bi, t)| bi - t).collect();
    let a = op
        .matrix()
        .solve(&rhs)
        .map_err(|e| Error::Singular(format!("M system: {e}")))?;
    Ok(b.with_values(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MeshFunction;

    fn mesh(n: usize) -> Mesh1D {
        Mesh1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn d1_examples() {
        let m = mesh(7);
        let u = MeshFunction::sample(m, |x| x);
        let r = apply_d1_1d(&u, &BoundaryData1D::new(0.0, 1.0));
        assert!(r.values().iter().all(|v| (v - 1.0).abs() < 1e-12));

        let c = MeshFunction::constant(m, 3.0);
        let r = apply_d1_1d(&c, &BoundaryData1D::uniform(3.0));
        assert!(r.values().iter().all(|&v| v == 0.0));

        let one = MeshFunction::from_values(mesh(1), vec![5.0]).unwrap();
        assert_eq!(apply_d1_1d(&one, &BoundaryData1D::new(2.0, 8.0)).values(), &[6.0]);
    }

    #[test]
    fn d2_examples() {
        let m = mesh(9);
        let u = MeshFunction::sample(m, |x| x * x);
        let r = apply_d2_1d(&u, &BoundaryData1D::new(0.0, 1.0));
        assert!(r.values().iter().all(|v| (v - 2.0).abs() < 1e-9), "{r:?}");

        let lin = MeshFunction::sample(m, |x| 3.0 * x - 1.0);
        let r = apply_d2_1d(&lin, &BoundaryData1D::new(-1.0, 2.0));
        assert!(r.values().iter().all(|v| v.abs() < 1e-9));

        let one = MeshFunction::from_values(mesh(1), vec![5.0]).unwrap();
        assert_eq!(apply_d2_1d(&one, &BoundaryData1D::new(2.0, 8.0)).values(), &[0.0]);
    }

    #[test]
    fn m_examples() {
        let m = mesh(5);
        let c = MeshFunction::constant(m, 2.5);
        assert_eq!(apply_m_1d(&c, &BoundaryData1D::uniform(2.5)).values(), &[2.5; 5]);

        let bump = MeshFunction::from_values(mesh(3), vec![0.0, 1.0, 0.0]).unwrap();
        let r = apply_m_1d(&bump, &BoundaryData1D::uniform(0.0));
        assert_eq!(r.values()[1], 0.5);

        // u_i = (-1)^i with matching boundary values
        let n = 8;
        let alt = MeshFunction::sample(mesh(n), |_| 0.0)
            .with_values((1..=n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect());
        let bc = BoundaryData1D::new(1.0, if (n + 1) % 2 == 0 { 1.0 } else { -1.0 });
        assert!(apply_m_1d(&alt, &bc).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn solve_m_examples() {
        let c = MeshFunction::constant(mesh(6), 4.0);
        let a = solve_m_1d(&c, &BoundaryData1D::uniform(4.0)).unwrap();
        assert!(a.values().iter().all(|v| (v - 4.0).abs() < 1e-13));

        let one = MeshFunction::from_values(mesh(1), vec![1.0]).unwrap();
        assert_eq!(solve_m_1d(&one, &BoundaryData1D::uniform(0.0)).unwrap().values(), &[2.0]);
    }

    #[test]
    fn operator_norms() {
        let m = mesh(9);
        assert_eq!(StencilOperator1D::new(StencilKind::M, m).norm_c(), 1.0);
        let d2 = StencilOperator1D::new(StencilKind::D2, m);
        assert!((d2.norm_c() - 400.0).abs() < 1e-9);
        assert_eq!(StencilOperator1D::new(StencilKind::Identity, m).norm_c(), 1.0);
    }
}
