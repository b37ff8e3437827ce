//! Regular meshes and mesh functions.
//!
//! 1D unknowns are node-centered: a mesh on `[a, b]` with `n` interior
//! points has nodes `x_i = a + i h`, `i = 0..=n+1`, and only `1..=n` carry
//! unknowns. Boundary values live in [`BoundaryData1D`].
//!
//! 3D unknowns are cell-centered on an `N x N x N` cube of side `L`, stored
//! i-fastest: `flat = i + N j + N^2 k`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl Mesh1D {
    /// Mesh on `[a, b]` with `n` interior points, `h = (b - a) / (n + 1)`.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::InvalidMesh(format!("need finite a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(Error::InvalidMesh("need at least one interior point".into()));
        }
        let h = (b - a) / (n + 1) as f64;
        Ok(Self { a, b, n, h })
    }

    /// Mesh on `[a, b]` with `total` points including both endpoints.
    pub fn with_total_points(a: f64, b: f64, total: usize) -> Result<Self> {
        if total < 3 {
            return Err(Error::InvalidMesh(format!("need at least 3 points, got {total}")));
        }
        Self::new(a, b, total - 2)
    }

    /// Mesh on `[a, b]` whose step is `h`; `(b - a) / h` must be an integer.
    pub fn with_step(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidMesh(format!("step must be positive, got {h}")));
        }
        let cells = (b - a) / h;
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-9 * cells.max(1.0) || rounded < 2.0 {
            return Err(Error::InvalidMesh(format!("step {h} does not divide [{a}, {b}]")));
        }
        Self::new(a, b, rounded as usize - 1)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of interior (unknown-carrying) points.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node coordinate, `i` in `0..=n+1`.
    pub fn x(&self, i: usize) -> f64 {
        if i == self.n + 1 {
            self.b
        } else {
            self.a + i as f64 * self.h
        }
    }

    /// Coordinates of the interior nodes `x_1..x_n`.
    pub fn interior_points(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.x(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh3D {
    length: f64,
    n: usize,
    h: f64,
}

impl Mesh3D {
    /// Cube of side `length` split into `n^3` cells, `h = length / n`.
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidMesh(format!("cube side must be positive, got {length}")));
        }
        if n < 2 {
            return Err(Error::InvalidMesh(format!("need N >= 2 cells per direction, got {n}")));
        }
        Ok(Self { length, n, h: length / n as f64 })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Cells per direction.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn cell_count(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Cell-center coordinate along one axis.
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    pub fn unflat(&self, idx: usize) -> (usize, usize, usize) {
        (idx % self.n, (idx / self.n) % self.n, idx / (self.n * self.n))
    }
}

/// Checked flat index `i + N j + N^2 k`.
pub fn flat_index(i: usize, j: usize, k: usize, n: usize) -> Result<usize> {
    if i >= n || j >= n || k >= n {
        return Err(Error::Index { i, j, k, n });
    }
    Ok(i + n * (j + n * k))
}

/// Inverse of [`flat_index`].
pub fn unflatten(idx: usize, n: usize) -> Result<(usize, usize, usize)> {
    if n == 0 || idx >= n * n * n {
        return Err(Error::Index { i: idx, j: 0, k: 0, n });
    }
    Ok((idx % n, (idx / n) % n, idx / (n * n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData1D {
    pub u0: f64,
    pub u_np1: f64,
}

impl BoundaryData1D {
    pub fn new(u0: f64, u_np1: f64) -> Self {
        Self { u0, u_np1 }
    }

    pub fn uniform(value: f64) -> Self {
        Self { u0: value, u_np1: value }
    }
}

/// A mesh that carries a fixed number of unknowns.
pub trait Mesh: Copy + PartialEq + std::fmt::Debug {
    type Point;

    fn len(&self) -> usize;

    fn point(&self, idx: usize) -> Self::Point;
}

impl Mesh for Mesh1D {
    type Point = f64;

    fn len(&self) -> usize {
        self.n
    }

    /// Interior node `idx + 1`.
    fn point(&self, idx: usize) -> f64 {
        self.x(idx + 1)
    }
}

impl Mesh for Mesh3D {
    type Point = [f64; 3];

    fn len(&self) -> usize {
        self.cell_count()
    }

    fn point(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.unflat(idx);
        [self.center(i), self.center(j), self.center(k)]
    }
}

/// Scalar values attached to the unknowns of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFunction<M: Mesh> {
    mesh: M,
    values: Vec<f64>,
}

pub type Field1D = MeshFunction<Mesh1D>;
pub type Field3D = MeshFunction<Mesh3D>;

impl<M: Mesh> MeshFunction<M> {
    pub fn from_values(mesh: M, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::MeshMismatch(format!(
                "expected {} values, got {}",
                mesh.len(),
                values.len()
            )));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: M) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn constant(mesh: M, c: f64) -> Self {
        Self { mesh, values: vec![c; mesh.len()] }
    }

    /// Evaluate `f` at every unknown's coordinates.
    pub fn sample(mesh: M, f: impl Fn(M::Point) -> f64) -> Self {
        let values = (0..mesh.len()).map(|p| f(mesh.point(p))).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &M {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_c(&self) -> f64 {
        crate::norm_c(&self.values)
    }

    pub fn dist_c(&self, other: &Self) -> f64 {
        crate::dist_c(&self.values, &other.values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { mesh: self.mesh, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self { mesh: self.mesh, values }
    }

    pub(crate) fn ensure_same_mesh(&self, other: &Self) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch(format!("{:?} vs {:?}", self.mesh, other.mesh)));
        }
        Ok(())
    }
}

impl Field1D {
    /// Values with the boundary data attached: `u_0, u_1, .., u_n, u_{n+1}`.
    pub fn with_boundary(&self, bc: &BoundaryData1D) -> Vec<f64> {
        let mut full = Vec::with_capacity(self.values.len() + 2);
        full.push(bc.u0);
        full.extend_from_slice(&self.values);
        full.push(bc.u_np1);
        full
    }
}

impl Field3D {
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.mesh.flat(i, j, k)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh3d_steps() {
        let m = Mesh3D::new(1.0, 2).unwrap();
        assert_eq!(m.h(), 0.5);
        assert_eq!(m.cell_count(), 8);

        let fig2 = Mesh3D::new(1.0 / 30.0, 20).unwrap();
        assert!((fig2.h() - 1.0 / 600.0).abs() < 1e-18);
        assert_eq!(fig2.cell_count(), 8000);

        assert!(matches!(Mesh3D::new(1.0, 0), Err(Error::InvalidMesh(_))));
        assert!(matches!(Mesh3D::new(1.0, 1), Err(Error::InvalidMesh(_))));
        assert!(matches!(Mesh3D::new(-1.0, 4), Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn mesh1d_steps() {
        let m = Mesh1D::new(0.0, 1.0, 3).unwrap();
        assert_eq!(m.h(), 0.25);
        assert_eq!(m.x(0), 0.0);
        assert_eq!(m.x(4), 1.0);
        let m = Mesh1D::with_total_points(0.0, 1.0, 11).unwrap();
        assert_eq!(m.n(), 9);
        assert!((m.h() - 0.1).abs() < 1e-15);
        let m = Mesh1D::with_step(0.0, 1.0, 1.0 / 8.0).unwrap();
        assert_eq!(m.n(), 7);
        assert!(Mesh1D::with_step(0.0, 1.0, 0.3).is_err());
        assert!(Mesh1D::new(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn flat_index_examples() {
        assert_eq!(flat_index(0, 0, 0, 20).unwrap(), 0);
        assert_eq!(flat_index(19, 19, 19, 20).unwrap(), 7999);
        assert_eq!(flat_index(1, 2, 3, 4).unwrap(), 57);
        assert!(matches!(flat_index(4, 0, 0, 4), Err(Error::Index { .. })));
    }

    #[test]
    fn flat_index_bijective() {
        for n in 1..=8 {
            for idx in 0..n * n * n {
                let (i, j, k) = unflatten(idx, n).unwrap();
                assert_eq!(flat_index(i, j, k, n).unwrap(), idx);
            }
        }
    }

    #[test]
    fn sampling() {
        let m = Mesh1D::new(0.0, 1.0, 3).unwrap();
        assert_eq!(MeshFunction::sample(m, |x| x).values(), &[0.25, 0.5, 0.75]);
        assert!(MeshFunction::sample(m, |_| 0.0).values().iter().all(|&v| v == 0.0));

        let m3 = Mesh3D::new(1.0, 2).unwrap();
        let f = MeshFunction::sample(m3, |p| p[0]);
        assert_eq!(f.len(), 8);
        for idx in 0..8 {
            let (i, _, _) = m3.unflat(idx);
            assert_eq!(f.values()[idx], if i == 0 { 0.25 } else { 0.75 });
        }
    }

    #[test]
    fn from_values_checks_length() {
        let m = Mesh1D::new(0.0, 1.0, 3).unwrap();
        assert!(MeshFunction::from_values(m, vec![1.0; 2]).is_err());
    }
}
