//! Tridiagonal matrices and their LU factorization with partial pivoting
//! (the `gttrf`/`gttrs` scheme: row interchanges create one extra
//! superdiagonal in `U`).

use crate::{Error, Result};

/// Square tridiagonal matrix. `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    /// Constant bands `(lo, mid, hi)` on every row.
    pub fn toeplitz(n: usize, lo: f64, mid: f64, hi: f64) -> Self {
        let mut lower = vec![lo; n];
        let mut upper = vec![hi; n];
        if n > 0 {
            lower[0] = 0.0;
            upper[n - 1] = 0.0;
        }
        Self { lower, diag: vec![mid; n], upper }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Max absolute row sum.
    pub fn norm_c(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.lower[i].abs();
                }
                if i + 1 < n {
                    s += self.upper[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn factor(&self) -> TridiagonalLu {
        TridiagonalLu::new(self)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.factor().solve(rhs)
    }
}

#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    mult: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
    norm: f64,
}

impl TridiagonalLu {
    fn new(a: &Tridiagonal) -> Self {
        let n = a.len();
        let mut d = a.diag.clone();
        // Subdiagonal entry of row i+1 lives in mult[i].
        let mut mult: Vec<f64> = (1..n).map(|i| a.lower[i]).collect();
        let mut du: Vec<f64> = (0..n.saturating_sub(1)).map(|i| a.upper[i]).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= mult[i].abs() {
                if d[i] != 0.0 {
                    let fact = mult[i] / d[i];
                    mult[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / mult[i];
                d[i] = mult[i];
                mult[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        Self { mult, d, du, du2, swapped, norm: a.norm_c() }
    }

    /// Pivots of `U`, i.e. its diagonal.
    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    /// Smallest pivot magnitude divided by the matrix C-norm. Zero exactly
    /// when the matrix is singular.
    pub fn min_pivot_ratio(&self) -> f64 {
        if self.norm == 0.0 {
            return 0.0;
        }
        self.d.iter().fold(f64::INFINITY, |m, p| m.min(p.abs())) / self.norm
    }

    /// Sign of the determinant: -1, 0 or 1.
    pub fn det_sign(&self) -> i8 {
        let mut sign = 1i8;
        for &p in &self.d {
            if p == 0.0 {
                return 0;
            }
            if p < 0.0 {
                sign = -sign;
            }
        }
        for &s in &self.swapped {
            if s {
                sign = -sign;
            }
        }
        sign
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.d.len();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        if let Some(i) = self.d.iter().position(|&p| p == 0.0) {
            return Err(Error::Singular(format!("zero pivot in row {i}")));
        }
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.mult[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.mult[i] * b[i];
            }
        }
        if n == 0 {
            return Ok(b);
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(a: &Tridiagonal) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = a.diag[i];
            if i > 0 {
                m[i][i - 1] = a.lower[i];
            }
            if i + 1 < n {
                m[i][i + 1] = a.upper[i];
            }
        }
        m
    }

    // Laplace expansion along the first row is too slow; use the
    // three-term recurrence for tridiagonal determinants.
    fn det(a: &Tridiagonal) -> f64 {
        let (mut prev, mut cur) = (1.0, a.diag[0]);
        for i in 1..a.len() {
            let next = a.diag[i] * cur - a.lower[i] * a.upper[i - 1] * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn solves_with_row_interchanges() {
        // Small diagonal forces pivoting on every row.
        let a = Tridiagonal {
            lower: vec![0.0, 3.0, -2.0, 4.0, 1.0],
            diag: vec![1e-3, 0.5, 1e-4, -0.2, 2.0],
            upper: vec![2.0, -1.0, 3.0, 0.7, 0.0],
        };
        let x: Vec<f64> = vec![1.0, -2.0, 0.5, 3.0, -1.5];
        let b = a.mul_vec(&x);
        let got = a.solve(&b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12, "{got:?}");
        }
        let m = dense(&a);
        assert_eq!(m[1][0], 3.0);
        let d = det(&a);
        assert_eq!(a.factor().det_sign(), d.signum() as i8);
    }

    #[test]
    fn singular_is_reported() {
        let a = Tridiagonal::toeplitz(3, 1.0, 1.0, 1.0);
        let s = Tridiagonal { lower: vec![0.0, 1.0], diag: vec![1.0, 1.0], upper: vec![1.0, 0.0] };
        assert!(matches!(s.solve(&[1.0, 1.0]), Err(Error::Singular(_))));
        assert_eq!(s.factor().det_sign(), 0);
        assert!(a.solve(&[1.0, 2.0, 3.0]).is_ok());
    }

    #[test]
    fn single_row() {
        let a = Tridiagonal::toeplitz(1, 0.25, 0.5, 0.25);
        assert_eq!(a.solve(&[1.0]).unwrap(), vec![2.0]);
        assert_eq!(a.norm_c(), 0.5);
    }
}
