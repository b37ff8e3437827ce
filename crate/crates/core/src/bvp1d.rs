//! Constant-coefficient boundary-value problem
//! `k0 + k1 U + k2 U' + k3 U'' = 0`, `U(a) = u0`, `U(b) = u_{n+1}`.
//!
//! The base scheme, multiplied through by `h^2`, is
//! `h^2 k0 + h^2 k1 u_i + h k2 (D1~ u)_i + k3 (D2~ u)_i = 0` with the unscaled
//! stencils `D1~ = (u_{i+1} - u_{i-1}) / 2` and `D2~ = u_{i+1} - 2 u_i + u_{i-1}`.
//! The monotonized scheme replaces `u_i` in the `k1` term by `(Mv)_i` and
//! returns `y = Mv`. Both stay tridiagonal.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::stencil::{apply_m_1d, solve_m_1d, Tridiagonal};
use crate::{BoundaryData1D, Error, Field1D, Mesh1D, MeshFunction, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeCoefficients {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl SchemeCoefficients {
    pub fn new(k0: f64, k1: f64, k2: f64, k3: f64) -> Result<Self> {
        let c = Self { k0, k1, k2, k3 };
        c.validate()?;
        Ok(c)
    }

    /// The oscillating example: `10 - 5U + 30U' - U'' = 0`.
    pub fn fig1() -> Self {
        Self { k0: 10.0, k1: -5.0, k2: 30.0, k3: -1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.k0, self.k1, self.k2, self.k3].iter().all(|k| k.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        if self.k3 == 0.0 {
            return Err(Error::InvalidParameter("k3 must be nonzero".into()));
        }
        Ok(())
    }

    /// Pointwise value `k0 + k1 w + k2 d1 + k3 d2`.
    pub fn eval(&self, w: f64, d1: f64, d2: f64) -> f64 {
        self.k0 + self.k1 * w + self.k2 * d1 + self.k3 * d2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Base,
    Monotonized,
    /// Monotonized scheme written for `y` with `M^{-1}` inside the derivatives.
    Form12,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bvp1dSolution {
    pub scheme: SchemeKind,
    pub bc: BoundaryData1D,
    /// `u` for the base scheme, `y = Mv` otherwise.
    pub solution: Field1D,
    /// The auxiliary `v` of the monotonized schemes.
    pub auxiliary: Option<Field1D>,
    /// C-norm of the `h^2`-scaled scheme residual.
    pub residual_c_norm: f64,
}

impl Bvp1dSolution {
    pub fn mesh(&self) -> &Mesh1D {
        self.solution.mesh()
    }

    /// Solution with boundary values attached.
    pub fn full(&self) -> Vec<f64> {
        self.solution.with_boundary(&self.bc)
    }
}

/// Band values `(lower, diagonal, upper)` of the `h^2`-scaled scheme.
pub(crate) fn bands(c: &SchemeCoefficients, h: f64, kind: SchemeKind) -> (f64, f64, f64) {
    let hh = h * h;
    let (lo, mid, hi) = (-0.5 * h * c.k2 + c.k3, -2.0 * c.k3, 0.5 * h * c.k2 + c.k3);
    match kind {
        SchemeKind::Base => (lo, mid + hh * c.k1, hi),
        SchemeKind::Monotonized | SchemeKind::Form12 => {
            (lo + 0.25 * hh * c.k1, mid + 0.5 * hh * c.k1, hi + 0.25 * hh * c.k1)
        }
    }
}

/// `h^2`-scaled matrix of the scheme acting on the solved-for variable.
pub fn scheme_matrix(c: &SchemeCoefficients, mesh: &Mesh1D, kind: SchemeKind) -> Tridiagonal {
    let (lo, mid, hi) = bands(c, mesh.h(), kind);
    Tridiagonal::toeplitz(mesh.n(), lo, mid, hi)
}

fn scheme_rhs(c: &SchemeCoefficients, mesh: &Mesh1D, bc: &BoundaryData1D, kind: SchemeKind) -> Vec<f64> {
    let h = mesh.h();
    let n = mesh.n();
    let (lo, _, hi) = bands(c, h, kind);
    let mut rhs = vec![-h * h * c.k0; n];
    rhs[0] -= lo * bc.u0;
    rhs[n - 1] -= hi * bc.u_np1;
    rhs
}

/// `h^2`-scaled scheme residual with the undifferentiated term `w` and the
/// differentiated variable `d`, both given with boundary values attached.
fn residual(c: &SchemeCoefficients, h: f64, w_full: &[f64], d_full: &[f64]) -> Vec<f64> {
    (1..d_full.len() - 1)
        .map(|i| {
            let d1 = 0.5 * (d_full[i + 1] - d_full[i - 1]);
            let d2 = d_full[i + 1] - 2.0 * d_full[i] + d_full[i - 1];
            h * h * c.k0 + h * h * c.k1 * w_full[i] + h * c.k2 * d1 + c.k3 * d2
        })
        .collect()
}

fn solve_tridiagonal(a: &Tridiagonal, rhs: &[f64], h: f64) -> Result<Vec<f64>> {
    a.solve(rhs).map_err(|_| Error::SingularScheme { h })
}

pub fn solve_base(c: &SchemeCoefficients, mesh: &Mesh1D, bc: &BoundaryData1D) -> Result<Bvp1dSolution> {
    c.validate()?;
    let a = scheme_matrix(c, mesh, SchemeKind::Base);
    let rhs = scheme_rhs(c, mesh, bc, SchemeKind::Base);
    let u = MeshFunction::from_values(*mesh, solve_tridiagonal(&a, &rhs, mesh.h())?)?;
    let full = u.with_boundary(bc);
    let r = residual(c, mesh.h(), &full, &full);
    Ok(Bvp1dSolution {
        scheme: SchemeKind::Base,
        bc: *bc,
        solution: u,
        auxiliary: None,
        residual_c_norm: crate::norm_c(&r),
    })
}

pub fn solve_monotonized(
    c: &SchemeCoefficients,
    mesh: &Mesh1D,
    bc: &BoundaryData1D,
) -> Result<Bvp1dSolution> {
    c.validate()?;
    let a = scheme_matrix(c, mesh, SchemeKind::Monotonized);
    let rhs = scheme_rhs(c, mesh, bc, SchemeKind::Monotonized);
    let v = MeshFunction::from_values(*mesh, solve_tridiagonal(&a, &rhs, mesh.h())?)?;
    let y = apply_m_1d(&v, bc);
    let r = residual(c, mesh.h(), &y.with_boundary(bc), &v.with_boundary(bc));
    Ok(Bvp1dSolution {
        scheme: SchemeKind::Monotonized,
        bc: *bc,
        solution: y,
        auxiliary: Some(v),
        residual_c_norm: crate::norm_c(&r),
    })
}

/// Solve the monotonized scheme directly for `y`, with `v = M^{-1} y`
/// substituted into the derivative terms. Dense; meant as a cross-check.
pub fn solve_form12(c: &SchemeCoefficients, mesh: &Mesh1D, bc: &BoundaryData1D) -> Result<Bvp1dSolution> {
    c.validate()?;
    let n = mesh.n();
    let h = mesh.h();
    let zero_bc = BoundaryData1D::uniform(0.0);

    // Columns of M^{-1} on the interior (homogeneous boundary values).
    let mut m_inv = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve_m_1d(&MeshFunction::from_values(*mesh, e)?, &zero_bc)?;
        m_inv.set_column(j, &DVector::from_column_slice(col.values()));
    }
    // Derivative part T = h k2 D1~ + k3 D2~ (interior block) and its boundary term.
    let (lo, mid, hi) = bands(c, h, SchemeKind::Base);
    let t = Tridiagonal::toeplitz(n, lo, mid - h * h * c.k1, hi);
    let mut t_dense = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        t_dense[(i, i)] = t.diag[i];
        if i > 0 {
            t_dense[(i, i - 1)] = t.lower[i];
        }
        if i + 1 < n {
            t_dense[(i, i + 1)] = t.upper[i];
        }
    }
    let mut t_bc = DVector::<f64>::zeros(n);
    t_bc[0] += lo * bc.u0;
    t_bc[n - 1] += hi * bc.u_np1;
    // M's own boundary contribution: y = M_int v + m_bc.
    let mut m_bc = DVector::<f64>::zeros(n);
    m_bc[0] += 0.25 * bc.u0;
    m_bc[n - 1] += 0.25 * bc.u_np1;

    let t_minv = &t_dense * &m_inv;
    let system = DMatrix::<f64>::identity(n, n) * (h * h * c.k1) + &t_minv;
    let rhs = DVector::<f64>::from_element(n, -h * h * c.k0) - t_bc + &t_minv * m_bc;
    let y = system.lu().solve(&rhs).ok_or(Error::SingularScheme { h })?;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularScheme { h });
    }
    let y = MeshFunction::from_values(*mesh, y.as_slice().to_vec())?;
    let v = solve_m_1d(&y, bc)?;
    let r = residual(c, h, &y.with_boundary(bc), &v.with_boundary(bc));
    Ok(Bvp1dSolution {
        scheme: SchemeKind::Form12,
        bc: *bc,
        solution: y,
        auxiliary: Some(v),
        residual_c_norm: crate::norm_c(&r),
    })
}

/// The residual bound every returned solution meets:
/// `1e-10 * (|A|_C |x|_C + |h^2 k0|)`, with `x` the solved-for variable.
pub fn residual_bound(c: &SchemeCoefficients, sol: &Bvp1dSolution) -> f64 {
    let h = sol.mesh().h();
    let (lo, mid, hi) = bands(c, h, sol.scheme);
    let x = sol.auxiliary.as_ref().unwrap_or(&sol.solution);
    let x_norm = x.norm_c().max(sol.bc.u0.abs()).max(sol.bc.u_np1.abs());
    1e-10 * ((lo.abs() + mid.abs() + hi.abs()) * x_norm + (h * h * c.k0).abs())
}

/// C-norm of `A_base (u - v) - h^2 k1 (Mv - v)`. Subtracting the monotonized
/// scheme from the base scheme makes this vanish.
pub fn difference_identity_residual(
    c: &SchemeCoefficients,
    base: &Bvp1dSolution,
    mono: &Bvp1dSolution,
) -> Result<f64> {
    let v = mono
        .auxiliary
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("monotonized solution lacks v".into()))?;
    base.solution.ensure_same_mesh(v)?;
    let mesh = base.mesh();
    let h = mesh.h();
    let a = scheme_matrix(c, mesh, SchemeKind::Base);
    let diff: Vec<f64> = base.solution.values().iter().zip(v.values()).map(|(u, v)| u - v).collect();
    let lhs = a.mul_vec(&diff);
    let rhs = mono.solution.values().iter().zip(v.values()).map(|(y, v)| h * h * c.k1 * (y - v));
    Ok(lhs.iter().zip(rhs).fold(0.0_f64, |m, (l, r)| m.max((l - r).abs())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub h: f64,
    pub n: usize,
    /// Smallest pivot over matrix C-norm, base scheme.
    pub base_indicator: f64,
    pub mono_indicator: f64,
    pub base_det_sign: i8,
    pub mono_det_sign: i8,
    /// Monotonized matrix near-singular while the base matrix is not.
    pub flagged: bool,
}

/// Pivot ratio below which a scheme matrix counts as near-singular.
pub const NEAR_SINGULAR: f64 = 1e-8;

/// Nonsingularity of both scheme matrices for each step in `h_values`;
/// every `h` must divide `[a, b]`.
pub fn determinant_scan(
    c: &SchemeCoefficients,
    a: f64,
    b: f64,
    h_values: &[f64],
) -> Result<Vec<ScanEntry>> {
    c.validate()?;
    h_values
        .iter()
        .map(|&h| {
            let mesh = Mesh1D::with_step(a, b, h)?;
            let base = scheme_matrix(c, &mesh, SchemeKind::Base).factor();
            let mono = scheme_matrix(c, &mesh, SchemeKind::Monotonized).factor();
            let (bi, mi) = (base.min_pivot_ratio(), mono.min_pivot_ratio());
            Ok(ScanEntry {
                h: mesh.h(),
                n: mesh.n(),
                base_indicator: bi,
                mono_indicator: mi,
                base_det_sign: base.det_sign(),
                mono_det_sign: mono.det_sign(),
                flagged: mi < NEAR_SINGULAR && bi >= NEAR_SINGULAR,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Basis {
    /// `exp(rate (x - anchor))`
    Exp { rate: f64, anchor: f64 },
    /// `(x - anchor) exp(rate (x - anchor))`
    XExp { rate: f64, anchor: f64 },
    /// `exp(alpha (x - anchor)) cos(beta x)` or `sin`
    ExpCos { alpha: f64, beta: f64, anchor: f64 },
    ExpSin { alpha: f64, beta: f64, anchor: f64 },
    Const,
    X,
}

impl Basis {
    /// Value, first and second derivative at `x`.
    fn eval(&self, x: f64) -> [f64; 3] {
        match *self {
            Basis::Exp { rate, anchor } => {
                let e = (rate * (x - anchor)).exp();
                [e, rate * e, rate * rate * e]
            }
            Basis::XExp { rate, anchor } => {
                let s = x - anchor;
                let e = (rate * s).exp();
                [s * e, e * (1.0 + rate * s), e * rate * (2.0 + rate * s)]
            }
            Basis::ExpCos { alpha, beta, anchor } => {
                let e = (alpha * (x - anchor)).exp();
                let (s, c) = (beta * x).sin_cos();
                let f = c;
                let df = -beta * s;
                let ddf = -beta * beta * c;
                [e * f, e * (alpha * f + df), e * (alpha * alpha * f + 2.0 * alpha * df + ddf)]
            }
            Basis::ExpSin { alpha, beta, anchor } => {
                let e = (alpha * (x - anchor)).exp();
                let (s, c) = (beta * x).sin_cos();
                let f = s;
                let df = beta * c;
                let ddf = -beta * beta * s;
                [e * f, e * (alpha * f + df), e * (alpha * alpha * f + 2.0 * alpha * df + ddf)]
            }
            Basis::Const => [1.0, 0.0, 0.0],
            Basis::X => [x, 1.0, 0.0],
        }
    }
}

/// Closed-form solution of the constant-coefficient problem:
/// a polynomial particular solution plus two homogeneous modes fitted to the
/// boundary values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSolution {
    coefficients: SchemeCoefficients,
    /// Particular solution `p0 + p1 x + p2 x^2`.
    particular: [f64; 3],
    basis: [Basis; 2],
    weights: [f64; 2],
}

impl AnalyticSolution {
    pub fn new(c: &SchemeCoefficients, bc: &BoundaryData1D, a: f64, b: f64) -> Result<Self> {
        c.validate()?;
        let (k0, k1, k2, k3) = (c.k0, c.k1, c.k2, c.k3);
        let particular;
        let basis;
        if k1 != 0.0 {
            particular = [-k0 / k1, 0.0, 0.0];
            let disc = k2 * k2 - 4.0 * k3 * k1;
            if disc > 0.0 {
                // Stable root pair.
                let sign = if k2 >= 0.0 { 1.0 } else { -1.0 };
                let q = -0.5 * (k2 + sign * disc.sqrt());
                let (r1, r2) = (q / k3, k1 / q);
                basis = [exp_mode(r1, a, b), exp_mode(r2, a, b)];
            } else if disc == 0.0 {
                let r = -k2 / (2.0 * k3);
                let anchor = if r > 0.0 { b } else { a };
                basis = [Basis::Exp { rate: r, anchor }, Basis::XExp { rate: r, anchor }];
            } else {
                let alpha = -k2 / (2.0 * k3);
                let beta = (-disc).sqrt() / (2.0 * k3.abs());
                let anchor = if alpha > 0.0 { b } else { a };
                basis = [Basis::ExpCos { alpha, beta, anchor }, Basis::ExpSin { alpha, beta, anchor }];
            }
        } else if k2 != 0.0 {
            // k3 U'' + k2 U' + k0 = 0
            particular = [0.0, -k0 / k2, 0.0];
            basis = [Basis::Const, exp_mode(-k2 / k3, a, b)];
        } else {
            particular = [0.0, 0.0, -k0 / (2.0 * k3)];
            basis = [Basis::Const, Basis::X];
        }
        let p = |x: f64| particular[0] + particular[1] * x + particular[2] * x * x;
        let m = nalgebra::Matrix2::new(basis[0].eval(a)[0], basis[1].eval(a)[0], basis[0].eval(b)[0], basis[1].eval(b)[0]);
        let rhs = nalgebra::Vector2::new(bc.u0 - p(a), bc.u_np1 - p(b));
        let w = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Degenerate("homogeneous modes cannot match the boundary values".into()))?;
        Ok(Self { coefficients: *c, particular, basis, weights: [w[0], w[1]] })
    }

    /// Value, first and second derivative.
    pub fn eval_derivatives(&self, x: f64) -> [f64; 3] {
        let p = self.particular;
        let mut out = [p[0] + p[1] * x + p[2] * x * x, p[1] + 2.0 * p[2] * x, 2.0 * p[2]];
        for (b, w) in self.basis.iter().zip(self.weights) {
            let e = b.eval(x);
            for d in 0..3 {
                out[d] += w * e[d];
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_derivatives(x)[0]
    }

    /// `k0 + k1 U + k2 U' + k3 U''` at `x`.
    pub fn ode_residual(&self, x: f64) -> f64 {
        let [u, du, ddu] = self.eval_derivatives(x);
        self.coefficients.eval(u, du, ddu)
    }
}

/// Anchor growing exponentials at the right end and decaying ones at the
/// left so neither overflows.
fn exp_mode(rate: f64, a: f64, b: f64) -> Basis {
    Basis::Exp { rate, anchor: if rate > 0.0 { b } else { a } }
}

pub fn analytic_solution(c: &SchemeCoefficients, bc: &BoundaryData1D, a: f64, b: f64) -> Result<AnalyticSolution> {
    AnalyticSolution::new(c, bc, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderStatus {
    Converging,
    /// Errors did not decrease strictly under refinement.
    NonConvergent,
    /// Errors are at roundoff level; the scheme is exact for this problem.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub scheme: SchemeKind,
    pub n: Vec<usize>,
    pub h: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log(error)` against `log(h)`.
    pub order: Option<f64>,
    pub status: OrderStatus,
}

/// Errors below this (relative to the solution scale) count as roundoff.
const ROUNDOFF_ERROR: f64 = 1e-11;

pub fn convergence_order(
    c: &SchemeCoefficients,
    bc: &BoundaryData1D,
    a: f64,
    b: f64,
    scheme: SchemeKind,
    n_sequence: &[usize],
) -> Result<ConvergenceStudy> {
    if n_sequence.len() < 3 || n_sequence.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "need at least three strictly increasing mesh sizes".into(),
        ));
    }
    let exact = analytic_solution(c, bc, a, b)?;
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    let mut scale = bc.u0.abs().max(bc.u_np1.abs());
    for &n in n_sequence {
        let mesh = Mesh1D::new(a, b, n)?;
        let sol = match scheme {
            SchemeKind::Base => solve_base(c, &mesh, bc)?,
            SchemeKind::Monotonized => solve_monotonized(c, &mesh, bc)?,
            SchemeKind::Form12 => solve_form12(c, &mesh, bc)?,
        };
        let err = mesh
            .interior_points()
            .iter()
            .zip(sol.solution.values())
            .fold(0.0_f64, |m, (&x, &y)| m.max((y - exact.eval(x)).abs()));
        scale = scale.max(sol.solution.norm_c());
        hs.push(mesh.h());
        errors.push(err);
    }
    let status = if errors.iter().all(|&e| e <= ROUNDOFF_ERROR * scale.max(1.0)) {
        OrderStatus::Degenerate
    } else if errors.windows(2).any(|w| w[1] >= w[0]) {
        OrderStatus::NonConvergent
    } else {
        OrderStatus::Converging
    };
    let order = match status {
        OrderStatus::Degenerate => None,
        _ => Some(log_log_slope(&hs, &errors)),
    };
    Ok(ConvergenceStudy { scheme, n: n_sequence.to_vec(), h: hs, errors, order, status })
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::oscillates_point_to_point;

    fn unit(n: usize) -> Mesh1D {
        Mesh1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn rejects_zero_k3() {
        assert!(SchemeCoefficients::new(1.0, 1.0, 1.0, 0.0).is_err());
        let bad = SchemeCoefficients { k0: 0.0, k1: 0.0, k2: 0.0, k3: 0.0 };
        assert!(solve_base(&bad, &unit(3), &BoundaryData1D::uniform(0.0)).is_err());
    }

    #[test]
    fn base_is_exact_on_linear_and_quadratic() {
        let bc = BoundaryData1D::new(0.0, 1.0);
        for n in [1, 4, 9] {
            let lap = SchemeCoefficients::new(0.0, 0.0, 0.0, 1.0).unwrap();
            let s = solve_base(&lap, &unit(n), &bc).unwrap();
            for (x, u) in unit(n).interior_points().iter().zip(s.solution.values()) {
                assert!((x - u).abs() < 1e-14);
            }
            let quad = SchemeCoefficients::new(-2.0, 0.0, 0.0, 1.0).unwrap();
            let s = solve_base(&quad, &unit(n), &bc).unwrap();
            for (x, u) in unit(n).interior_points().iter().zip(s.solution.values()) {
                assert!((x * x - u).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn monotonized_coincides_when_k1_vanishes() {
        let c = SchemeCoefficients::new(1.0, 0.0, 3.0, -2.0).unwrap();
        let bc = BoundaryData1D::new(0.3, -0.7);
        let base = solve_base(&c, &unit(12), &bc).unwrap();
        let mono = solve_monotonized(&c, &unit(12), &bc).unwrap();
        let v = mono.auxiliary.as_ref().unwrap();
        assert!(base.solution.dist_c(v) < 1e-14);
        // y = M u
        let mu = apply_m_1d(&base.solution, &bc);
        assert!(mono.solution.dist_c(&mu) < 1e-14);
        let f12 = solve_form12(&c, &unit(12), &bc).unwrap();
        assert!(f12.solution.dist_c(&mu) < 1e-12);
    }

    #[test]
    fn constants_are_preserved() {
        let c = SchemeCoefficients::new(5.0, -1.0, 0.0, 1.0).unwrap();
        let bc = BoundaryData1D::uniform(5.0);
        for s in [
            solve_monotonized(&c, &unit(7), &bc).unwrap(),
            solve_form12(&c, &unit(7), &bc).unwrap(),
        ] {
            assert!(s.solution.values().iter().all(|v| (v - 5.0).abs() < 1e-12));
            assert!(s.auxiliary.unwrap().values().iter().all(|v| (v - 5.0).abs() < 1e-12));
        }
    }

    #[test]
    fn fig1_base_has_an_extremum_next_to_the_layer() {
        let mesh = Mesh1D::with_total_points(0.0, 1.0, 11).unwrap();
        let bc = BoundaryData1D::uniform(0.5);
        let s = solve_base(&SchemeCoefficients::fig1(), &mesh, &bc).unwrap();
        let full = s.full();
        // u_9 dips below both neighbors; the rest is monotone.
        assert!(oscillates_point_to_point(&full[8..=10]).unwrap());
        assert!(!oscillates_point_to_point(&full).unwrap());
    }

    #[test]
    fn residuals_meet_the_contract() {
        let c = SchemeCoefficients::fig1();
        let bc = BoundaryData1D::uniform(0.5);
        for n in [1, 2, 9, 98] {
            let mesh = unit(n);
            for s in [
                solve_base(&c, &mesh, &bc).unwrap(),
                solve_monotonized(&c, &mesh, &bc).unwrap(),
                solve_form12(&c, &mesh, &bc).unwrap(),
            ] {
                assert!(s.residual_c_norm <= residual_bound(&c, &s), "{:?} n={n}", s.scheme);
            }
        }
    }

    #[test]
    fn difference_identity_holds() {
        let c = SchemeCoefficients::fig1();
        let bc = BoundaryData1D::uniform(0.5);
        let mesh = unit(9);
        let base = solve_base(&c, &mesh, &bc).unwrap();
        let mono = solve_monotonized(&c, &mesh, &bc).unwrap();
        assert!(difference_identity_residual(&c, &base, &mono).unwrap() < 1e-10);
    }

    #[test]
    fn analytic_examples() {
        let lap = SchemeCoefficients::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let u = analytic_solution(&lap, &BoundaryData1D::new(0.0, 1.0), 0.0, 1.0).unwrap();
        for x in [0.0, 0.3, 0.7, 1.0] {
            assert!((u.eval(x) - x).abs() < 1e-14);
        }
        let flat = SchemeCoefficients::new(5.0, -1.0, 0.0, 1.0).unwrap();
        let u = analytic_solution(&flat, &BoundaryData1D::uniform(5.0), 0.0, 1.0).unwrap();
        for x in [0.0, 0.5, 1.0] {
            assert!((u.eval(x) - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_fig1_roots_and_residual() {
        let c = SchemeCoefficients::fig1();
        // -l^2 + 30 l - 5 = 0  =>  l = 15 -+ sqrt(220)
        let roots = [15.0 - 220f64.sqrt(), 15.0 + 220f64.sqrt()];
        for r in roots {
            assert!((c.k3 * r * r + c.k2 * r + c.k1).abs() < 1e-10);
        }
        let u = analytic_solution(&c, &BoundaryData1D::uniform(0.5), 0.0, 1.0).unwrap();
        let rates: Vec<f64> = u
            .basis
            .iter()
            .map(|b| match b {
                Basis::Exp { rate, .. } => *rate,
                other => panic!("unexpected basis {other:?}"),
            })
            .collect();
        let mut sorted = rates.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - roots[0]).abs() < 1e-12 && (sorted[1] - roots[1]).abs() < 1e-12);
        assert!((u.eval(0.0) - 0.5).abs() < 1e-12 && (u.eval(1.0) - 0.5).abs() < 1e-12);
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert!(u.ode_residual(x).abs() < 1e-9, "x={x}: {}", u.ode_residual(x));
        }
    }

    #[test]
    fn analytic_special_cases() {
        let bc = BoundaryData1D::new(0.2, -0.4);
        let cases = [
            SchemeCoefficients::new(1.0, 1.0, 2.0, 1.0).unwrap(), // repeated root
            SchemeCoefficients::new(1.0, 4.0, 1.0, 1.0).unwrap(), // complex roots
            SchemeCoefficients::new(1.0, 0.0, 2.0, 1.0).unwrap(), // k1 = 0
            SchemeCoefficients::new(1.0, 0.0, 0.0, 3.0).unwrap(), // k1 = k2 = 0
            SchemeCoefficients::new(0.5, -2.0, 40.0, 1.0).unwrap(),
        ];
        for c in cases {
            let u = analytic_solution(&c, &bc, 0.0, 1.0).unwrap();
            assert!((u.eval(0.0) - 0.2).abs() < 1e-12, "{c:?}");
            assert!((u.eval(1.0) + 0.4).abs() < 1e-12, "{c:?}");
            for i in 0..=20 {
                let x = i as f64 / 20.0;
                assert!(u.ode_residual(x).abs() < 1e-9, "{c:?} x={x}");
            }
        }
    }

    #[test]
    fn order_study() {
        let c = SchemeCoefficients::new(1.0, -1.0, 1.0, 1.0).unwrap();
        let bc = BoundaryData1D::new(0.0, 1.0);
        for kind in [SchemeKind::Base, SchemeKind::Monotonized] {
            let s = convergence_order(&c, &bc, 0.0, 1.0, kind, &[20, 40, 80, 160]).unwrap();
            assert_eq!(s.status, OrderStatus::Converging);
            let p = s.order.unwrap();
            assert!((1.8..=2.2).contains(&p), "{kind:?}: {p}");
        }
        let quad = SchemeCoefficients::new(-2.0, 0.0, 0.0, 1.0).unwrap();
        let s = convergence_order(&quad, &bc, 0.0, 1.0, SchemeKind::Base, &[5, 10, 20]).unwrap();
        assert_eq!(s.status, OrderStatus::Degenerate);
        assert!(s.order.is_none());
        assert!(convergence_order(&quad, &bc, 0.0, 1.0, SchemeKind::Base, &[5, 10]).is_err());
    }

    #[test]
    fn determinant_scan_examples() {
        let lap = SchemeCoefficients::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let hs: Vec<f64> = (2..=10).map(|p| 1.0 / f64::from(1u32 << p)).collect();
        let scan = determinant_scan(&lap, 0.0, 1.0, &hs).unwrap();
        assert_eq!(scan.len(), hs.len());
        assert!(scan.iter().all(|e| !e.flagged && e.base_indicator > NEAR_SINGULAR));
        assert!(determinant_scan(&lap, 0.0, 1.0, &[]).unwrap().is_empty());
    }
}
