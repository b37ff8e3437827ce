//! Weighted time stepping for `dU/dt = F(U, U', U'')` with fixed Dirichlet data.
//!
//! `sigma = 0` is explicit, `sigma = 1` fully implicit. The monotonized forms
//! evolve the auxiliary `v` and report `y = Mv`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bvp1d::{bands, SchemeCoefficients, SchemeKind};
use crate::stencil::{apply_m_1d, solve_m_1d, Tridiagonal};
use crate::{norm_c, BoundaryData1D, Error, Field1D, Mesh1D, MeshFunction, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeStepConfig {
    pub tau: f64,
    pub sigma: f64,
    /// Fixed-point tolerance for implicit nonlinear steps (C-norm of the update).
    pub tol: f64,
    pub max_iters: usize,
    /// Under-relaxation of the fixed-point iteration, in (0, 1].
    pub relaxation: f64,
}

impl Default for TimeStepConfig {
    fn default() -> Self {
        Self { tau: 1e-3, sigma: 0.5, tol: 1e-12, max_iters: 1000, relaxation: 1.0 }
    }
}

impl TimeStepConfig {
    pub fn new(tau: f64, sigma: f64) -> Result<Self> {
        let cfg = Self { tau, sigma, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {}", self.tau)));
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(Error::InvalidParameter(format!("sigma must lie in [0, 1], got {}", self.sigma)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidParameter("relaxation must lie in (0, 1]".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Pointwise right-hand side `F(w, d1, d2, x)`, where `w` is the
/// undifferentiated argument and `d1`, `d2` are derivative approximations.
pub trait PointwiseRhs {
    fn eval(&self, w: f64, d1: f64, d2: f64, x: f64) -> f64;

    /// Coefficients when `F` is affine with constant coefficients; enables direct solves.
    fn linear(&self) -> Option<SchemeCoefficients> {
        None
    }
}

impl PointwiseRhs for SchemeCoefficients {
    fn eval(&self, w: f64, d1: f64, d2: f64, _x: f64) -> f64 {
        SchemeCoefficients::eval(self, w, d1, d2)
    }

    fn linear(&self) -> Option<SchemeCoefficients> {
        Some(*self)
    }
}

/// Wraps a closure as a right-hand side with no linear structure.
pub struct FnRhs<F>(pub F);

impl<F: Fn(f64, f64, f64, f64) -> f64> PointwiseRhs for FnRhs<F> {
    fn eval(&self, w: f64, d1: f64, d2: f64, x: f64) -> f64 {
        (self.0)(w, d1, d2, x)
    }
}

/// `F(w, D1 d, D2 d)` on the interior; `w_full` and `d_full` carry boundary values.
pub fn evaluate_rhs(f: &dyn PointwiseRhs, mesh: &Mesh1D, w_full: &[f64], d_full: &[f64]) -> Vec<f64> {
    let h = mesh.h();
    (1..=mesh.n())
        .map(|i| {
            let d1 = (d_full[i + 1] - d_full[i - 1]) / (2.0 * h);
            let d2 = (d_full[i + 1] - 2.0 * d_full[i] + d_full[i - 1]) / (h * h);
            f.eval(w_full[i], d1, d2, mesh.x(i))
        })
        .collect()
}

fn base_rhs(f: &dyn PointwiseRhs, u: &Field1D, bc: &BoundaryData1D) -> Vec<f64> {
    let full = u.with_boundary(bc);
    evaluate_rhs(f, u.mesh(), &full, &full)
}

/// `F(Mv, D1 v, D2 v)`.
fn mono_rhs(f: &dyn PointwiseRhs, v: &Field1D, bc: &BoundaryData1D) -> Vec<f64> {
    let w = apply_m_1d(v, bc).with_boundary(bc);
    evaluate_rhs(f, v.mesh(), &w, &v.with_boundary(bc))
}

/// `F(x) = L x + g` for the affine case, `L` and `g` unscaled by `h^2`.
fn affine_parts(c: &SchemeCoefficients, mesh: &Mesh1D, bc: &BoundaryData1D, kind: SchemeKind) -> (Tridiagonal, Vec<f64>) {
    let h = mesh.h();
    let hh = h * h;
    let (lo, mid, hi) = bands(c, h, kind);
    let l = Tridiagonal::toeplitz(mesh.n(), lo / hh, mid / hh, hi / hh);
    let n = mesh.n();
    let mut g = vec![c.k0; n];
    g[0] += lo / hh * bc.u0;
    g[n - 1] += hi / hh * bc.u_np1;
    (l, g)
}

fn m_interior(n: usize) -> Tridiagonal {
    Tridiagonal::toeplitz(n, 0.25, 0.5, 0.25)
}

fn step_failure(reason: impl Into<String>, residual: f64) -> Error {
    Error::StepFailure { reason: reason.into(), residual }
}

fn linear_solve(a: &Tridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    a.solve(rhs).map_err(|e| step_failure(e.to_string(), f64::NAN))
}

/// Relaxed fixed-point iteration `x <- (1 - w) x + w G(x)`.
fn fixed_point(
    x0: Vec<f64>,
    cfg: &TimeStepConfig,
    mut g: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let mut x = x0;
    let mut change = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let gx = g(&x)?;
        change = 0.0;
        for (xi, gi) in x.iter_mut().zip(&gx) {
            let next = (1.0 - cfg.relaxation) * *xi + cfg.relaxation * gi;
            change = change.max((next - *xi).abs());
            *xi = next;
        }
        if !change.is_finite() {
            return Err(step_failure("implicit iteration produced non-finite values", change));
        }
        if change <= cfg.tol {
            return Ok(x);
        }
    }
    Err(step_failure(format!("implicit iteration did not converge in {} iterations", cfg.max_iters), change))
}

/// One step of `(u' - u)/tau = sigma F(u') + (1 - sigma) F(u)`.
pub fn step_base(u: &Field1D, bc: &BoundaryData1D, f: &dyn PointwiseRhs, cfg: &TimeStepConfig) -> Result<Field1D> {
    cfg.validate()?;
    let mesh = *u.mesh();
    let (tau, s) = (cfg.tau, cfg.sigma);
    let f_n = base_rhs(f, u, bc);
    let explicit: Vec<f64> = u.values().iter().zip(&f_n).map(|(ui, fi)| ui + tau * (1.0 - s) * fi).collect();
    let next = if s == 0.0 {
        explicit
    } else if let Some(c) = f.linear() {
        // (I - tau s L) u' = explicit + tau s g
        let (l, g) = affine_parts(&c, &mesh, bc, SchemeKind::Base);
        let a = shifted(&identity(mesh.n()), &l, tau * s);
        let rhs: Vec<f64> = explicit.iter().zip(&g).map(|(e, gi)| e + tau * s * gi).collect();
        linear_solve(&a, &rhs)?
    } else {
        fixed_point(u.values().to_vec(), cfg, |x| {
            let trial = MeshFunction::from_values(mesh, x.to_vec())?;
            let fx = base_rhs(f, &trial, bc);
            Ok(explicit.iter().zip(&fx).map(|(e, fi)| e + tau * s * fi).collect())
        })?
    };
    MeshFunction::from_values(mesh, next)
}

fn identity(n: usize) -> Tridiagonal {
    Tridiagonal::toeplitz(n, 0.0, 1.0, 0.0)
}

/// `a - t * l`.
fn shifted(a: &Tridiagonal, l: &Tridiagonal, t: f64) -> Tridiagonal {
    let sub = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p - t * q).collect();
    Tridiagonal { lower: sub(&a.lower, &l.lower), diag: sub(&a.diag, &l.diag), upper: sub(&a.upper, &l.upper) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonizedState {
    pub v: Field1D,
    pub y: Field1D,
}

impl MonotonizedState {
    pub fn from_v(v: Field1D, bc: &BoundaryData1D) -> Self {
        let y = apply_m_1d(&v, bc);
        Self { v, y }
    }
}

/// One step of `(y' - Mv)/tau = sigma F(Mv', D1 v', D2 v') + (1 - sigma) F(Mv, D1 v, D2 v)`,
/// advancing `y` first and recovering `v' = M^{-1} y'`.
pub fn step_monotonized(
    v: &Field1D,
    bc: &BoundaryData1D,
    f: &dyn PointwiseRhs,
    cfg: &TimeStepConfig,
) -> Result<MonotonizedState> {
    cfg.validate()?;
    let mesh = *v.mesh();
    let n = mesh.n();
    let (tau, s) = (cfg.tau, cfg.sigma);
    let mv = apply_m_1d(v, bc);
    let f_n = mono_rhs(f, v, bc);
    let explicit: Vec<f64> = mv.values().iter().zip(&f_n).map(|(y, fi)| y + tau * (1.0 - s) * fi).collect();
    let y_next = if s == 0.0 {
        explicit
    } else if let Some(c) = f.linear() {
        // F(y') = L M^{-1} (y' - m_b) + g, dense in y'.
        let (l, g) = affine_parts(&c, &mesh, bc, SchemeKind::Monotonized);
        let m = m_interior(n);
        let mut l_minv = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = l.mul_vec(&linear_solve(&m, &e)?);
            l_minv.set_column(j, &DVector::from_column_slice(&col));
        }
        let mut m_b = DVector::<f64>::zeros(n);
        m_b[0] += 0.25 * bc.u0;
        m_b[n - 1] += 0.25 * bc.u_np1;
        let system = DMatrix::<f64>::identity(n, n) - &l_minv * (tau * s);
        let shift = DVector::from_column_slice(&g) - &l_minv * m_b;
        let rhs = DVector::from_column_slice(&explicit) + shift * (tau * s);
        let sol = system
            .lu()
            .solve(&rhs)
            .ok_or_else(|| step_failure("implicit system is singular", f64::NAN))?;
        sol.as_slice().to_vec()
    } else {
        fixed_point(mv.values().to_vec(), cfg, |y| {
            let vy = solve_m_1d(&MeshFunction::from_values(mesh, y.to_vec())?, bc)?;
            let fy = mono_rhs(f, &vy, bc);
            Ok(explicit.iter().zip(&fy).map(|(e, fi)| e + tau * s * fi).collect())
        })?
    };
    let y = MeshFunction::from_values(mesh, y_next)?;
    let v = solve_m_1d(&y, bc).map_err(|e| step_failure(format!("M solve failed: {e}"), f64::NAN))?;
    Ok(MonotonizedState { v, y })
}

/// The same step rearranged for `v`:
/// `v' = v + tau M^{-1} [sigma F(Mv', ..) + (1 - sigma) F(Mv, ..)]`, then `y' = Mv'`.
pub fn step_monotonized_alt(
    v: &Field1D,
    bc: &BoundaryData1D,
    f: &dyn PointwiseRhs,
    cfg: &TimeStepConfig,
) -> Result<MonotonizedState> {
    cfg.validate()?;
    let mesh = *v.mesh();
    let n = mesh.n();
    let (tau, s) = (cfg.tau, cfg.sigma);
    let m = m_interior(n);
    let f_n = mono_rhs(f, v, bc);
    let mv_int = m.mul_vec(v.values());
    let next = if s == 0.0 {
        let inc = linear_solve(&m, &f_n.iter().map(|fi| tau * fi).collect::<Vec<_>>())?;
        v.values().iter().zip(&inc).map(|(a, b)| a + b).collect()
    } else if let Some(c) = f.linear() {
        // (M - tau s L) v' = M v + tau s g + tau (1 - s) F_n
        let (l, g) = affine_parts(&c, &mesh, bc, SchemeKind::Monotonized);
        let a = shifted(&m, &l, tau * s);
        let rhs: Vec<f64> = (0..n).map(|i| mv_int[i] + tau * s * g[i] + tau * (1.0 - s) * f_n[i]).collect();
        linear_solve(&a, &rhs)?
    } else {
        fixed_point(v.values().to_vec(), cfg, |x| {
            let trial = MeshFunction::from_values(mesh, x.to_vec())?;
            let fx = mono_rhs(f, &trial, bc);
            let rhs: Vec<f64> = (0..n).map(|i| tau * (s * fx[i] + (1.0 - s) * f_n[i])).collect();
            let inc = linear_solve(&m, &rhs)?;
            Ok(v.values().iter().zip(&inc).map(|(a, b)| a + b).collect())
        })?
    };
    Ok(MonotonizedState::from_v(MeshFunction::from_values(mesh, next)?, bc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepForm {
    Base,
    /// Advance `y`, then solve `Mv = y`.
    Monotonized,
    /// Advance `v` directly.
    MonotonizedAlt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub t: f64,
    /// `|x_{n+1} - x_n|_C / tau` for the evolved variable.
    pub update_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeRun {
    pub form: StepForm,
    /// `u` for the base form, `v` otherwise.
    pub state: Field1D,
    /// `y = Mv` for the monotonized forms.
    pub y: Option<Field1D>,
    pub steps: usize,
    pub converged: bool,
    pub trajectory: Vec<TrajectoryRecord>,
}

/// Step until the update rate falls to `steady_tol` or `max_steps` is hit.
/// Every `snapshot_every` steps the record carries the full state (0 disables).
#[allow(clippy::too_many_arguments)]
pub fn run_to_steady(
    initial: &Field1D,
    bc: &BoundaryData1D,
    f: &dyn PointwiseRhs,
    cfg: &TimeStepConfig,
    form: StepForm,
    steady_tol: f64,
    max_steps: usize,
    snapshot_every: usize,
) -> Result<TimeRun> {
    let mut state = initial.clone();
    let mut y = None;
    let mut trajectory = Vec::new();
    let mut converged = false;
    let mut steps = 0;
    while steps < max_steps {
        let (next, next_y) = match form {
            StepForm::Base => (step_base(&state, bc, f, cfg)?, None),
            StepForm::Monotonized => {
                let s = step_monotonized(&state, bc, f, cfg)?;
                (s.v, Some(s.y))
            }
            StepForm::MonotonizedAlt => {
                let s = step_monotonized_alt(&state, bc, f, cfg)?;
                (s.v, Some(s.y))
            }
        };
        steps += 1;
        let rate = next.dist_c(&state) / cfg.tau;
        if !rate.is_finite() {
            return Err(Error::Divergence { iteration: steps });
        }
        let snapshot = (snapshot_every > 0 && steps % snapshot_every == 0).then(|| next.values().to_vec());
        trajectory.push(TrajectoryRecord { step: steps, t: steps as f64 * cfg.tau, update_rate: rate, snapshot });
        state = next;
        y = next_y;
        if rate <= steady_tol {
            converged = true;
            break;
        }
    }
    if form != StepForm::Base && y.is_none() {
        y = Some(apply_m_1d(&state, bc));
    }
    Ok(TimeRun { form, state, y, steps, converged, trajectory })
}

/// C-norm of the stationary monotonized residual `F(Mv, D1 v, D2 v)`.
pub fn stationary_residual(f: &dyn PointwiseRhs, v: &Field1D, bc: &BoundaryData1D) -> f64 {
    norm_c(&mono_rhs(f, v, bc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh() -> Mesh1D {
        Mesh1D::new(0.0, 1.0, 9).unwrap()
    }

    fn wavy() -> Field1D {
        Field1D::sample(mesh(), |x| (3.0 * x).sin() + 0.3 * (17.0 * x).cos())
    }

    fn decay() -> SchemeCoefficients {
        SchemeCoefficients { k0: 0.0, k1: -1.0, k2: 0.0, k3: 0.0 }
    }

    #[test]
    fn config_validation() {
        assert!(TimeStepConfig::new(0.0, 0.5).is_err());
        assert!(TimeStepConfig::new(0.1, 1.5).is_err());
        assert!(TimeStepConfig::new(0.1, 1.0).is_ok());
    }

    #[test]
    fn zero_rhs_is_stationary() {
        let zero = SchemeCoefficients { k0: 0.0, k1: 0.0, k2: 0.0, k3: 0.0 };
        let nl = FnRhs(|_, _, _, _| 0.0);
        let bc = BoundaryData1D::new(0.1, 0.2);
        for sigma in [0.0, 0.5, 1.0] {
            let cfg = TimeStepConfig::new(0.1, sigma).unwrap();
            for f in [&zero as &dyn PointwiseRhs, &nl] {
                assert!(step_base(&wavy(), &bc, f, &cfg).unwrap().dist_c(&wavy()) < 1e-15);
                let s = step_monotonized(&wavy(), &bc, f, &cfg).unwrap();
                assert!(s.v.dist_c(&wavy()) < 1e-13);
                assert!(s.y.dist_c(&apply_m_1d(&wavy(), &bc)) < 1e-15);
                let a = step_monotonized_alt(&wavy(), &bc, f, &cfg).unwrap();
                assert!(a.v.dist_c(&wavy()) < 1e-13);
            }
        }
    }

    #[test]
    fn linear_decay_closed_forms() {
        let tau = 0.1;
        let bc = BoundaryData1D::uniform(0.0);
        let u = wavy();
        let ex = step_base(&u, &bc, &decay(), &TimeStepConfig::new(tau, 0.0).unwrap()).unwrap();
        let im = step_base(&u, &bc, &decay(), &TimeStepConfig::new(tau, 1.0).unwrap()).unwrap();
        for ((a, b), c) in u.values().iter().zip(ex.values()).zip(im.values()) {
            assert!((a * (1.0 - tau) - b).abs() < 1e-15);
            assert!((a / (1.0 + tau) - c).abs() < 1e-15);
        }
    }

    #[test]
    fn explicit_step_matches_definition() {
        let c = SchemeCoefficients { k0: 1.0, k1: -2.0, k2: 0.5, k3: 0.1 };
        let bc = BoundaryData1D::new(0.3, -0.2);
        let cfg = TimeStepConfig::new(0.01, 0.0).unwrap();
        let u = wavy();
        let next = step_base(&u, &bc, &c, &cfg).unwrap();
        let f = base_rhs(&c, &u, &bc);
        for i in 0..u.len() {
            assert!((next.values()[i] - u.values()[i] - 0.01 * f[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn nonlinear_implicit_step_satisfies_its_equation() {
        let f = FnRhs(|w: f64, _d1, d2, _x| 0.1 * d2 - w * w * w);
        let bc = BoundaryData1D::new(0.5, -0.5);
        let cfg = TimeStepConfig { tau: 0.01, sigma: 1.0, ..TimeStepConfig::default() };
        let u = wavy();
        let next = step_base(&u, &bc, &f, &cfg).unwrap();
        let fx = base_rhs(&f, &next, &bc);
        for i in 0..u.len() {
            let lhs = (next.values()[i] - u.values()[i]) / cfg.tau;
            assert!((lhs - fx[i]).abs() < 1e-8);
        }
        let stiff = TimeStepConfig { tau: 10.0, sigma: 1.0, max_iters: 5, ..TimeStepConfig::default() };
        assert!(matches!(step_base(&u, &bc, &f, &stiff), Err(Error::StepFailure { .. })));
    }

    #[test]
    fn linear_forms_agree() {
        let c = SchemeCoefficients { k0: -10.0, k1: 5.0, k2: -30.0, k3: 1.0 };
        let bc = BoundaryData1D::uniform(0.5);
        for sigma in [0.0, 0.5, 1.0] {
            let cfg = TimeStepConfig::new(1e-3, sigma).unwrap();
            let a = step_monotonized(&wavy(), &bc, &c, &cfg).unwrap();
            let b = step_monotonized_alt(&wavy(), &bc, &c, &cfg).unwrap();
            assert!(a.v.dist_c(&b.v) < 1e-10, "sigma={sigma}: {}", a.v.dist_c(&b.v));
            assert!(a.y.dist_c(&b.y) < 1e-10);
        }
    }

    #[test]
    fn nonlinear_forms_agree() {
        let f = FnRhs(|w: f64, d1: f64, d2, _x| 0.05 * d2 - 0.1 * w * d1);
        let bc = BoundaryData1D::new(0.2, 0.1);
        let cfg = TimeStepConfig { tau: 1e-3, sigma: 0.5, ..TimeStepConfig::default() };
        let a = step_monotonized(&wavy(), &bc, &f, &cfg).unwrap();
        let b = step_monotonized_alt(&wavy(), &bc, &f, &cfg).unwrap();
        assert!(a.v.dist_c(&b.v) < 1e-9);
    }

    #[test]
    fn sigma_half_is_the_average_of_the_endpoints() {
        // For linear F the update solves (u' - u)/tau = s F(u') + (1 - s) F(u).
        let c = SchemeCoefficients { k0: 1.0, k1: -1.0, k2: 0.3, k3: 0.2 };
        let bc = BoundaryData1D::new(0.0, 1.0);
        let cfg = TimeStepConfig::new(0.02, 0.5).unwrap();
        let u = wavy();
        let next = step_base(&u, &bc, &c, &cfg).unwrap();
        let f_old = base_rhs(&c, &u, &bc);
        let f_new = base_rhs(&c, &next, &bc);
        for i in 0..u.len() {
            let lhs = (next.values()[i] - u.values()[i]) / cfg.tau;
            assert!((lhs - 0.5 * (f_old[i] + f_new[i])).abs() < 1e-10);
        }
    }

    #[test]
    fn constants_persist() {
        let c = SchemeCoefficients { k0: 2.0, k1: -1.0, k2: 4.0, k3: 1.0 };
        let bc = BoundaryData1D::uniform(2.0);
        let v = Field1D::constant(mesh(), 2.0);
        let cfg = TimeStepConfig::new(0.05, 1.0).unwrap();
        for s in [step_monotonized(&v, &bc, &c, &cfg).unwrap(), step_monotonized_alt(&v, &bc, &c, &cfg).unwrap()] {
            assert!(s.v.values().iter().chain(s.y.values()).all(|x| (x - 2.0).abs() < 1e-12));
        }
    }

    #[test]
    fn trajectory_records_snapshots() {
        let c = SchemeCoefficients { k0: 0.0, k1: 0.0, k2: 0.0, k3: 1.0 };
        let bc = BoundaryData1D::new(0.0, 1.0);
        let cfg = TimeStepConfig::new(0.05, 1.0).unwrap();
        let run = run_to_steady(&wavy(), &bc, &c, &cfg, StepForm::Base, 1e-9, 10_000, 5).unwrap();
        assert!(run.converged);
        assert!(run.trajectory.iter().all(|r| r.snapshot.is_some() == (r.step % 5 == 0)));
        for (x, u) in mesh().interior_points().iter().zip(run.state.values()) {
            assert!((x - u).abs() < 1e-9);
        }
    }
}
