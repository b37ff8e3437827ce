//! Steady incompressible flow through a cubic filter cell.
//!
//! Two opposite faces (normal to x) carry square holes with prescribed
//! pressure; the remaining facets are no-slip walls. The steady state is
//! reached by pseudo-time iteration
//! `v += sigma_v R(v, p)`, `p += sigma_p div v`,
//! with `R = -(w . grad) v - grad p / rho + nu lap v` and `w = v` for the base
//! scheme or `w = Mv` for the monotonized one.

use serde::{Deserialize, Serialize};

use crate::stencil::{apply_m_3d, div_3d, grad_3d, laplacian_3d, Axis, BoundaryPolicy3D, Face, FaceRule, GhostRule};
use crate::{Error, Field3D, Mesh3D, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Cube side.
    pub length: f64,
    /// Cells per direction.
    pub n: usize,
    pub rho: f64,
    pub nu: f64,
    /// Pressure on the inlet hole (x = 0).
    pub p0: f64,
    /// Pressure on the outlet hole (x = L).
    pub p1: f64,
    /// Zero-based cell range `hole_lo..=hole_hi` covered by the holes in both
    /// tangential directions.
    pub hole_lo: usize,
    pub hole_hi: usize,
    pub sigma_v: f64,
    pub sigma_p: f64,
    pub tol: f64,
    pub max_iters: usize,
}

/// Velocity step as a multiple of the explicit diffusion limit `h^2 / nu`.
pub const SIGMA_V_FACTOR: f64 = 0.15;
/// Pressure step as a multiple of `-rho nu`.
pub const SIGMA_P_FACTOR: f64 = 1.5;

impl FlowConfig {
    /// Pseudo-time steps that converge over the tested range of `N`.
    pub fn default_sigmas(length: f64, n: usize, rho: f64, nu: f64) -> (f64, f64) {
        let h = length / n as f64;
        (SIGMA_V_FACTOR * h * h / nu, -SIGMA_P_FACTOR * rho * nu)
    }

    /// The filter-cell experiment: `L = 1/30` mm, water, 1000 units of
    /// pressure drop, holes over the cells numbered 6..=15 (zero-based 5..=14)
    /// on a 20^3 mesh.
    pub fn fig2() -> Self {
        Self::scaled_fig2(20)
    }

    /// The filter-cell experiment on an `n^3` mesh with the hole covering the
    /// same central half of each face.
    pub fn scaled_fig2(n: usize) -> Self {
        let (length, rho, nu) = (1.0 / 30.0, 1.0, 1.002);
        let (sigma_v, sigma_p) = Self::default_sigmas(length, n, rho, nu);
        let (hole_lo, hole_hi) = (n / 4, n - n / 4 - 1);
        Self {
            length,
            n,
            rho,
            nu,
            p0: 1000.0,
            p1: 0.0,
            hole_lo,
            hole_hi,
            sigma_v,
            sigma_p,
            tol: 1e-7,
            max_iters: 200_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("length must be positive, got {}", self.length));
        }
        if self.n < 4 {
            return bad(format!("N must be at least 4, got {}", self.n));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) || !(self.nu > 0.0 && self.nu.is_finite()) {
            return bad("rho and nu must be positive".into());
        }
        if !(self.p0.is_finite() && self.p1.is_finite()) {
            return bad("hole pressures must be finite".into());
        }
        if self.hole_lo > self.hole_hi || self.hole_hi >= self.n {
            return bad(format!("hole range {}..={} outside 0..{}", self.hole_lo, self.hole_hi, self.n));
        }
        if !(self.sigma_v.is_finite() && self.sigma_p.is_finite()) {
            return bad("iteration parameters must be finite".into());
        }
        if !(self.tol > 0.0) || self.max_iters == 0 {
            return bad("tol and max_iters must be positive".into());
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Mesh3D> {
        Mesh3D::new(self.length, self.n)
    }

    /// Cell row through the hole centers: `j = k = floor((lo + hi) / 2)`.
    pub fn centerline_index(&self) -> usize {
        (self.hole_lo + self.hole_hi) / 2
    }
}

/// No-slip walls with the facet value pinned to zero; zero normal gradient
/// across the holes.
pub fn velocity_policy(cfg: &FlowConfig) -> BoundaryPolicy3D {
    let wall = GhostRule::Dirichlet(0.0);
    let hole = FaceRule::Patch { lo: cfg.hole_lo, hi: cfg.hole_hi, inside: GhostRule::ZeroGradient, outside: wall };
    BoundaryPolicy3D::uniform(wall).with_face(Face::XLow, hole).with_face(Face::XHigh, hole)
}

/// Hole pressures prescribed on the facet; inner one-sided differences
/// normal to the walls.
pub fn pressure_policy(cfg: &FlowConfig) -> BoundaryPolicy3D {
    let hole = |p| FaceRule::Patch {
        lo: cfg.hole_lo,
        hi: cfg.hole_hi,
        inside: GhostRule::Dirichlet(p),
        outside: GhostRule::OneSided,
    };
    BoundaryPolicy3D::uniform(GhostRule::OneSided)
        .with_face(Face::XLow, hole(cfg.p0))
        .with_face(Face::XHigh, hole(cfg.p1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub v: [Field3D; 3],
    pub p: Field3D,
}

impl FlowField {
    pub fn mesh(&self) -> &Mesh3D {
        self.p.mesh()
    }

    pub fn component(&self, axis: Axis) -> &Field3D {
        &self.v[axis.index()]
    }

    fn check(&self, cfg: &FlowConfig) -> Result<()> {
        let mesh = cfg.mesh()?;
        for f in self.v.iter().chain(std::iter::once(&self.p)) {
            if *f.mesh() != mesh {
                return Err(Error::MeshMismatch("field does not live on the configured mesh".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Base,
    Monotonized,
}

/// Zero velocity; pressure linear in x from `p0` to `p1`.
pub fn init_field(cfg: &FlowConfig) -> Result<FlowField> {
    cfg.validate()?;
    let mesh = cfg.mesh()?;
    let p = Field3D::sample(mesh, |x| cfg.p0 + (cfg.p1 - cfg.p0) * x[0] / cfg.length);
    Ok(FlowField { v: std::array::from_fn(|_| Field3D::zeros(mesh)), p })
}

/// Pseudo-time direction `R` for each velocity component.
pub fn momentum_residual(field: &FlowField, cfg: &FlowConfig, variant: Variant) -> Result<[Field3D; 3]> {
    field.check(cfg)?;
    let vp = velocity_policy(cfg);
    let pp = pressure_policy(cfg);
    let advecting: [Field3D; 3] = match variant {
        Variant::Base => field.v.clone(),
        Variant::Monotonized => [
            apply_m_3d(&field.v[0], &vp)?,
            apply_m_3d(&field.v[1], &vp)?,
            apply_m_3d(&field.v[2], &vp)?,
        ],
    };
    let mut out = Vec::with_capacity(3);
    for c in Axis::ALL {
        let comp = field.component(c);
        let mut r: Vec<f64> = grad_3d(&field.p, c, &pp)?.values().iter().map(|g| -g / cfg.rho).collect();
        let lap = laplacian_3d(comp, &vp)?;
        r.iter_mut().zip(lap.values()).for_each(|(ri, l)| *ri += cfg.nu * l);
        for b in Axis::ALL {
            let d = grad_3d(comp, b, &vp)?;
            let w = &advecting[b.index()];
            r.iter_mut().zip(w.values().iter().zip(d.values())).for_each(|(ri, (wi, di))| *ri -= wi * di);
        }
        out.push(comp.with_values(r));
    }
    Ok(out.try_into().expect("three components"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepNorms {
    /// `|R|_C` before the update.
    pub momentum: f64,
    /// `|sigma_v R|_C`.
    pub update: f64,
    /// `|div v|_C` after the velocity update.
    pub divergence: f64,
}

fn sweep(field: &FlowField, cfg: &FlowConfig, variant: Variant, iteration: usize) -> Result<(FlowField, SweepNorms)> {
    let r = momentum_residual(field, cfg, variant)?;
    let mut momentum = 0.0_f64;
    let v: [Field3D; 3] = std::array::from_fn(|c| {
        let vals = field.v[c]
            .values()
            .iter()
            .zip(r[c].values())
            .map(|(vi, ri)| {
                momentum = momentum.max(ri.abs());
                vi + cfg.sigma_v * ri
            })
            .collect();
        field.v[c].with_values(vals)
    });
    let div = div_3d([&v[0], &v[1], &v[2]], &velocity_policy(cfg))?;
    let p = field.p.with_values(field.p.values().iter().zip(div.values()).map(|(p, d)| p + cfg.sigma_p * d).collect());
    let norms = SweepNorms { momentum, update: cfg.sigma_v.abs() * momentum, divergence: div.norm_c() };
    let finite = v.iter().chain(std::iter::once(&p)).all(|f| f.values().iter().all(|x| x.is_finite()));
    if !finite || !norms.momentum.is_finite() {
        return Err(Error::Divergence { iteration });
    }
    Ok((FlowField { v, p }, norms))
}

/// One Jacobi sweep: every cell is updated from the previous iterate.
pub fn iterate(field: &FlowField, cfg: &FlowConfig, variant: Variant) -> Result<FlowField> {
    Ok(sweep(field, cfg, variant, 1)?.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub variant: Variant,
    /// `u` for the base scheme, the auxiliary `v` for the monotonized one.
    pub field: FlowField,
    /// `y = Mv`, velocities only; present for the monotonized variant.
    pub y: Option<[Field3D; 3]>,
    pub iterations: usize,
    pub converged: bool,
    pub residuals: SweepNorms,
}

impl SolutionReport {
    /// The answer of the scheme: `u`, or `y` for the monotonized variant.
    pub fn answer(&self) -> &[Field3D; 3] {
        self.y.as_ref().unwrap_or(&self.field.v)
    }
}

/// Iterate from [`init_field`] until both `|sigma_v R|_C` and `|div v|_C`
/// fall to `tol`. Running out of iterations is reported, not an error.
pub fn solve_steady(cfg: &FlowConfig, variant: Variant) -> Result<SolutionReport> {
    solve_steady_with(cfg, variant, |_, _| {})
}

/// As [`solve_steady`], calling `observe(iteration, norms)` after every sweep.
pub fn solve_steady_with(
    cfg: &FlowConfig,
    variant: Variant,
    mut observe: impl FnMut(usize, &SweepNorms),
) -> Result<SolutionReport> {
    let mut field = init_field(cfg)?;
    let mut residuals = SweepNorms { momentum: f64::INFINITY, update: f64::INFINITY, divergence: f64::INFINITY };
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let (next, norms) = sweep(&field, cfg, variant, iterations)?;
        observe(iterations, &norms);
        field = next;
        residuals = norms;
        if norms.update.max(norms.divergence) <= cfg.tol {
            converged = true;
            break;
        }
    }
    let y = match variant {
        Variant::Base => None,
        Variant::Monotonized => {
            let vp = velocity_policy(cfg);
            Some([apply_m_3d(&field.v[0], &vp)?, apply_m_3d(&field.v[1], &vp)?, apply_m_3d(&field.v[2], &vp)?])
        }
    };
    Ok(SolutionReport { variant, field, y, iterations, converged, residuals })
}

/// `(x, value)` along the x-row of cells through the hole centers.
pub fn centerline_profile(velocity: &[Field3D; 3], cfg: &FlowConfig, component: Axis) -> Vec<(f64, f64)> {
    let f = &velocity[component.index()];
    let mesh = f.mesh();
    let c = cfg.centerline_index();
    (0..mesh.n()).map(|i| (mesh.center(i), f.at(i, c, c))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub p: f64,
}

pub fn snapshot(field: &FlowField) -> Vec<SnapshotRecord> {
    let mesh = field.mesh();
    (0..mesh.cell_count())
        .map(|idx| {
            let (i, j, k) = mesh.unflat(idx);
            SnapshotRecord {
                i,
                j,
                k,
                vx: field.v[0].values()[idx],
                vy: field.v[1].values()[idx],
                vz: field.v[2].values()[idx],
                p: field.p.values()[idx],
            }
        })
        .collect()
}
