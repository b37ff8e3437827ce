use serde::{Deserialize, Serialize};

use crate::{Error, Field3D, Mesh3D, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Face {
    XLow,
    XHigh,
    YLow,
    YHigh,
    ZLow,
    ZHigh,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::XLow, Face::XHigh, Face::YLow, Face::YHigh, Face::ZLow, Face::ZHigh];

    fn slot(self) -> usize {
        self as usize
    }

    fn of(axis: Axis, high: bool) -> Face {
        Face::ALL[2 * axis.index() + high as usize]
    }
}

/// How the neighbor beyond a boundary face is supplied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GhostRule {
    /// The value is prescribed on the cell facet: `ghost = 2 g - u_adjacent`.
    Dirichlet(f64),
    /// Zero normal derivative: the ghost mirrors the adjacent cell.
    ZeroGradient,
    /// No ghost; first derivatives across this face use the inner one-sided
    /// difference. Not valid for second derivatives or `M`.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FaceRule {
    Uniform(GhostRule),
    /// `inside` applies where both tangential cell indices lie in `lo..=hi`
    /// (a square hole), `outside` elsewhere on the face.
    Patch { lo: usize, hi: usize, inside: GhostRule, outside: GhostRule },
}

impl FaceRule {
    fn at(&self, t1: usize, t2: usize) -> GhostRule {
        match *self {
            FaceRule::Uniform(r) => r,
            FaceRule::Patch { lo, hi, inside, outside } => {
                if (lo..=hi).contains(&t1) && (lo..=hi).contains(&t2) {
                    inside
                } else {
                    outside
                }
            }
        }
    }

    fn rules(&self) -> [GhostRule; 2] {
        match *self {
            FaceRule::Uniform(r) => [r, r],
            FaceRule::Patch { inside, outside, .. } => [inside, outside],
        }
    }
}

/// Per-face boundary rules for one variable on a [`Mesh3D`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryPolicy3D {
    faces: [Option<FaceRule>; 6],
}

impl BoundaryPolicy3D {
    /// A policy with no face rules; operators reject it until every face is set.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn uniform(rule: GhostRule) -> Self {
        Self { faces: [Some(FaceRule::Uniform(rule)); 6] }
    }

    pub fn with_face(mut self, face: Face, rule: FaceRule) -> Self {
        self.faces[face.slot()] = Some(rule);
        self
    }

    pub fn face(&self, face: Face) -> Option<&FaceRule> {
        self.faces[face.slot()].as_ref()
    }

    fn check(&self, allow_one_sided: bool) -> Result<()> {
        for face in Face::ALL {
            let rule = self.faces[face.slot()]
                .ok_or_else(|| Error::Config(format!("no rule for face {face:?}")))?;
            if !allow_one_sided && rule.rules().contains(&GhostRule::OneSided) {
                return Err(Error::Config(format!(
                    "one-sided rule on face {face:?} cannot close a second-order stencil"
                )));
            }
        }
        Ok(())
    }

    fn rule(&self, axis: Axis, high: bool, c: [usize; 3]) -> GhostRule {
        let (t1, t2) = match axis {
            Axis::X => (c[1], c[2]),
            Axis::Y => (c[0], c[2]),
            Axis::Z => (c[0], c[1]),
        };
        // `check` has run, so every face is present.
        self.faces[Face::of(axis, high).slot()].expect("checked policy").at(t1, t2)
    }
}

/// Neighbor value of a cell along one axis, or the marker for a one-sided face.
#[derive(Debug, Clone, Copy)]
enum Side {
    Value(f64),
    OneSided,
}

struct Stencil<'a> {
    u: &'a Field3D,
    policy: &'a BoundaryPolicy3D,
    n: usize,
}

impl<'a> Stencil<'a> {
    fn new(u: &'a Field3D, policy: &'a BoundaryPolicy3D) -> Self {
        Self { u, policy, n: u.mesh().n() }
    }

    fn side(&self, c: [usize; 3], axis: Axis, high: bool) -> Side {
        let a = axis.index();
        let mut nb = c;
        let inside = if high {
            nb[a] += 1;
            nb[a] < self.n
        } else if c[a] > 0 {
            nb[a] -= 1;
            true
        } else {
            false
        };
        if inside {
            return Side::Value(self.u.at(nb[0], nb[1], nb[2]));
        }
        let uc = self.u.at(c[0], c[1], c[2]);
        match self.policy.rule(axis, high, c) {
            GhostRule::Dirichlet(g) => Side::Value(2.0 * g - uc),
            GhostRule::ZeroGradient => Side::Value(uc),
            GhostRule::OneSided => Side::OneSided,
        }
    }

    fn value(&self, c: [usize; 3], axis: Axis, high: bool) -> f64 {
        match self.side(c, axis, high) {
            Side::Value(v) => v,
            Side::OneSided => unreachable!("policy checked against one-sided rules"),
        }
    }

    fn first(&self, c: [usize; 3], axis: Axis, h: f64) -> f64 {
        let uc = self.u.at(c[0], c[1], c[2]);
        match (self.side(c, axis, false), self.side(c, axis, true)) {
            (Side::Value(lo), Side::Value(hi)) => (hi - lo) / (2.0 * h),
            (Side::OneSided, Side::Value(hi)) => (hi - uc) / h,
            (Side::Value(lo), Side::OneSided) => (uc - lo) / h,
            (Side::OneSided, Side::OneSided) => 0.0,
        }
    }

    fn second(&self, c: [usize; 3], axis: Axis, h: f64) -> f64 {
        let uc = self.u.at(c[0], c[1], c[2]);
        (self.value(c, axis, true) - 2.0 * uc + self.value(c, axis, false)) / (h * h)
    }
}

fn map_cells(mesh: &Mesh3D, mut f: impl FnMut([usize; 3]) -> f64) -> Vec<f64> {
    let n = mesh.n();
    let mut out = Vec::with_capacity(mesh.cell_count());
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                out.push(f([i, j, k]));
            }
        }
    }
    out
}

/// Seven-point monotonizing average
/// `(Mu)_c = u_c / 2 + (1/12) * sum of the six axis neighbors`,
/// with missing neighbors supplied by `policy`.
pub fn apply_m_3d(u: &Field3D, policy: &BoundaryPolicy3D) -> Result<Field3D> {
    policy.check(false)?;
    let st = Stencil::new(u, policy);
    let out = map_cells(u.mesh(), |c| {
        let mut s = 0.0;
        for axis in Axis::ALL {
            s += st.value(c, axis, false) + st.value(c, axis, true);
        }
        0.5 * u.at(c[0], c[1], c[2]) + s / 12.0
    });
    Ok(u.with_values(out))
}

/// C-norm of the linear part of `M` under `policy`: max absolute row sum.
pub fn m3d_norm_c(mesh: &Mesh3D, policy: &BoundaryPolicy3D) -> Result<f64> {
    policy.check(false)?;
    let n = mesh.n();
    let mut norm = 0.0_f64;
    for cell in 0..mesh.cell_count() {
        let (i, j, k) = mesh.unflat(cell);
        let c = [i, j, k];
        let mut diag = 0.5_f64;
        let mut off = 0.0;
        for axis in Axis::ALL {
            let a = axis.index();
            for high in [false, true] {
                let inside = if high { c[a] + 1 < n } else { c[a] > 0 };
                if inside {
                    off += 1.0 / 12.0;
                } else {
                    match policy.rule(axis, high, c) {
                        GhostRule::Dirichlet(_) => diag -= 1.0 / 12.0,
                        GhostRule::ZeroGradient => diag += 1.0 / 12.0,
                        GhostRule::OneSided => unreachable!(),
                    }
                }
            }
        }
        norm = norm.max(diag.abs() + off);
    }
    Ok(norm)
}

/// Solve `M a = b` by conjugate gradients on the symmetric seven-point
/// system. Stops once `|M a - b|_C <= tol`.
pub fn solve_m_3d(
    b: &Field3D,
    policy: &BoundaryPolicy3D,
    tol: f64,
    max_iters: usize,
) -> Result<Field3D> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    // M a = L a + offset, where offset carries the Dirichlet ghost data.
    let offset = apply_m_3d(&Field3D::zeros(*b.mesh()), policy)?.into_values();
    let apply_linear = |x: &[f64]| -> Result<Vec<f64>> {
        let f = b.with_values(x.to_vec());
        let mut y = apply_m_3d(&f, policy)?.into_values();
        y.iter_mut().zip(&offset).for_each(|(yi, oi)| *yi -= oi);
        Ok(y)
    };
    let rhs: Vec<f64> = b.values().iter().zip(&offset).map(|(bi, oi)| bi - oi).collect();
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();

    let mut x = rhs.clone();
    let mut r: Vec<f64> = rhs.iter().zip(apply_linear(&x)?).map(|(a, b)| a - b).collect();
    let mut residual = crate::norm_c(&r);
    if residual <= tol {
        return Ok(b.with_values(x));
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..max_iters {
        let ap = apply_linear(&p)?;
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::IterationFailure { iterations: max_iters, residual });
        }
        let alpha = rr / pap;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        residual = crate::norm_c(&r);
        if residual <= tol {
            // Confirm against the true residual; the recurrence drifts.
            let true_r: Vec<f64> = rhs.iter().zip(apply_linear(&x)?).map(|(a, b)| a - b).collect();
            residual = crate::norm_c(&true_r);
            if residual <= tol {
                return Ok(b.with_values(x));
            }
            r = true_r;
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
    }
    Err(Error::IterationFailure { iterations: max_iters, residual })
}

/// Central first difference along `axis`; one-sided inner differences where
/// the policy says so.
pub fn grad_3d(u: &Field3D, axis: Axis, policy: &BoundaryPolicy3D) -> Result<Field3D> {
    policy.check(true)?;
    let st = Stencil::new(u, policy);
    let h = u.mesh().h();
    Ok(u.with_values(map_cells(u.mesh(), |c| st.first(c, axis, h))))
}

pub fn second_derivative_3d(u: &Field3D, axis: Axis, policy: &BoundaryPolicy3D) -> Result<Field3D> {
    policy.check(false)?;
    let st = Stencil::new(u, policy);
    let h = u.mesh().h();
    Ok(u.with_values(map_cells(u.mesh(), |c| st.second(c, axis, h))))
}

pub fn laplacian_3d(u: &Field3D, policy: &BoundaryPolicy3D) -> Result<Field3D> {
    policy.check(false)?;
    let st = Stencil::new(u, policy);
    let h = u.mesh().h();
    Ok(u.with_values(map_cells(u.mesh(), |c| {
        Axis::ALL.iter().map(|&a| st.second(c, a, h)).sum()
    })))
}

/// `d vx/dx + d vy/dy + d vz/dz`, every component closed by the same policy.
pub fn div_3d(v: [&Field3D; 3], policy: &BoundaryPolicy3D) -> Result<Field3D> {
    v[0].ensure_same_mesh(v[1])?;
    v[0].ensure_same_mesh(v[2])?;
    let mut out = grad_3d(v[0], Axis::X, policy)?.into_values();
    for (comp, axis) in [(v[1], Axis::Y), (v[2], Axis::Z)] {
        let g = grad_3d(comp, axis, policy)?;
        out.iter_mut().zip(g.values()).for_each(|(o, gi)| *o += gi);
    }
    Ok(v[0].with_values(out))
}
