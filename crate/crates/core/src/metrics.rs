//! Monotonicity metrics.
//!
//! - point-to-point oscillation of a 1D sequence,
//! - the functional `f` = maximal change per mesh step (Lipschitz with
//!   `K = 2` in the C-norm),
//! - strict local extrema of 3D fields over the six axis neighbors,
//! - sharpness `(a, b)` of a set of extrema,
//! - the interval that bounds `f(Mv) / f(u)` when `v` is close to `u`.

use serde::{Deserialize, Serialize};

use crate::{Error, Field3D, Mesh3D, Result};

/// True iff `u` alternates strictly between local minima and local maxima at
/// every inner point `1..len-1`.
pub fn oscillates_point_to_point(u: &[f64]) -> Result<bool> {
    if u.len() < 3 {
        return Err(Error::UndefinedInterval { len: u.len() });
    }
    // Strict extrema at consecutive points necessarily alternate in kind.
    Ok(u.windows(3).all(|w| (w[0] > w[1] && w[2] > w[1]) || (w[0] < w[1] && w[2] < w[1])))
}

/// Maximal change per mesh step, `max |u_{i+1} - u_i|`. Zero for fewer than
/// two points.
pub fn max_step_change(u: &[f64]) -> f64 {
    u.windows(2).fold(0.0_f64, |m, w| m.max((w[1] - w[0]).abs()))
}

/// Inclusive box of cell indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region3D {
    pub lo: [usize; 3],
    pub hi: [usize; 3],
}

impl Region3D {
    pub fn cube(lo: usize, hi: usize) -> Self {
        Self { lo: [lo; 3], hi: [hi; 3] }
    }

    /// Cells whose six axis neighbors all exist: `1..=N-2` per axis.
    pub fn interior(mesh: &Mesh3D) -> Self {
        Self::cube(1, mesh.n().saturating_sub(2))
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|a| self.lo[a] > self.hi[a])
    }

    fn cells<'a>(&self, mesh: &'a Mesh3D) -> impl Iterator<Item = [usize; 3]> + 'a {
        let n = mesh.n();
        // Clip to cells with a full neighbor set.
        let lo = self.lo.map(|l| l.max(1));
        let hi = self.hi.map(|h| h.min(n.saturating_sub(2)));
        let empty = n < 3 || (0..3).any(|a| lo[a] > hi[a]);
        let (lo, hi) = if empty { ([1, 1, 1], [0, 0, 0]) } else { (lo, hi) };
        (lo[2]..=hi[2]).flat_map(move |k| {
            (lo[1]..=hi[1]).flat_map(move |j| (lo[0]..=hi[0]).map(move |i| [i, j, k]))
        })
    }
}

fn neighbors(u: &Field3D, c: [usize; 3]) -> [f64; 6] {
    let [i, j, k] = c;
    [
        u.at(i + 1, j, k),
        u.at(i - 1, j, k),
        u.at(i, j + 1, k),
        u.at(i, j - 1, k),
        u.at(i, j, k + 1),
        u.at(i, j, k - 1),
    ]
}

/// Flat indices of cells in `region` that are strictly greater or strictly
/// smaller than all six axis neighbors. Cells without a full neighbor set
/// are skipped.
pub fn find_extrema_3d(u: &Field3D, region: &Region3D) -> Vec<usize> {
    let mesh = *u.mesh();
    region
        .cells(&mesh)
        .filter(|&c| {
            let uc = u.at(c[0], c[1], c[2]);
            let nb = neighbors(u, c);
            nb.iter().all(|&v| uc > v) || nb.iter().all(|&v| uc < v)
        })
        .map(|c| mesh.flat(c[0], c[1], c[2]))
        .collect()
}

pub fn count_extrema_3d(u: &Field3D, region: &Region3D) -> usize {
    find_extrema_3d(u, region).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sharpness {
    /// Largest neighbor jump over the set.
    pub a: f64,
    /// Largest of the per-cell smallest neighbor jumps.
    pub b: f64,
}

/// Sharpness of the cells `set` (flat indices).
pub fn sharpness_metrics(u: &Field3D, set: &[usize]) -> Result<Sharpness> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mesh = *u.mesh();
    let n = mesh.n();
    let mut out = Sharpness { a: 0.0, b: 0.0 };
    for &idx in set {
        let (i, j, k) = mesh.unflat(idx);
        if [i, j, k].iter().any(|&t| t == 0 || t + 1 >= n) {
            return Err(Error::InvalidParameter(format!(
                "cell ({i}, {j}, {k}) lacks a full neighbor set"
            )));
        }
        let uc = u.at(i, j, k);
        let jumps = neighbors(u, [i, j, k]).map(|v| (uc - v).abs());
        let max = jumps.iter().cloned().fold(0.0, f64::max);
        let min = jumps.iter().cloned().fold(f64::INFINITY, f64::min);
        out.a = out.a.max(max);
        out.b = out.b.max(min);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop3Inputs {
    /// `f(u)`
    pub delta: f64,
    /// `f(Mu) / f(u)`
    pub k: f64,
    /// `|u - v|_C`
    pub epsilon: f64,
    /// Lipschitz constant of `f`.
    pub lipschitz: f64,
    /// `|M|_C`
    pub norm_m: f64,
}

/// Open interval containing `k1 = f(Mv) / f(u)`:
/// `((k d - K |M| e) / (d + e), (k d + K |M| e) / (d - e))`.
pub fn prop3_interval(p: &Prop3Inputs) -> Result<(f64, f64)> {
    if !(p.delta > 0.0) {
        return Err(Error::PremiseViolation(format!("delta = {} must be positive", p.delta)));
    }
    if !(p.k > 0.0 && p.k < 1.0) {
        return Err(Error::PremiseViolation(format!("k = {} must lie in (0, 1)", p.k)));
    }
    if !(p.epsilon > 0.0) {
        return Err(Error::PremiseViolation(format!("epsilon = {} must be positive", p.epsilon)));
    }
    if !(p.epsilon < p.delta) {
        return Err(Error::PremiseViolation(format!(
            "epsilon < delta fails: {} >= {}",
            p.epsilon, p.delta
        )));
    }
    let spread = p.lipschitz * p.norm_m * p.epsilon;
    let kd = p.k * p.delta;
    if !(spread < kd) {
        return Err(Error::PremiseViolation(format!(
            "K |M| epsilon < k delta fails: {spread} >= {kd}"
        )));
    }
    Ok(((kd - spread) / (p.delta + p.epsilon), (kd + spread) / (p.delta - p.epsilon)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop3Report {
    pub delta: f64,
    pub k: f64,
    pub epsilon: f64,
    pub lipschitz: f64,
    pub norm_m: f64,
    /// `f(Mv) / delta`
    pub k1: f64,
    pub premises_hold: bool,
    pub interval: Option<(f64, f64)>,
    pub inside: bool,
}

/// Measure `delta = f(u)`, `k = f(Mu)/delta`, `epsilon = |u - v|_C`,
/// `k1 = f(Mv)/delta` and check `k1` against [`prop3_interval`].
///
/// `epsilon = 0` is accepted: the interval collapses to `[k, k]`.
pub fn check_prop3(
    u: &[f64],
    v: &[f64],
    apply_m: impl Fn(&[f64]) -> Vec<f64>,
    f: impl Fn(&[f64]) -> f64,
    lipschitz: f64,
    norm_m: f64,
) -> Result<Prop3Report> {
    if u.len() != v.len() {
        return Err(Error::MeshMismatch(format!("{} vs {} values", u.len(), v.len())));
    }
    let delta = f(u);
    if delta == 0.0 {
        return Err(Error::Degenerate("f(u) = 0: u is already flat".into()));
    }
    let k = f(&apply_m(u)) / delta;
    let k1 = f(&apply_m(v)) / delta;
    let epsilon = crate::dist_c(u, v);
    let mut report = Prop3Report {
        delta,
        k,
        epsilon,
        lipschitz,
        norm_m,
        k1,
        premises_hold: false,
        interval: None,
        inside: false,
    };
    if epsilon == 0.0 {
        report.premises_hold = k > 0.0 && k < 1.0;
        report.interval = Some((k, k));
        report.inside = k1 == k;
        return Ok(report);
    }
    match prop3_interval(&Prop3Inputs { delta, k, epsilon, lipschitz, norm_m }) {
        Ok((lo, hi)) => {
            report.premises_hold = true;
            report.interval = Some((lo, hi));
            report.inside = lo < k1 && k1 < hi;
        }
        Err(Error::PremiseViolation(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Summary of the monotonicity of one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// Point-to-point oscillation over the whole sequence (1D only).
    pub oscillates: Option<bool>,
    pub f_value: f64,
    pub extremum_count: usize,
    pub sharpness_a: Option<f64>,
    pub sharpness_b: Option<f64>,
    pub region: Option<Region3D>,
}

impl MonotonicityReport {
    /// Report for a 1D sequence including its boundary values.
    pub fn for_sequence(u: &[f64]) -> Self {
        let extremum_count = u
            .windows(3)
            .filter(|w| (w[1] > w[0] && w[1] > w[2]) || (w[1] < w[0] && w[1] < w[2]))
            .count();
        Self {
            oscillates: oscillates_point_to_point(u).ok(),
            f_value: max_step_change(u),
            extremum_count,
            sharpness_a: None,
            sharpness_b: None,
            region: None,
        }
    }

    /// Report for a 3D field restricted to `region`. `f_value` is the
    /// largest neighbor jump over all cells of the region.
    pub fn for_field(u: &Field3D, region: &Region3D) -> Self {
        let extrema = find_extrema_3d(u, region);
        let sharp = sharpness_metrics(u, &extrema).ok();
        let all: Vec<usize> =
            region.cells(u.mesh()).map(|c| u.mesh().flat(c[0], c[1], c[2])).collect();
        let f_value = sharpness_metrics(u, &all).map(|s| s.a).unwrap_or(0.0);
        Self {
            oscillates: None,
            f_value,
            extremum_count: extrema.len(),
            sharpness_a: sharp.map(|s| s.a),
            sharpness_b: sharp.map(|s| s.b),
            region: Some(*region),
        }
    }
}
