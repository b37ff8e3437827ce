//! Machine-readable run summaries (`summary.json`).

use std::collections::BTreeMap;

use monoscheme_core::bvp1d::{ConvergenceStudy, ScanEntry};
use monoscheme_core::metrics::{MonotonicityReport, Prop3Report};
use monoscheme_core::ns3d::{SweepNorms, Variant};
use serde::{Deserialize, Serialize};

use crate::config::Experiment;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: Experiment,
    /// Monotonicity of each answer the experiment produced (`u`, `y`, ...).
    pub answers: Vec<AnswerMetrics>,
    pub checks: Vec<Check>,
    pub details: Details,
    /// Table files written next to the summary.
    pub tables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerMetrics {
    pub label: String,
    /// Largest change per mesh step (1D) or largest neighbor jump (3D).
    pub f: f64,
    pub extremum_count: usize,
    pub oscillates: Option<bool>,
    pub sharpness_a: Option<f64>,
    pub sharpness_b: Option<f64>,
    /// C-norm distance to the reference solution.
    pub dist_ref: Option<f64>,
}

impl AnswerMetrics {
    pub fn from_report(label: &str, r: &MonotonicityReport, dist_ref: Option<f64>) -> Self {
        Self {
            label: label.to_owned(),
            f: r.f_value,
            extremum_count: r.extremum_count,
            oscillates: r.oscillates,
            sharpness_a: r.sharpness_a,
            sharpness_b: r.sharpness_b,
            dist_ref,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured value; absent when undefined.
    pub value: Option<f64>,
    pub limit: f64,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: &str, value: Option<f64>, limit: f64) -> Self {
        let passed = value.is_some_and(|v| v <= limit);
        Self { name: name.to_owned(), passed, value: value.filter(|v| v.is_finite()), limit }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Details {
    Solve1d(Solve1dDetails),
    Solve3d(Solve3dDetails),
    Metrics(MetricsDetails),
    Order(OrderDetails),
    ScanDet(ScanDetails),
    Timestep(TimestepDetails),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solve1dDetails {
    pub n: usize,
    pub h: f64,
    /// Scaled scheme residual C-norm per solution.
    pub residuals: BTreeMap<String, f64>,
    /// `|u - v|_C / |u|_C`.
    pub closeness: Option<f64>,
    /// `|y_form12 - y|_C`.
    pub form12_gap: Option<f64>,
    pub prop3: Option<Prop3Report>,
    pub reference_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRun {
    pub variant: Variant,
    pub iterations: usize,
    pub converged: bool,
    pub residuals: SweepNorms,
    /// Interior extremum counts per velocity component, by field label.
    pub interior_extrema: BTreeMap<String, [usize; 3]>,
    /// Extremum counts in the central region.
    pub central_extrema: BTreeMap<String, [usize; 3]>,
    pub pressure_extrema: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solve3dDetails {
    pub n: usize,
    pub h: f64,
    /// Zero-based hole cell range, also the central region.
    pub hole: [usize; 2],
    pub sigma_v: f64,
    pub sigma_p: f64,
    pub tol: f64,
    pub runs: Vec<FlowRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDetails {
    pub seed: u64,
    pub random_fields: usize,
    pub oracle_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDetails {
    pub studies: Vec<ConvergenceStudy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDetails {
    pub entries: Vec<ScanEntry>,
    pub flagged_h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimestepDetails {
    pub steps: usize,
    pub converged: bool,
    pub final_rate: f64,
    /// Distance of the final answer to the stationary solution.
    pub steady_gap: f64,
    pub stationary_residual: Option<f64>,
}
