//! Run configuration: a TOML file naming one experiment plus its section.

use std::path::{Path, PathBuf};

use monoscheme_core::bvp1d::{SchemeCoefficients, SchemeKind};
use monoscheme_core::ns3d::{FlowConfig, Variant};
use monoscheme_core::timestep::{StepForm, TimeStepConfig};
use monoscheme_core::{BoundaryData1D, Mesh1D};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Solve1d,
    Solve3d,
    Metrics,
    Order,
    ScanDet,
    Timestep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub output: OutputSection,
    pub solve1d: Option<Solve1dSection>,
    pub solve3d: Option<Solve3dSection>,
    pub metrics: Option<MetricsSection>,
    pub order: Option<OrderSection>,
    #[serde(rename = "scan-det")]
    pub scan_det: Option<ScanSection>,
    pub timestep: Option<TimestepSection>,
}

fn scheme(k0: f64, k1: f64, k2: f64, k3: f64) -> CliResult<SchemeCoefficients> {
    SchemeCoefficients::new(k0, k1, k2, k3).map_err(CliError::validation)
}

macro_rules! coefficient_accessor {
    ($($section:ty),*) => {$(
        impl $section {
            pub fn coefficients(&self) -> CliResult<SchemeCoefficients> {
                scheme(self.k0, self.k1, self.k2, self.k3)
            }
        }
    )*};
}

coefficient_accessor!(Solve1dSection, OrderSection, ScanSection, TimestepSection);

fn default_interval() -> [f64; 2] {
    [0.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Base,
    Monotonized,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solve1dSection {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    /// Boundary values `[U(a), U(b)]`.
    pub boundary: [f64; 2],
    /// Mesh points including both ends.
    pub points: usize,
    /// Points of the dense reference mesh (0 disables it).
    #[serde(default)]
    pub reference_points: usize,
    #[serde(default)]
    pub scheme: SchemeChoice,
}

impl Solve1dSection {
    pub fn mesh(&self) -> CliResult<Mesh1D> {
        Mesh1D::with_total_points(self.interval[0], self.interval[1], self.points).map_err(CliError::validation)
    }

    pub fn bc(&self) -> BoundaryData1D {
        BoundaryData1D::new(self.boundary[0], self.boundary[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantChoice {
    Base,
    Monotonized,
    #[default]
    Both,
}

impl VariantChoice {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            VariantChoice::Base => vec![Variant::Base],
            VariantChoice::Monotonized => vec![Variant::Monotonized],
            VariantChoice::Both => vec![Variant::Base, Variant::Monotonized],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solve3dSection {
    /// Cube side.
    pub length: f64,
    pub n: usize,
    pub rho: f64,
    pub nu: f64,
    /// Outlet pressure.
    pub p1: f64,
    /// Inlet overpressure: `p0 = p1 + dp`.
    pub dp: f64,
    /// Hole cells, numbered from 1, in both tangential directions.
    pub hole_first: usize,
    pub hole_last: usize,
    pub sigma_v: Option<f64>,
    pub sigma_p: Option<f64>,
    #[serde(default = "default_flow_tol")]
    pub tol: f64,
    #[serde(default = "default_flow_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub variant: VariantChoice,
    /// Also write full `(i, j, k, vx, vy, vz, p)` snapshots.
    #[serde(default)]
    pub snapshot: bool,
}

fn default_flow_tol() -> f64 {
    1e-7
}

fn default_flow_iters() -> usize {
    200_000
}

impl Solve3dSection {
    pub fn flow_config(&self, tol_override: Option<f64>) -> CliResult<FlowConfig> {
        if self.hole_first == 0 || self.hole_first > self.hole_last {
            return Err(CliError::Validation(format!(
                "hole cells {}..{} must be numbered from 1 and non-empty",
                self.hole_first, self.hole_last
            )));
        }
        let (sv, sp) = FlowConfig::default_sigmas(self.length, self.n.max(1), self.rho, self.nu);
        let cfg = FlowConfig {
            length: self.length,
            n: self.n,
            rho: self.rho,
            nu: self.nu,
            p0: self.p1 + self.dp,
            p1: self.p1,
            hole_lo: self.hole_first - 1,
            hole_hi: self.hole_last - 1,
            sigma_v: self.sigma_v.unwrap_or(sv),
            sigma_p: self.sigma_p.unwrap_or(sp),
            tol: tol_override.unwrap_or(self.tol),
            max_iters: self.max_iters,
        };
        cfg.validate().map_err(CliError::validation)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    /// A 1D sequence (boundary values included) to report on.
    #[serde(default)]
    pub sequence: Vec<f64>,
    /// Number of seeded random 3D fields checked against brute-force scans.
    #[serde(default)]
    pub random_fields: usize,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_max_n() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderSection {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    pub boundary: [f64; 2],
    /// Interior point counts.
    pub n: Vec<usize>,
    #[serde(default = "default_order_schemes")]
    pub schemes: Vec<SchemeKind>,
}

fn default_order_schemes() -> Vec<SchemeKind> {
    vec![SchemeKind::Base, SchemeKind::Monotonized]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    /// Steps `h = (b - a) / m` for every `m` in `cells[0]..=cells[1]`.
    pub cells: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimestepSection {
    /// Coefficients of `F` in `dU/dt = F`.
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    #[serde(default = "default_interval")]
    pub interval: [f64; 2],
    pub boundary: [f64; 2],
    pub points: usize,
    pub tau: f64,
    pub sigma: f64,
    #[serde(default = "default_form")]
    pub form: StepForm,
    /// Stop once `|x_{n+1} - x_n|_C / tau` falls to this.
    #[serde(default = "default_steady_tol")]
    pub steady_tol: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default)]
    pub snapshot_every: usize,
    /// Starting value on the interior (boundary data stay fixed).
    #[serde(default)]
    pub initial: f64,
}

fn default_form() -> StepForm {
    StepForm::Monotonized
}

fn default_steady_tol() -> f64 {
    1e-10
}

fn default_max_steps() -> usize {
    100_000
}

impl TimestepSection {
    pub fn step_config(&self) -> CliResult<TimeStepConfig> {
        TimeStepConfig::new(self.tau, self.sigma).map_err(CliError::validation)
    }
}

pub fn load(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> CliResult<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.message().to_string()))?;
    let present = match cfg.experiment {
        Experiment::Solve1d => cfg.solve1d.is_some(),
        Experiment::Solve3d => cfg.solve3d.is_some(),
        Experiment::Metrics => cfg.metrics.is_some(),
        Experiment::Order => cfg.order.is_some(),
        Experiment::ScanDet => cfg.scan_det.is_some(),
        Experiment::Timestep => cfg.timestep.is_some(),
    };
    if !present {
        let name = serde_json::to_value(cfg.experiment).ok().and_then(|v| v.as_str().map(str::to_owned));
        return Err(CliError::Parse(format!("missing [{}] section", name.unwrap_or_default())));
    }
    Ok(cfg)
}
