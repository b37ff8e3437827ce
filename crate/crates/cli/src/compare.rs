//! Compare the monotonicity metrics of two runs.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::error::{CliError, CliResult};
use crate::summary::{AnswerMetrics, Summary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub experiment: Experiment,
    pub pairs: Vec<AnswerDelta>,
}

/// `b - a` for each metric; `None` when either side is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerDelta {
    pub a: String,
    pub b: String,
    pub delta_f: f64,
    pub delta_extrema: i64,
    /// `extrema_b / extrema_a`.
    pub extrema_ratio: Option<f64>,
    pub delta_sharpness_a: Option<f64>,
    pub delta_sharpness_b: Option<f64>,
    pub delta_dist_ref: Option<f64>,
}

pub fn load_summary(path: &Path) -> CliResult<Summary> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(b? - a?)
}

fn delta(a: &AnswerMetrics, b: &AnswerMetrics) -> AnswerDelta {
    AnswerDelta {
        a: a.label.clone(),
        b: b.label.clone(),
        delta_f: b.f - a.f,
        delta_extrema: b.extremum_count as i64 - a.extremum_count as i64,
        extrema_ratio: (a.extremum_count > 0).then(|| b.extremum_count as f64 / a.extremum_count as f64),
        delta_sharpness_a: diff(a.sharpness_a, b.sharpness_a),
        delta_sharpness_b: diff(a.sharpness_b, b.sharpness_b),
        delta_dist_ref: diff(a.dist_ref, b.dist_ref),
    }
}

/// Pair answers by label when every label of `a` occurs in `b`, otherwise
/// positionally when the counts agree.
pub fn compare(a: &Summary, b: &Summary) -> CliResult<Comparison> {
    if a.experiment != b.experiment {
        return Err(CliError::Validation(format!(
            "experiments differ: {:?} vs {:?}",
            a.experiment, b.experiment
        )));
    }
    if a.answers.is_empty() || b.answers.is_empty() {
        return Err(CliError::Validation("no answers to compare".into()));
    }
    let by_label: Option<Vec<_>> = a
        .answers
        .iter()
        .map(|x| b.answers.iter().find(|y| y.label == x.label).map(|y| delta(x, y)))
        .collect();
    let pairs = match by_label {
        Some(p) if a.answers.len() == b.answers.len() => p,
        _ if a.answers.len() == b.answers.len() => a.answers.iter().zip(&b.answers).map(|(x, y)| delta(x, y)).collect(),
        _ => {
            return Err(CliError::Validation(format!(
                "answer sets differ: {} vs {} entries",
                a.answers.len(),
                b.answers.len()
            )))
        }
    };
    Ok(Comparison { experiment: a.experiment, pairs })
}
