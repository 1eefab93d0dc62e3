//! JSON and CSV report shapes.

use posthoc::bounds::BoundReport;
use posthoc::sim::{RepRecord, SimReport};
use posthoc::CurvePoint;
use serde::Serialize;

use crate::io::SimCsvRow;

#[derive(Debug, Clone, Serialize)]
pub struct SetBound {
    pub label: String,
    pub size: usize,
    pub v_bar: usize,
    pub tp_lower: usize,
    pub tdp_lower: f64,
    pub fdp_upper: f64,
}

impl SetBound {
    pub fn new(label: impl Into<String>, b: &BoundReport) -> Self {
        Self {
            label: label.into(),
            size: b.set_size,
            v_bar: b.false_positive_bound,
            tp_lower: b.tp_lower(),
            tdp_lower: b.tdp_lower,
            fdp_upper: b.fdp_upper,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepDownInfo {
    pub iterations: usize,
    pub surviving: usize,
    pub empty_fallback: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BhBound {
    pub q: f64,
    #[serde(flatten)]
    pub bound: SetBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub method: &'static str,
    pub alpha: f64,
    /// Calibrated value before clamping to the template domain.
    pub lambda_star: f64,
    pub lambda: f64,
    pub seed: u64,
    pub bootstraps: Option<usize>,
    pub template: &'static str,
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    pub sidedness: &'static str,
    pub n_subjects: usize,
    pub n_points: usize,
    pub n_contrasts: usize,
    pub dof: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_down: Option<StepDownInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all: Option<SetBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bh: Option<BhBound>,
    pub sets: Vec<SetBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimSummary<'a> {
    pub seed: u64,
    #[serde(flatten)]
    pub report: &'a SimReport,
}

pub fn curve_csv(curve: &[CurvePoint]) -> Vec<u8> {
    let mut out = String::from("k,v_bar,tp_lower,fdp_upper\n");
    for c in curve {
        out.push_str(&format!("{},{},{},{}\n", c.k, c.v_bar, c.tp_lower, c.fdp_upper));
    }
    out.into_bytes()
}

pub fn sim_rows(records: &[RepRecord]) -> Vec<SimCsvRow> {
    records
        .iter()
        .map(|r| SimCsvRow {
            method: r.method.as_str().to_owned(),
            rep: r.rep,
            violated: r.violated as u8,
            lambda: r.lambda,
            power_full: r.full.power_ratio(),
            power_bh: r.bh.power_ratio(),
            power_p05: r.p05.power_ratio(),
        })
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
    bytes.push(b'\n');
    bytes
}
