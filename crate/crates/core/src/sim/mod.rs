//! Monte-Carlo harness: three-group scenarios on smoothed noise, empirical
//! joint error rate and power of the bounds.

mod grf;

pub use grf::{fwhm_to_sigma, gaussian_kernel, generate_grf, theoretical_correlation, GrfConfig};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{
    calibrate_single_step, calibrate_step_down, draw_bootstrap, f_statistic, fwer_family, fwer_threshold,
};
use crate::bounds::{ari_lambda, bh_rejection_set, simes_lambda, vbar, HypothesisSet};
use crate::error::{Error, Result};
use crate::model::{fit, p_values, t_statistics, Dataset, Sidedness, StatField};
use crate::rng::{child_rng, derive_seed};
use crate::templates::TemplateFamily;
use crate::Method;

/// Header of the per-repetition CSV.
pub const CSV_HEADER: [&str; 7] = ["method", "rep", "violated", "lambda", "power_full", "power_bh", "power_p05"];

/// Threshold of the `p05` selection.
pub const P05: f64 = 0.05;

const STEP_DOWN_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub dims: (usize, usize),
    pub fwhm: f64,
    pub n_subjects: usize,
    /// Proportion of true nulls among the `2 * rows * cols` hypotheses.
    pub pi0: f64,
    pub alpha: f64,
    pub reps: usize,
    pub bootstraps: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub bh_q: f64,
    /// Template size `K`; `None` uses `K = m`.
    pub template_size: Option<usize>,
    pub sidedness: Sidedness,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            dims: (25, 25),
            fwhm: 4.0,
            n_subjects: 100,
            pi0: 0.8,
            alpha: 0.1,
            reps: 500,
            bootstraps: 100,
            methods: vec![Method::SingleStep, Method::StepDown, Method::Simes, Method::Ari],
            seed: 0,
            bh_q: 0.05,
            template_size: None,
            sidedness: Sidedness::TwoSided,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.n_subjects < 3 {
            return bad(format!("need at least 3 subjects for 3 nonempty groups, got {}", self.n_subjects));
        }
        if self.n_subjects == 3 {
            return bad("3 subjects leave no residual degrees of freedom".into());
        }
        if self.dims.0 == 0 || self.dims.1 == 0 {
            return bad("field dimensions must be positive".into());
        }
        if !(self.fwhm >= 0.0 && self.fwhm.is_finite()) {
            return bad(format!("fwhm = {}", self.fwhm));
        }
        if !(0.0..=1.0).contains(&self.pi0) {
            return bad(format!("pi0 = {} outside [0, 1]", self.pi0));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} outside (0, 1)", self.alpha));
        }
        if !(self.bh_q > 0.0 && self.bh_q < 1.0) {
            return bad(format!("bh_q = {} outside (0, 1)", self.bh_q));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if self.bootstraps == 0 && self.methods.iter().any(|m| m.needs_bootstrap()) {
            return bad("bootstrap methods need at least one replicate".into());
        }
        if let Some(k) = self.template_size {
            if k == 0 || k > self.n_hypotheses() {
                return bad(format!("template size {k} outside 1..={}", self.n_hypotheses()));
            }
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn n_hypotheses(&self) -> usize {
        2 * self.n_points()
    }

    /// `round(pi0 * m)` with ties to even.
    pub fn n_nulls(&self) -> usize {
        (self.pi0 * self.n_hypotheses() as f64).round_ties_even() as usize
    }

    pub fn family(&self) -> Result<TemplateFamily> {
        let m = self.n_hypotheses();
        TemplateFamily::linear(m, self.template_size.unwrap_or(m))
    }
}

/// One simulated dataset with its ground truth.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dataset: Dataset,
    pub true_nulls: HypothesisSet,
    /// Group (0, 1 or 2) of each subject.
    pub groups: Vec<u8>,
}

/// Group design with contrasts `G2 - G1` and `G3 - G2`, noise from
/// [`generate_grf`] and unit effects outside the null set.
///
/// Hypothesis `l * V + v` is contrast `l` at point `v`.
pub fn build_scenario(config: &ScenarioConfig, rep_seed: u64) -> Result<Scenario> {
    config.validate()?;
    let n = config.n_subjects;
    let n_points = config.n_points();
    let m = config.n_hypotheses();

    let grf = GrfConfig { dims: config.dims, fwhm: config.fwhm, n_fields: n, seed: derive_seed(rep_seed, 0) };
    let mut response = generate_grf(&grf)?;

    let mut rng = child_rng(rep_seed, 1);
    let groups = loop {
        let g: Vec<u8> = (0..n).map(|_| rng.random_range(0..3u8)).collect();
        if (0..3u8).all(|k| g.contains(&k)) {
            break g;
        }
    };

    let mut rng = child_rng(rep_seed, 2);
    let nulls = sample(&mut rng, m, config.n_nulls()).into_vec();
    let true_nulls = HypothesisSet::new(nulls, m)?;
    let null_mask = true_nulls.mask(m);

    for (i, &g) in groups.iter().enumerate() {
        for v in 0..n_points {
            let first = !null_mask[v];
            let second = !null_mask[n_points + v];
            let signal = match g {
                0 => 0.0,
                1 => first as u8 as f64,
                _ => (first as u8 + second as u8) as f64,
            };
            response[(i, v)] += signal;
        }
    }

    let design = DMatrix::from_fn(n, 3, |i, j| (groups[i] as usize == j) as u8 as f64);
    let contrasts = DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0]);
    Ok(Scenario { dataset: Dataset::new(design, response, contrasts)?, true_nulls, groups })
}

/// Outcome of one selection `R` under one method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub size: usize,
    pub v_bar: usize,
    /// `|R ∩ non-nulls|`.
    pub true_positives: usize,
}

impl SelectionOutcome {
    /// Lower bound on true positives, `|R| - Vbar(R)`.
    pub fn tp_lower(&self) -> usize {
        self.size - self.v_bar
    }

    /// `(|R| - Vbar(R)) / |R ∩ non-nulls|`, undefined without true positives.
    pub fn power_ratio(&self) -> Option<f64> {
        (self.true_positives > 0).then(|| self.tp_lower() as f64 / self.true_positives as f64)
    }
}

/// Per-repetition, per-method record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub method: Method,
    pub rep: usize,
    pub violated: bool,
    /// `lambda` used for the bounds, in `[0, 1]`.
    pub lambda: f64,
    /// Pivotal statistic of the observed field over the true nulls.
    pub f_null: f64,
    pub full: SelectionOutcome,
    pub bh: SelectionOutcome,
    pub p05: SelectionOutcome,
}

/// Runs every configured method on repetition `rep`.
pub fn run_repetition(config: &ScenarioConfig, rep: usize) -> Result<Vec<RepRecord>> {
    let rep_seed = derive_seed(config.seed, rep as u64);
    let scenario = build_scenario(config, rep_seed)?;
    let ds = &scenario.dataset;
    let model = fit(ds)?;
    let p = p_values(&t_statistics(&model, ds, None)?, config.sidedness)?;
    let m = ds.n_hypotheses();
    let family = config.family()?;

    let selections = [
        HypothesisSet::full(m),
        bh_rejection_set(p.values(), config.bh_q)?,
        HypothesisSet::new((0..m).filter(|&h| p.values()[h] <= P05).collect(), m)?,
    ];
    let non_null_mask: Vec<bool> = scenario.true_nulls.mask(m).into_iter().map(|b| !b).collect();

    let sample = if config.methods.iter().any(|x| x.needs_bootstrap()) {
        Some(draw_bootstrap(&model, ds, config.bootstraps, derive_seed(rep_seed, 3), config.sidedness)?)
    } else {
        None
    };

    let mut out = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let fwer_fam;
        let (lambda, fam) = match method {
            Method::SingleStep => {
                let s = sample.as_ref().expect("bootstrap drawn");
                (calibrate_single_step(s, &HypothesisSet::full(m), &family, config.alpha)?.lambda(), &family)
            }
            Method::StepDown => {
                let s = sample.as_ref().expect("bootstrap drawn");
                (calibrate_step_down(s, &p, &family, config.alpha, STEP_DOWN_MAX_ITER)?.lambda(), &family)
            }
            Method::Simes => (simes_lambda(config.alpha)?, &family),
            Method::Ari => (ari_lambda(p.values(), config.alpha)?, &family),
            Method::FwerMinP => {
                let s = sample.as_ref().expect("bootstrap drawn");
                fwer_fam = fwer_family();
                (fwer_threshold(s, config.alpha)?.lambda(), &fwer_fam)
            }
        };
        let f_null = f_statistic(&p, &scenario.true_nulls, fam, config.sidedness);
        let outcome = |r: &HypothesisSet| -> Result<SelectionOutcome> {
            Ok(SelectionOutcome {
                size: r.len(),
                v_bar: vbar(&p, r, fam, lambda, None)?.false_positive_bound,
                true_positives: r.indices().iter().filter(|&&h| non_null_mask[h]).count(),
            })
        };
        out.push(RepRecord {
            method,
            rep,
            violated: f_null <= lambda,
            lambda,
            f_null,
            full: outcome(&selections[0])?,
            bh: outcome(&selections[1])?,
            p05: outcome(&selections[2])?,
        });
    }
    Ok(out)
}

/// Mean and binomial / sample standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    /// Repetitions contributing to the estimate.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSummary {
    pub full: Option<Estimate>,
    pub bh: Option<Estimate>,
    pub p05: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub empirical_jer: f64,
    pub jer_se: f64,
    pub power: PowerSummary,
    pub mean_lambda: f64,
    pub reps_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub config: ScenarioConfig,
    pub methods: Vec<MethodSummary>,
}

impl SimReport {
    pub fn method(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == method)
    }
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    /// Ordered by repetition, then by method in configuration order.
    pub records: Vec<RepRecord>,
    pub report: SimReport,
}

fn mean_estimate(values: &[f64]) -> Option<Estimate> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let se = if n > 1 {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    Some(Estimate { mean, se, n })
}

/// Aggregates records of one configuration into a report.
pub fn summarize(config: &ScenarioConfig, records: &[RepRecord]) -> SimReport {
    let methods = config
        .methods
        .iter()
        .map(|&method| {
            let rs: Vec<&RepRecord> = records.iter().filter(|r| r.method == method).collect();
            let n = rs.len().max(1) as f64;
            let jer = rs.iter().filter(|r| r.violated).count() as f64 / n;
            let power = |pick: fn(&RepRecord) -> &SelectionOutcome| {
                let ratios: Vec<f64> = rs.iter().filter_map(|r| pick(r).power_ratio()).collect();
                mean_estimate(&ratios)
            };
            MethodSummary {
                method,
                empirical_jer: jer,
                jer_se: (jer * (1.0 - jer) / n).sqrt(),
                power: PowerSummary { full: power(|r| &r.full), bh: power(|r| &r.bh), p05: power(|r| &r.p05) },
                mean_lambda: rs.iter().map(|r| r.lambda).sum::<f64>() / n,
                reps_used: rs.len(),
            }
        })
        .collect();
    SimReport { config: config.clone(), methods }
}

/// Runs all repetitions, in parallel, with a deterministic result.
pub fn simulate(config: &ScenarioConfig) -> Result<SimOutput> {
    config.validate()?;
    let per_rep = (0..config.reps)
        .into_par_iter()
        .map(|rep| run_repetition(config, rep))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<RepRecord> = per_rep.into_iter().flatten().collect();
    let report = summarize(config, &records);
    Ok(SimOutput { records, report })
}

/// Empirical joint error rate of `method` with its binomial standard error.
pub fn empirical_jer(config: &ScenarioConfig, method: Method) -> Result<Estimate> {
    let cfg = ScenarioConfig { methods: vec![method], ..config.clone() };
    let out = simulate(&cfg)?;
    let s = &out.report.methods[0];
    Ok(Estimate { mean: s.empirical_jer, se: s.jer_se, n: s.reps_used })
}

/// Selection used in the power criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Full,
    Bh,
    P05,
}

/// Average power ratio over repetitions with at least one true positive in
/// the selection; `None` when no repetition qualifies.
pub fn power(config: &ScenarioConfig, method: Method, selection: Selection) -> Result<Option<Estimate>> {
    let cfg = ScenarioConfig { methods: vec![method], ..config.clone() };
    let out = simulate(&cfg)?;
    let p = &out.report.methods[0].power;
    Ok(match selection {
        Selection::Full => p.full,
        Selection::Bh => p.bh,
        Selection::P05 => p.p05,
    })
}

/// Observed p-value field and truth of one repetition, for inspection.
pub fn observed_p_values(config: &ScenarioConfig, rep: usize) -> Result<(StatField, Scenario)> {
    let scenario = build_scenario(config, derive_seed(config.seed, rep as u64))?;
    let model = fit(&scenario.dataset)?;
    let p = p_values(&t_statistics(&model, &scenario.dataset, None)?, config.sidedness)?;
    Ok((p, scenario))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::vbar_reference;

    fn small(pi0: f64) -> ScenarioConfig {
        ScenarioConfig {
            dims: (3, 4),
            fwhm: 2.0,
            n_subjects: 12,
            pi0,
            reps: 4,
            bootstraps: 20,
            methods: Method::ALL.to_vec(),
            seed: 17,
            ..Default::default()
        }
    }

    #[test]
    fn null_count_rounds_half_to_even() {
        let mut cfg = ScenarioConfig { dims: (1, 1), ..Default::default() };
        cfg.pi0 = 0.25;
        assert_eq!(cfg.n_nulls(), 0); // 0.5 -> 0
        cfg.pi0 = 0.75;
        assert_eq!(cfg.n_nulls(), 2); // 1.5 -> 2
        cfg.dims = (25, 25);
        cfg.pi0 = 0.8;
        assert_eq!(cfg.n_nulls(), 1000);
    }

    #[test]
    fn too_few_subjects_is_invalid_scenario() {
        let cfg = ScenarioConfig { n_subjects: 2, ..small(1.0) };
        assert!(matches!(build_scenario(&cfg, 0), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn global_null_and_full_signal() {
        let sc = build_scenario(&small(1.0), 5).unwrap();
        assert_eq!(sc.true_nulls.len(), 24);
        let sc = build_scenario(&small(0.0), 5).unwrap();
        assert!(sc.true_nulls.is_empty());
        assert!((0..3u8).all(|g| sc.groups.contains(&g)));
    }

    #[test]
    fn unit_effects_on_noiseless_signal() {
        let cfg = small(0.5);
        let sc = build_scenario(&cfg, 9).unwrap();
        let noise = generate_grf(&GrfConfig {
            dims: cfg.dims,
            fwhm: cfg.fwhm,
            n_fields: cfg.n_subjects,
            seed: derive_seed(9, 0),
        })
        .unwrap();
        let ds = &sc.dataset;
        let clean = Dataset::new(ds.design().clone(), ds.response() - noise, ds.contrasts().clone()).unwrap();
        let model = fit(&clean).unwrap();
        let effects = clean.contrasts() * &model.beta_hat;
        let v = cfg.n_points();
        for h in 0..cfg.n_hypotheses() {
            let expected = if sc.true_nulls.contains(h) { 0.0 } else { 1.0 };
            assert!((effects[(h / v, h % v)] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn records_are_consistent() {
        let cfg = small(0.5);
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.records.len(), cfg.reps * Method::ALL.len());
        for r in &out.records {
            assert!((0.0..=1.0).contains(&r.lambda));
            assert_eq!(r.violated, r.f_null <= r.lambda);
            assert!(r.full.v_bar <= r.full.size);
            assert_eq!(r.full.size, cfg.n_hypotheses());
        }
        for s in &out.report.methods {
            assert!((0.0..=1.0).contains(&s.empirical_jer));
            assert_eq!(s.reps_used, cfg.reps);
        }
        let again = simulate(&cfg).unwrap();
        assert_eq!(out.records, again.records);
        assert_eq!(out.report, again.report);
    }

    #[test]
    fn step_down_lambda_dominates_per_rep() {
        let cfg = ScenarioConfig { methods: vec![Method::SingleStep, Method::StepDown], reps: 6, ..small(0.3) };
        let out = simulate(&cfg).unwrap();
        for pair in out.records.chunks(2) {
            assert!(pair[1].lambda >= pair[0].lambda);
            assert!(pair[1].violated >= pair[0].violated);
        }
    }

    #[test]
    fn power_undefined_without_signal() {
        let cfg = ScenarioConfig { methods: vec![Method::Simes], ..small(1.0) };
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.report.methods[0].power.full, None);
    }

    #[test]
    fn selection_power_extremes() {
        let vacuous = SelectionOutcome { size: 5, v_bar: 5, true_positives: 3 };
        assert_eq!(vacuous.power_ratio(), Some(0.0));
        let perfect = SelectionOutcome { size: 4, v_bar: 0, true_positives: 4 };
        assert_eq!(perfect.power_ratio(), Some(1.0));
        assert_eq!(SelectionOutcome { size: 2, v_bar: 1, true_positives: 0 }.power_ratio(), None);
    }

    #[test]
    fn all_p_values_one_never_violate_simes() {
        let fam = TemplateFamily::linear_full(8).unwrap();
        let p = StatField::from_p_values(vec![1.0; 8]).unwrap();
        let f = f_statistic(&p, &HypothesisSet::full(8), &fam, Sidedness::TwoSided);
        assert!(f > 0.1);
        assert!(f <= 1.0);
        assert_eq!(vbar_reference(p.values(), &fam, 0.1, None), 8);
    }
}
