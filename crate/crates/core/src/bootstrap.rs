//! Residual bootstrap calibration of the template parameter `lambda`.
//!
//! Each replicate resamples the rows of the residual matrix with replacement,
//! rebuilds `Y* = X beta_hat + E*`, refits and forms the centered statistic
//! `c_l^T (beta* - beta_hat) / (sigma*(v) sqrt(c_l^T (X^T X)^{-1} c_l))`.
//! The refit reuses the factorization of the original design, since
//! `beta* - beta_hat = X^+ E*` and the bootstrap residuals are `(I - X X^+) E*`.
//! Resampled residual rows are used as they are, without re-centering.
//!
//! `lambda*` is the lower empirical `alpha`-quantile of the pivotal statistic
//! `f_H(T*) = min_{k <= K ∧ |H|} t_k^{-1}(p_(k:H)(T*))` over the replicates.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::bounds::HypothesisSet;
use crate::error::{invalid, Result};
use crate::model::{p_value, t_value, Dataset, ModelFit, Sidedness, StatField, StatKind};
use crate::rng::child_rng;
use crate::templates::TemplateFamily;
use crate::Method;

/// Bootstrap p-value fields of one dataset.
#[derive(Debug, Clone)]
pub struct BootstrapSample {
    fields: Vec<StatField>,
    seed: u64,
    sidedness: Sidedness,
}

impl BootstrapSample {
    /// Wraps precomputed p-value fields.
    pub fn from_fields(fields: Vec<StatField>, seed: u64, sidedness: Sidedness) -> Result<Self> {
        let first = fields.first().ok_or_else(|| invalid("a bootstrap sample needs at least one field"))?;
        let m = first.len();
        if fields.iter().any(|f| f.len() != m || !f.kind().is_p_value()) {
            return Err(invalid("bootstrap fields must be p-value fields of equal size"));
        }
        Ok(Self { fields, seed, sidedness })
    }

    pub fn fields(&self) -> &[StatField] {
        &self.fields
    }

    /// Number of replicates `B`.
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    /// Number of hypotheses per field.
    pub fn n_hypotheses(&self) -> usize {
        self.fields[0].len()
    }
}

/// Outcome of a calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    /// Calibrated `lambda`; may exceed 1 when the template cannot reach the
    /// bootstrap quantile.
    pub lambda_star: f64,
    pub alpha: f64,
    pub bootstraps: usize,
    pub method: Method,
    /// Final working set of the step-down.
    pub surviving_set: Option<HypothesisSet>,
    pub f_samples: Vec<f64>,
    pub iterations: usize,
    /// Step-down only: the iteration emptied the working set and the last
    /// nonempty set was used instead.
    pub empty_fallback: bool,
}

impl CalibrationResult {
    /// `lambda_star` clamped to the template domain `[0, 1]`.
    pub fn lambda(&self) -> f64 {
        self.lambda_star.clamp(0.0, 1.0)
    }
}

fn replicate_t(fit: &ModelFit, dataset: &Dataset, seed: u64, b: usize) -> Vec<f64> {
    let n = dataset.n_subjects();
    let n_points = dataset.n_points();
    let mut rng = child_rng(seed, b as u64);
    let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();

    let mut e = DMatrix::<f64>::zeros(n, n_points);
    for (mut dst, src) in e.column_iter_mut().zip(fit.residuals.column_iter()) {
        for (d, &i) in dst.iter_mut().zip(&rows) {
            *d = src[i];
        }
    }
    let delta = &fit.coef_map * &e;
    let resid = e - dataset.design() * &delta;
    let dof = fit.dof() as f64;
    let sigma: Vec<f64> = resid.column_iter().map(|c| (c.norm_squared() / dof).sqrt()).collect();
    let effects = dataset.contrasts() * &delta;

    let n_contrasts = dataset.n_contrasts();
    let mut t = Vec::with_capacity(n_contrasts * n_points);
    for l in 0..n_contrasts {
        let scale = fit.contrast_scale[l];
        for v in 0..n_points {
            t.push(t_value(effects[(l, v)], sigma[v], scale));
        }
    }
    t
}

fn check_draw(fit: &ModelFit, dataset: &Dataset, bootstraps: usize) -> Result<()> {
    if bootstraps == 0 {
        return Err(invalid("need at least one bootstrap replicate"));
    }
    if fit.residuals.shape() != dataset.response().shape() {
        return Err(invalid("fit does not belong to this dataset"));
    }
    Ok(())
}

/// Bootstrap t-statistic fields, replicate `b` drawn from child stream `b`
/// of `seed`.
pub fn draw_bootstrap_statistics(
    fit: &ModelFit,
    dataset: &Dataset,
    bootstraps: usize,
    seed: u64,
) -> Result<Vec<StatField>> {
    check_draw(fit, dataset, bootstraps)?;
    (0..bootstraps)
        .into_par_iter()
        .map(|b| {
            StatField::new(
                replicate_t(fit, dataset, seed, b),
                dataset.n_contrasts(),
                dataset.n_points(),
                fit.dof(),
                StatKind::TStatistic,
            )
        })
        .collect()
}

/// Draws `bootstraps` residual-bootstrap replicates and stores their
/// p-values. Output depends only on `(seed, bootstraps, inputs)`.
pub fn draw_bootstrap(
    fit: &ModelFit,
    dataset: &Dataset,
    bootstraps: usize,
    seed: u64,
    sidedness: Sidedness,
) -> Result<BootstrapSample> {
    check_draw(fit, dataset, bootstraps)?;
    let dof = fit.dof() as f64;
    let kind = p_kind(sidedness);
    let fields = (0..bootstraps)
        .into_par_iter()
        .map(|b| {
            let p = replicate_t(fit, dataset, seed, b).into_iter().map(|t| p_value(t, dof, sidedness)).collect();
            StatField::new(p, dataset.n_contrasts(), dataset.n_points(), fit.dof(), kind)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapSample { fields, seed, sidedness })
}

fn p_kind(sidedness: Sidedness) -> StatKind {
    match sidedness {
        Sidedness::TwoSided => StatKind::PValueTwoSided,
        Sidedness::OneSided => StatKind::PValueOneSided,
    }
}

/// Pivotal statistic `f_H(T) = min_{1 <= k <= K ∧ |H|} t_k^{-1}(p_(k:H))`.
///
/// `field` may hold t-statistics (converted with its own degrees of freedom
/// and `sidedness`) or p-values (used as they are). An empty subset gives
/// `+inf`.
pub fn f_statistic(field: &StatField, subset: &HypothesisSet, family: &TemplateFamily, sidedness: Sidedness) -> f64 {
    let mut ps = subset.gather(field.values());
    if field.kind() == StatKind::TStatistic {
        let dof = field.dof() as f64;
        for p in &mut ps {
            *p = p_value(*p, dof, sidedness);
        }
    }
    ps.sort_unstable_by(f64::total_cmp);
    pivotal_sorted(&ps, family)
}

/// `f` over a set whose p-values are already sorted ascending.
pub fn pivotal_sorted(sorted: &[f64], family: &TemplateFamily) -> f64 {
    let kmax = family.size().min(sorted.len());
    sorted[..kmax]
        .iter()
        .enumerate()
        .map(|(i, &p)| family.inv(i + 1, p))
        .fold(f64::INFINITY, f64::min)
}

/// A bootstrap field with its hypotheses ordered by p-value, so that `f`
/// over any subset is a single filtered pass.
struct SortedField {
    p: Vec<f64>,
    ids: Vec<u32>,
}

impl SortedField {
    fn new(field: &StatField) -> Self {
        let vals = field.values();
        let mut ids: Vec<u32> = (0..vals.len() as u32).collect();
        ids.sort_unstable_by(|&a, &b| vals[a as usize].total_cmp(&vals[b as usize]));
        let p = ids.iter().map(|&i| vals[i as usize]).collect();
        Self { p, ids }
    }

    fn pivotal(&self, mask: Option<&[bool]>, set_size: usize, family: &TemplateFamily) -> f64 {
        let kmax = family.size().min(set_size);
        if kmax == 0 {
            return f64::INFINITY;
        }
        let mut k = 0;
        let mut best = f64::INFINITY;
        for (&p, &id) in self.p.iter().zip(&self.ids) {
            if mask.is_some_and(|m| !m[id as usize]) {
                continue;
            }
            k += 1;
            best = best.min(family.inv(k, p));
            if k == kmax {
                break;
            }
        }
        best
    }
}

/// Lower empirical quantile: the smallest sample `x` with
/// `#{f <= x} / B >= alpha`, i.e. the `ceil(alpha B)`-th order statistic.
pub fn bootstrap_quantile(samples: &[f64], alpha: f64) -> f64 {
    assert!(!samples.is_empty(), "quantile of an empty sample");
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted[quantile_rank(sorted.len(), alpha) - 1]
}

/// 1-based rank of the lower `alpha`-quantile among `b` samples, evaluated
/// as `rank / b >= alpha` in floating point so that e.g. `alpha = 0.07`,
/// `b = 100` gives rank 7.
fn quantile_rank(b: usize, alpha: f64) -> usize {
    let bf = b as f64;
    let mut i = ((alpha * bf).ceil() as usize).clamp(1, b);
    while i > 1 && (i - 1) as f64 / bf >= alpha {
        i -= 1;
    }
    while i < b && (i as f64 / bf) < alpha {
        i += 1;
    }
    i
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} outside (0, 1)")));
    }
    Ok(())
}

fn check_family(sample: &BootstrapSample, family: &TemplateFamily) -> Result<()> {
    if family.total_hypotheses() != sample.n_hypotheses() && family.size() > 1 {
        log::debug!(
            "template over {} hypotheses used with fields of {}",
            family.total_hypotheses(),
            sample.n_hypotheses()
        );
    }
    Ok(())
}

fn sorted_fields(sample: &BootstrapSample) -> Vec<SortedField> {
    sample.fields.par_iter().map(SortedField::new).collect()
}

fn f_samples_over(sorted: &[SortedField], set: &HypothesisSet, m: usize, family: &TemplateFamily) -> Vec<f64> {
    let mask = (set.len() < m).then(|| set.mask(m));
    sorted
        .par_iter()
        .map(|s| s.pivotal(mask.as_deref(), set.len(), family))
        .collect()
}

/// Single-step calibration over `subset` (usually the full set).
pub fn calibrate_single_step(
    sample: &BootstrapSample,
    subset: &HypothesisSet,
    family: &TemplateFamily,
    alpha: f64,
) -> Result<CalibrationResult> {
    check_alpha(alpha)?;
    check_family(sample, family)?;
    let m = sample.n_hypotheses();
    if subset.indices().last().is_some_and(|&i| i >= m) {
        return Err(invalid("subset id out of range"));
    }
    let sorted = sorted_fields(sample);
    let f_samples = f_samples_over(&sorted, subset, m, family);
    Ok(CalibrationResult {
        lambda_star: bootstrap_quantile(&f_samples, alpha),
        alpha,
        bootstraps: sample.len(),
        method: Method::SingleStep,
        surviving_set: None,
        f_samples,
        iterations: 1,
        empty_fallback: false,
    })
}

/// Step-down calibration.
///
/// Starting from the full set, `lambda_j` is the bootstrap quantile over the
/// current working set and the next working set keeps the hypotheses with
/// `p >= t_1(lambda_j)`. The same bootstrap fields are reused throughout.
/// Iteration stops when the set no longer changes or after
/// `max_iterations`.
pub fn calibrate_step_down(
    sample: &BootstrapSample,
    p_values: &StatField,
    family: &TemplateFamily,
    alpha: f64,
    max_iterations: usize,
) -> Result<CalibrationResult> {
    check_alpha(alpha)?;
    check_family(sample, family)?;
    if max_iterations == 0 {
        return Err(invalid("max_iterations must be at least 1"));
    }
    let m = sample.n_hypotheses();
    if p_values.len() != m || !p_values.kind().is_p_value() {
        return Err(invalid("observed p-values do not match the bootstrap fields"));
    }
    let sorted = sorted_fields(sample);
    let observed = p_values.values();

    let mut set = HypothesisSet::full(m);
    let mut f_samples = f_samples_over(&sorted, &set, m, family);
    let mut lambda = bootstrap_quantile(&f_samples, alpha);
    let mut iterations = 0;
    let mut empty_fallback = false;
    loop {
        iterations += 1;
        let t1 = family.t(1, lambda.clamp(0.0, 1.0));
        let next: Vec<usize> = (0..m).filter(|&h| observed[h] >= t1).collect();
        if next.len() == set.len() {
            break;
        }
        if next.is_empty() {
            empty_fallback = true;
            break;
        }
        set = HypothesisSet::new(next, m)?;
        f_samples = f_samples_over(&sorted, &set, m, family);
        lambda = bootstrap_quantile(&f_samples, alpha);
        if iterations >= max_iterations {
            break;
        }
    }

    Ok(CalibrationResult {
        lambda_star: lambda,
        alpha,
        bootstraps: sample.len(),
        method: Method::StepDown,
        surviving_set: Some(set),
        f_samples,
        iterations,
        empty_fallback,
    })
}

/// FWER threshold: the bootstrap `alpha`-quantile of the minimum p-value.
pub fn fwer_threshold(sample: &BootstrapSample, alpha: f64) -> Result<CalibrationResult> {
    check_alpha(alpha)?;
    let f_samples: Vec<f64> = sample
        .fields
        .iter()
        .map(|f| f.values().iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    Ok(CalibrationResult {
        lambda_star: bootstrap_quantile(&f_samples, alpha),
        alpha,
        bootstraps: sample.len(),
        method: Method::FwerMinP,
        surviving_set: None,
        f_samples,
        iterations: 1,
        empty_fallback: false,
    })
}

/// Hypotheses rejected at an FWER threshold: `{h : p_h <= lambda}`.
pub fn fwer_rejections(p_values: &StatField, lambda: f64) -> HypothesisSet {
    let ids = p_values.values().iter().enumerate().filter(|(_, &p)| p <= lambda).map(|(i, _)| i).collect();
    HypothesisSet::new(ids, p_values.len()).expect("ids in range")
}

/// The template under which the FWER threshold is a single-step
/// calibration: `K = 1`, `t_1(lambda) = lambda`.
pub fn fwer_family() -> TemplateFamily {
    TemplateFamily::linear(1, 1).expect("valid template")
}

/// Calibration without keeping the bootstrap fields in memory.
///
/// Replicates are regenerated from their child seeds on every pass, so the
/// result equals [`calibrate_single_step`] / [`calibrate_step_down`] on the
/// sample from [`draw_bootstrap`] with the same seed, at the cost of one
/// resampling pass per step-down iteration.
pub struct StreamingCalibration<'a> {
    pub fit: &'a ModelFit,
    pub dataset: &'a Dataset,
    pub bootstraps: usize,
    pub seed: u64,
    pub sidedness: Sidedness,
}

impl StreamingCalibration<'_> {
    fn f_samples(&self, set: &HypothesisSet, family: &TemplateFamily) -> Vec<f64> {
        let m = self.dataset.n_hypotheses();
        let mask = (set.len() < m).then(|| set.mask(m));
        let dof = self.fit.dof() as f64;
        (0..self.bootstraps)
            .into_par_iter()
            .map(|b| {
                let t = replicate_t(self.fit, self.dataset, self.seed, b);
                let mut ps: Vec<f64> = t
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| mask.as_ref().is_none_or(|mk| mk[*i]))
                    .map(|(_, t)| p_value(t, dof, self.sidedness))
                    .collect();
                ps.sort_unstable_by(f64::total_cmp);
                pivotal_sorted(&ps, family)
            })
            .collect()
    }

    pub fn single_step(&self, family: &TemplateFamily, alpha: f64) -> Result<CalibrationResult> {
        check_alpha(alpha)?;
        check_draw(self.fit, self.dataset, self.bootstraps)?;
        let f_samples = self.f_samples(&HypothesisSet::full(self.dataset.n_hypotheses()), family);
        Ok(CalibrationResult {
            lambda_star: bootstrap_quantile(&f_samples, alpha),
            alpha,
            bootstraps: self.bootstraps,
            method: Method::SingleStep,
            surviving_set: None,
            f_samples,
            iterations: 1,
            empty_fallback: false,
        })
    }

    pub fn step_down(
        &self,
        p_values: &StatField,
        family: &TemplateFamily,
        alpha: f64,
        max_iterations: usize,
    ) -> Result<CalibrationResult> {
        check_alpha(alpha)?;
        check_draw(self.fit, self.dataset, self.bootstraps)?;
        if max_iterations == 0 {
            return Err(invalid("max_iterations must be at least 1"));
        }
        let m = self.dataset.n_hypotheses();
        if p_values.len() != m {
            return Err(invalid("observed p-values do not match the dataset"));
        }
        let observed = p_values.values();
        let mut set = HypothesisSet::full(m);
        let mut f_samples = self.f_samples(&set, family);
        let mut lambda = bootstrap_quantile(&f_samples, alpha);
        let mut iterations = 0;
        let mut empty_fallback = false;
        loop {
            iterations += 1;
            let t1 = family.t(1, lambda.clamp(0.0, 1.0));
            let next: Vec<usize> = (0..m).filter(|&h| observed[h] >= t1).collect();
            if next.len() == set.len() {
                break;
            }
            if next.is_empty() {
                empty_fallback = true;
                break;
            }
            set = HypothesisSet::new(next, m)?;
            f_samples = self.f_samples(&set, family);
            lambda = bootstrap_quantile(&f_samples, alpha);
            if iterations >= max_iterations {
                break;
            }
        }
        Ok(CalibrationResult {
            lambda_star: lambda,
            alpha,
            bootstraps: self.bootstraps,
            method: Method::StepDown,
            surviving_set: Some(set),
            f_samples,
            iterations,
            empty_fallback,
        })
    }
}
