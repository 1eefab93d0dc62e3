//! Point-wise linear model: one design fitted to every column of the response.

pub mod student;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Design, response and contrasts of a mass-univariate linear model.
///
/// Rows are subjects; each response column is one point of the domain
/// (a voxel, a gene). Hypothesis `(l, v)` is addressed by the id
/// `l * n_points + v`.
#[derive(Debug, Clone)]
pub struct Dataset {
    design: DMatrix<f64>,
    response: DMatrix<f64>,
    contrasts: DMatrix<f64>,
    point_labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(design: DMatrix<f64>, response: DMatrix<f64>, contrasts: DMatrix<f64>) -> Result<Self> {
        let (n, p) = design.shape();
        if n < 2 {
            return Err(invalid(format!("need at least 2 subjects, got {n}")));
        }
        if p == 0 {
            return Err(invalid("design has no columns"));
        }
        if response.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "response has {} rows but design has {n}",
                response.nrows()
            )));
        }
        if response.ncols() == 0 {
            return Err(invalid("response has no columns"));
        }
        if contrasts.ncols() != p {
            return Err(Error::DimensionMismatch(format!(
                "contrasts have {} columns but design has {p}",
                contrasts.ncols()
            )));
        }
        if contrasts.nrows() == 0 {
            return Err(invalid("no contrasts given"));
        }
        if !design.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("design"));
        }
        if !response.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("response"));
        }
        if !contrasts.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("contrasts"));
        }
        for (l, row) in contrasts.row_iter().enumerate() {
            if row.iter().all(|&c| c == 0.0) {
                return Err(invalid(format!("contrast {l} is all zero")));
            }
        }
        Ok(Self { design, response, contrasts, point_labels: None })
    }

    pub fn with_point_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "{} point labels for {} points",
                labels.len(),
                self.n_points()
            )));
        }
        self.point_labels = Some(labels);
        Ok(self)
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn response(&self) -> &DMatrix<f64> {
        &self.response
    }

    pub fn contrasts(&self) -> &DMatrix<f64> {
        &self.contrasts
    }

    pub fn point_labels(&self) -> Option<&[String]> {
        self.point_labels.as_deref()
    }

    pub fn n_subjects(&self) -> usize {
        self.design.nrows()
    }

    pub fn n_covariates(&self) -> usize {
        self.design.ncols()
    }

    pub fn n_points(&self) -> usize {
        self.response.ncols()
    }

    pub fn n_contrasts(&self) -> usize {
        self.contrasts.nrows()
    }

    /// Total number of hypotheses `m = L * n_points`.
    pub fn n_hypotheses(&self) -> usize {
        self.n_contrasts() * self.n_points()
    }
}

/// Least-squares fit of a [`Dataset`].
#[derive(Debug, Clone)]
pub struct ModelFit {
    pub beta_hat: DMatrix<f64>,
    pub residuals: DMatrix<f64>,
    pub sigma_hat: DVector<f64>,
    pub rank: usize,
    /// `(X^T X)^{-1}`, or the pseudo-inverse when the design is rank deficient.
    pub gram_inverse: DMatrix<f64>,
    /// `X^+`, the `p x n` map from a response column to its coefficients.
    pub(crate) coef_map: DMatrix<f64>,
    /// `sqrt(c_l^T (X^T X)^{-1} c_l)` per contrast.
    pub(crate) contrast_scale: Vec<f64>,
}

impl ModelFit {
    /// Residual degrees of freedom `n - rank`.
    pub fn dof(&self) -> usize {
        self.residuals.nrows() - self.rank
    }

    pub fn coef_map(&self) -> &DMatrix<f64> {
        &self.coef_map
    }
}

/// Fits the design to every response column.
///
/// The design is factorized once. Its rank comes from a column-pivoted QR
/// with tolerance `n * eps * max |R_ii|`; full-rank designs are then solved
/// through a thin QR and rank-deficient ones through the truncated SVD
/// pseudo-inverse, which gives the minimum-norm coefficients.
pub fn fit(dataset: &Dataset) -> Result<ModelFit> {
    let x = dataset.design();
    let (n, p) = x.shape();

    let rank = design_rank(x);
    if rank == 0 {
        return Err(Error::Singular("design matrix is zero".into()));
    }
    if n <= rank {
        return Err(Error::NoResidualDof { n, rank });
    }

    let coef_map = if rank == p {
        let qr = x.clone().qr();
        let q = qr.q();
        let r = qr.r();
        r.solve_upper_triangular(&q.transpose())
            .ok_or_else(|| Error::Singular("triangular factor of the design".into()))?
    } else {
        log::warn!("design has rank {rank} < {p} columns; using the minimum-norm solution");
        truncated_pinv(x, rank)
    };

    let y = dataset.response();
    let beta_hat = &coef_map * y;
    let residuals = y - x * &beta_hat;
    let dof = (n - rank) as f64;
    let sigma_hat = DVector::from_iterator(
        residuals.ncols(),
        residuals.column_iter().map(|c| (c.norm_squared() / dof).sqrt()),
    );
    let gram_inverse = &coef_map * coef_map.transpose();

    let contrast_scale = contrast_scales(dataset.contrasts(), &gram_inverse)?;

    Ok(ModelFit { beta_hat, residuals, sigma_hat, rank, gram_inverse, coef_map, contrast_scale })
}

fn design_rank(x: &DMatrix<f64>) -> usize {
    let n = x.nrows();
    let r = x.clone().col_piv_qr().r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].abs()).collect();
    let largest = diag.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    let tol = n as f64 * f64::EPSILON * largest;
    diag.iter().filter(|&&d| d > tol).count()
}

fn truncated_pinv(x: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let svd = x.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let (n, p) = x.shape();
    let mut pinv = DMatrix::zeros(p, n);
    for &i in order.iter().take(rank) {
        let s = svd.singular_values[i];
        pinv += v_t.row(i).transpose() * u.column(i).transpose() / s;
    }
    pinv
}

fn contrast_scales(contrasts: &DMatrix<f64>, gram_inverse: &DMatrix<f64>) -> Result<Vec<f64>> {
    contrasts
        .row_iter()
        .enumerate()
        .map(|(l, c)| {
            let q = (c * gram_inverse * c.transpose())[(0, 0)];
            let scale_ref = c.norm_squared() * gram_inverse.norm();
            if q.is_nan() || q <= 1e-13 * scale_ref {
                return Err(invalid(format!("contrast {l} has zero variance under this design")));
            }
            Ok(q.sqrt())
        })
        .collect()
}

/// Whether p-values look at both tails of the t distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    #[default]
    TwoSided,
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKind {
    TStatistic,
    PValueTwoSided,
    PValueOneSided,
}

impl StatKind {
    pub fn is_p_value(self) -> bool {
        !matches!(self, StatKind::TStatistic)
    }
}

/// An `L x n_points` field of statistics, stored flat by hypothesis id
/// `l * n_points + v`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatField {
    values: Vec<f64>,
    n_contrasts: usize,
    n_points: usize,
    dof: usize,
    kind: StatKind,
}

impl StatField {
    pub fn new(values: Vec<f64>, n_contrasts: usize, n_points: usize, dof: usize, kind: StatKind) -> Result<Self> {
        if values.len() != n_contrasts * n_points {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {n_contrasts} x {n_points} field",
                values.len()
            )));
        }
        if kind.is_p_value() && !values.iter().all(|p| (0.0..=1.0).contains(p)) {
            return Err(invalid("p-values must lie in [0, 1]"));
        }
        Ok(Self { values, n_contrasts, n_points, dof, kind })
    }

    /// A single-contrast field of two-sided p-values, for data that only
    /// comes as p-values.
    pub fn from_p_values(values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        Self::new(values, 1, m, 1, StatKind::PValueTwoSided)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, contrast: usize, point: usize) -> f64 {
        self.values[contrast * self.n_points + point]
    }

    pub fn n_contrasts(&self) -> usize {
        self.n_contrasts
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Number of hypotheses `m`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn kind(&self) -> StatKind {
        self.kind
    }

    /// Splits a hypothesis id into `(contrast, point)`.
    pub fn split_id(&self, id: usize) -> (usize, usize) {
        (id / self.n_points, id % self.n_points)
    }
}

/// Contrast t-statistic with the degenerate-scale conventions: a zero
/// residual scale gives `+-inf` for a nonzero numerator and `0` otherwise.
#[inline]
pub(crate) fn t_value(numerator: f64, sigma: f64, scale: f64) -> f64 {
    if sigma > 0.0 {
        numerator / (sigma * scale)
    } else if numerator == 0.0 {
        0.0
    } else {
        numerator.signum() * f64::INFINITY
    }
}

/// Contrast t-statistics `c_l^T beta_hat(v) / (sigma_hat(v) sqrt(c_l^T (X^T X)^{-1} c_l))`.
///
/// `null_offsets`, when given, is subtracted from each numerator.
pub fn t_statistics(fit: &ModelFit, dataset: &Dataset, null_offsets: Option<&DMatrix<f64>>) -> Result<StatField> {
    let (n_contrasts, n_points) = (dataset.n_contrasts(), dataset.n_points());
    if fit.beta_hat.ncols() != n_points || fit.contrast_scale.len() != n_contrasts {
        return Err(Error::DimensionMismatch("fit does not belong to this dataset".into()));
    }
    if let Some(off) = null_offsets {
        if off.shape() != (n_contrasts, n_points) {
            return Err(Error::DimensionMismatch(format!(
                "null offsets are {:?}, expected ({n_contrasts}, {n_points})",
                off.shape()
            )));
        }
    }
    let effects = dataset.contrasts() * &fit.beta_hat;
    let mut values = Vec::with_capacity(n_contrasts * n_points);
    for l in 0..n_contrasts {
        let scale = fit.contrast_scale[l];
        for v in 0..n_points {
            let mut num = effects[(l, v)];
            if let Some(off) = null_offsets {
                num -= off[(l, v)];
            }
            values.push(t_value(num, fit.sigma_hat[v], scale));
        }
    }
    StatField::new(values, n_contrasts, n_points, fit.dof(), StatKind::TStatistic)
}

/// Point-wise F-statistics for the joint null `C beta(v) = 0`.
pub fn f_statistics(fit: &ModelFit, dataset: &Dataset) -> Result<Vec<f64>> {
    let c = dataset.contrasts();
    let middle = c * &fit.gram_inverse * c.transpose();
    let middle_inv = middle
        .clone()
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or_else(|| Error::Singular("C (X^T X)^{-1} C^T".into()))?;
    let rank_c = matrix_rank(c) as f64;

    let effects = c * &fit.beta_hat;
    Ok(effects
        .column_iter()
        .zip(fit.sigma_hat.iter())
        .map(|(e, &sigma)| {
            let quad = (e.transpose() * &middle_inv * e)[(0, 0)].max(0.0);
            let s2 = sigma * sigma;
            if s2 > 0.0 {
                quad / (rank_c * s2)
            } else if quad == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect())
}

fn matrix_rank(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().singular_values();
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    let tol = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * largest;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Student p-values of a t-statistic field, clamped to `[0, 1]`.
pub fn p_values(stats: &StatField, sidedness: Sidedness) -> Result<StatField> {
    if stats.kind != StatKind::TStatistic {
        return Err(invalid("p_values expects a t-statistic field"));
    }
    if stats.dof < 1 {
        return Err(invalid("p-values need at least one degree of freedom"));
    }
    let dof = stats.dof as f64;
    let values = stats.values.iter().map(|&t| p_value(t, dof, sidedness)).collect();
    let kind = match sidedness {
        Sidedness::TwoSided => StatKind::PValueTwoSided,
        Sidedness::OneSided => StatKind::PValueOneSided,
    };
    Ok(StatField { values, n_contrasts: stats.n_contrasts, n_points: stats.n_points, dof: stats.dof, kind })
}

#[inline]
pub(crate) fn p_value(t: f64, dof: f64, sidedness: Sidedness) -> f64 {
    let p = match sidedness {
        Sidedness::TwoSided => student::two_sided_tail(t, dof),
        Sidedness::OneSided => student::upper_tail(t, dof),
    };
    p.clamp(0.0, 1.0)
}
