//! Post hoc bounds on the number of false positives in a hypothesis set.
//!
//! For a template family and a calibrated `lambda`, the reference rejection
//! sets are `R_k = {h : p_h <= t_k(lambda)}` with tolerances `zeta_k`
//! (`k - 1` by default). The bound for any set `H` is
//!
//! ```text
//! Vbar(H) = min_k ( |{h in H : p_h > t_k(lambda)}| + zeta_k ) ∧ |H|
//! ```
//!
//! and holds simultaneously over every `H` whenever the joint error rate of
//! the reference family is controlled. A p-value exactly on a threshold
//! counts as rejected.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::StatField;
use crate::templates::TemplateFamily;
use crate::Method;

/// A sorted, duplicate-free set of hypothesis ids in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HypothesisSet {
    indices: Vec<usize>,
    label: Option<String>,
}

impl HypothesisSet {
    /// Builds a set from arbitrary ids; they are sorted and deduplicated.
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= m {
                return Err(invalid(format!("hypothesis id {last} out of range for m = {m}")));
            }
        }
        Ok(Self { indices, label: None })
    }

    /// All `m` hypotheses.
    pub fn full(m: usize) -> Self {
        Self { indices: (0..m).collect(), label: None }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.indices.binary_search(&id).is_ok()
    }

    /// Membership mask of length `m`.
    pub fn mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }

    pub fn is_subset_of(&self, other: &HypothesisSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn intersection_len(&self, other: &HypothesisSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Values of `field` restricted to this set, in id order.
    pub fn gather(&self, field: &[f64]) -> Vec<f64> {
        self.indices.iter().map(|&i| field[i]).collect()
    }
}

/// Bound on the false positives of one hypothesis set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub set_size: usize,
    pub false_positive_bound: usize,
    pub tdp_lower: f64,
    pub fdp_upper: f64,
    pub lambda_used: f64,
    pub method: Option<Method>,
}

impl BoundReport {
    fn new(set_size: usize, v_bar: usize, lambda: f64) -> Self {
        let (tdp, fdp) = if set_size == 0 {
            (0.0, 0.0)
        } else {
            let fdp = v_bar as f64 / set_size as f64;
            ((set_size - v_bar) as f64 / set_size as f64, fdp)
        };
        Self {
            set_size,
            false_positive_bound: v_bar,
            tdp_lower: tdp,
            fdp_upper: fdp,
            lambda_used: lambda,
            method: None,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = Some(method);
        self
    }

    /// Lower bound on the number of true positives, `|H| - Vbar(H)`.
    pub fn tp_lower(&self) -> usize {
        self.set_size - self.false_positive_bound
    }
}

/// Validates a `zeta` vector against a family: at least `K` entries,
/// nondecreasing.
pub fn check_zeta(zeta: &[usize], family: &TemplateFamily) -> Result<()> {
    if zeta.len() < family.size() {
        return Err(invalid(format!("zeta has {} entries, template size is {}", zeta.len(), family.size())));
    }
    if zeta.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("zeta must be nondecreasing"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("lambda = {lambda} outside [0, 1]")));
    }
    Ok(())
}

#[inline]
fn zeta_at(zeta: Option<&[usize]>, k: usize) -> usize {
    zeta.map_or(k - 1, |z| z[k - 1])
}

/// `Vbar(H)` for a p-value field and a hypothesis subset.
pub fn vbar(
    p_values: &StatField,
    subset: &HypothesisSet,
    family: &TemplateFamily,
    lambda: f64,
    zeta: Option<&[usize]>,
) -> Result<BoundReport> {
    if !p_values.kind().is_p_value() {
        return Err(invalid("vbar expects a p-value field"));
    }
    if subset.indices().last().is_some_and(|&i| i >= p_values.len()) {
        return Err(invalid("subset id out of range for the p-value field"));
    }
    let mut ps = subset.gather(p_values.values());
    ps.sort_unstable_by(f64::total_cmp);
    let v = vbar_sorted(&ps, family, lambda, zeta)?;
    Ok(BoundReport::new(ps.len(), v, lambda))
}

/// `Vbar` of a set given its p-values sorted ascending.
///
/// One merged sweep over `k` and the sorted values; the loop stops as soon
/// as `zeta_k` alone reaches the best count so far.
pub fn vbar_sorted(sorted: &[f64], family: &TemplateFamily, lambda: f64, zeta: Option<&[usize]>) -> Result<usize> {
    check_lambda(lambda)?;
    if let Some(z) = zeta {
        check_zeta(z, family)?;
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));

    let h = sorted.len();
    let mut best = h;
    let mut rejected = 0usize;
    let mut prev_t = f64::NEG_INFINITY;
    for k in 1..=family.size() {
        let z = zeta_at(zeta, k);
        if z >= best {
            break;
        }
        let t = family.t(k, lambda);
        if t >= prev_t {
            while rejected < h && sorted[rejected] <= t {
                rejected += 1;
            }
        } else {
            rejected = sorted.partition_point(|&p| p <= t);
        }
        prev_t = t;
        best = best.min(h - rejected + z);
    }
    Ok(best)
}

/// Direct `O(K |H|)` evaluation of `Vbar`, kept as a reference.
pub fn vbar_reference(p_subset: &[f64], family: &TemplateFamily, lambda: f64, zeta: Option<&[usize]>) -> usize {
    let h = p_subset.len();
    let mut best = h;
    for k in 1..=family.size() {
        let t = family.t(k, lambda);
        let survivors = p_subset.iter().filter(|&&p| p > t).count();
        best = best.min(survivors + zeta_at(zeta, k));
    }
    best
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} outside (0, 1)")));
    }
    Ok(())
}

/// `lambda` of the Simes bound: the linear template at `lambda = alpha`.
pub fn simes_lambda(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha)
}

/// Hommel factor
/// `h(alpha) = max{ i : p_(m-i+j) > alpha j / i for all j in 1..=i }`,
/// or 0 when no `i` qualifies.
pub fn hommel_factor(p_values: &[f64], alpha: f64) -> usize {
    let mut sorted = p_values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let m = sorted.len();
    for i in (1..=m).rev() {
        let tail = &sorted[m - i..];
        let fi = i as f64;
        if tail.iter().enumerate().all(|(j0, &p)| p > alpha * (j0 + 1) as f64 / fi) {
            return i;
        }
    }
    0
}

/// `lambda` of the ARI bound, `alpha * m / h(alpha)` clamped to 1; 1 when
/// `h(alpha) = 0`.
pub fn ari_lambda(p_values: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let h = hommel_factor(p_values, alpha);
    if h == 0 {
        return Ok(1.0);
    }
    Ok((alpha * (p_values.len() as f64 / h as f64)).min(1.0))
}

/// Hypothesis ids ordered by increasing p-value, ties by id.
pub fn p_value_order(p_values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p_values.len()).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]).then(a.cmp(&b)));
    order
}

/// Benjamini-Hochberg step-up rejection set at level `q`.
pub fn bh_rejection_set(p_values: &[f64], q: f64) -> Result<HypothesisSet> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid(format!("q = {q} outside (0, 1)")));
    }
    let m = p_values.len();
    let order = p_value_order(p_values);
    let mf = m as f64;
    let k = (1..=m).rev().find(|&k| p_values[order[k - 1]] <= q * k as f64 / mf).unwrap_or(0);
    HypothesisSet::new(order[..k].to_vec(), m)
}

/// One point of a top-k confidence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub v_bar: usize,
    pub tp_lower: usize,
    pub fdp_upper: f64,
}

/// Bounds for the sets `H_k` of the `k` smallest p-values, `k = 1..=k_max`.
///
/// With `c_j = |{p <= t_j(lambda)}|` over all hypotheses, the bound is
/// `Vbar(H_k) = min(k, min_j (max(0, k - c_j) + zeta_j))`; splitting the
/// inner minimum on `c_j >= k` gives a suffix minimum of `zeta_j` and a
/// prefix minimum of `zeta_j - c_j`, both tabulated once over `c`.
pub fn topk_curves(
    p_values: &[f64],
    family: &TemplateFamily,
    lambda: f64,
    k_max: usize,
    zeta: Option<&[usize]>,
) -> Result<Vec<CurvePoint>> {
    check_lambda(lambda)?;
    if let Some(z) = zeta {
        check_zeta(z, family)?;
    }
    let m = p_values.len();
    if k_max == 0 || k_max > m {
        return Err(invalid(format!("k_max = {k_max} outside 1..={m}")));
    }
    let mut sorted = p_values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);

    // min zeta_j and min (zeta_j - c_j) among j with c_j == c
    let mut min_zeta = vec![i64::MAX; m + 1];
    let mut min_zeta_minus_c = vec![i64::MAX; m + 1];
    for j in 1..=family.size() {
        let t = family.t(j, lambda);
        let c = sorted.partition_point(|&p| p <= t);
        let z = zeta_at(zeta, j) as i64;
        min_zeta[c] = min_zeta[c].min(z);
        min_zeta_minus_c[c] = min_zeta_minus_c[c].min(z - c as i64);
    }
    // suffix[c] = min over c' >= c of min_zeta
    let mut suffix = vec![i64::MAX; m + 2];
    for c in (0..=m).rev() {
        suffix[c] = suffix[c + 1].min(min_zeta[c]);
    }

    let mut curve = Vec::with_capacity(k_max);
    let mut prefix = i64::MAX; // min over c < k of min_zeta_minus_c
    for k in 1..=k_max {
        prefix = prefix.min(min_zeta_minus_c[k - 1]);
        let ki = k as i64;
        let mut v = ki.min(suffix[k]);
        if prefix != i64::MAX {
            v = v.min(ki + prefix);
        }
        let v = v as usize;
        curve.push(CurvePoint { k, v_bar: v, tp_lower: k - v, fdp_upper: v as f64 / k as f64 });
    }
    Ok(curve)
}
