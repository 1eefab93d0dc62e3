//! Template families `(t_k)_{1<=k<=K}` of threshold functions.
//!
//! A template maps a single parameter `lambda` in `[0, 1]` to the K nested
//! rejection thresholds `t_1(lambda), ..., t_K(lambda)`. Every `t_k` must
//! satisfy `t_k(0) = 0` and be continuous and strictly increasing.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// A user-supplied template.
///
/// Implementors provide the forward map and, when available in closed form,
/// the inverse. Without an inverse, [`TemplateFamily::inverse_threshold`]
/// falls back to bisection on `[0, 1]`.
pub trait Template: Send + Sync + fmt::Debug {
    /// `t_k(lambda)` for `k` in `1..=K`.
    fn threshold(&self, k: usize, lambda: f64) -> f64;

    /// `t_k^{-1}(p)`, or `None` to request bisection.
    fn inverse(&self, _k: usize, _p: f64) -> Option<f64> {
        None
    }
}

#[derive(Clone)]
pub enum TemplateKind {
    /// `t_k(lambda) = lambda * k / m`.
    Linear,
    Custom(Arc<dyn Template>),
}

impl fmt::Debug for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateKind::Linear => f.write_str("Linear"),
            TemplateKind::Custom(t) => write!(f, "Custom({t:?})"),
        }
    }
}

/// A size-`K` template over `m` hypotheses.
#[derive(Debug, Clone)]
pub struct TemplateFamily {
    size: usize,
    total_hypotheses: usize,
    kind: TemplateKind,
}

const BISECTION_TOL: f64 = 1e-12;
const GRID_POINTS: usize = 64;

impl TemplateFamily {
    /// The linear template of size `size` over `m` hypotheses.
    pub fn linear(m: usize, size: usize) -> Result<Self> {
        check_size(m, size)?;
        Ok(Self { size, total_hypotheses: m, kind: TemplateKind::Linear })
    }

    /// The linear template with `K = m`.
    pub fn linear_full(m: usize) -> Result<Self> {
        Self::linear(m, m)
    }

    /// A custom template. Each `t_k` is spot-checked on a grid for
    /// `t_k(0) = 0` and strict monotonicity.
    pub fn custom(m: usize, size: usize, template: Arc<dyn Template>) -> Result<Self> {
        check_size(m, size)?;
        for k in 1..=size {
            if template.threshold(k, 0.0) != 0.0 {
                return Err(invalid(format!("custom template: t_{k}(0) != 0")));
            }
            let mut prev = 0.0;
            for i in 1..=GRID_POINTS {
                let v = template.threshold(k, i as f64 / GRID_POINTS as f64);
                if !v.is_finite() || v <= prev {
                    return Err(invalid(format!("custom template: t_{k} is not strictly increasing")));
                }
                prev = v;
            }
        }
        Ok(Self { size, total_hypotheses: m, kind: TemplateKind::Custom(template) })
    }

    /// `K`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `m`.
    pub fn total_hypotheses(&self) -> usize {
        self.total_hypotheses
    }

    pub fn kind(&self) -> &TemplateKind {
        &self.kind
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, TemplateKind::Linear)
    }

    /// `t_k(lambda)`.
    pub fn threshold(&self, k: usize, lambda: f64) -> Result<f64> {
        self.check_k(k)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(invalid(format!("lambda = {lambda} outside [0, 1]")));
        }
        Ok(self.t(k, lambda))
    }

    /// `t_k^{-1}(p)`.
    ///
    /// The linear template returns `p * m / k` unclamped, which may exceed 1;
    /// callers only ever compare it to a `lambda` in `[0, 1]`. Custom
    /// templates return `+inf` for `p > t_k(1)`.
    pub fn inverse_threshold(&self, k: usize, p: f64) -> Result<f64> {
        self.check_k(k)?;
        Ok(self.inv(k, p))
    }

    #[inline]
    pub(crate) fn t(&self, k: usize, lambda: f64) -> f64 {
        match &self.kind {
            TemplateKind::Linear => lambda * k as f64 / self.total_hypotheses as f64,
            TemplateKind::Custom(t) => t.threshold(k, lambda),
        }
    }

    #[inline]
    pub(crate) fn inv(&self, k: usize, p: f64) -> f64 {
        match &self.kind {
            TemplateKind::Linear => p * self.total_hypotheses as f64 / k as f64,
            TemplateKind::Custom(t) => {
                if p <= 0.0 {
                    return 0.0;
                }
                let top = t.threshold(k, 1.0);
                if p > top {
                    return f64::INFINITY;
                }
                match t.inverse(k, p) {
                    Some(x) => x,
                    None => bisect(|x| t.threshold(k, x), p),
                }
            }
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.size {
            return Err(invalid(format!("k = {k} outside 1..={}", self.size)));
        }
        Ok(())
    }
}

fn check_size(m: usize, size: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("template over zero hypotheses"));
    }
    if size == 0 || size > m {
        return Err(invalid(format!("template size {size} outside 1..={m}")));
    }
    Ok(())
}

/// Smallest `x` (to `BISECTION_TOL`) in `[0, 1]` with `f(x) >= target`.
fn bisect(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
