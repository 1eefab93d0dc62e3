//! Simultaneous post hoc bounds on the number of false positives among
//! contrast hypotheses in the mass-univariate linear model.
//!
//! The pipeline is:
//!
//! 1. [`model::fit`] the same design to every point of a response matrix and
//!    compute contrast t-statistics and p-values;
//! 2. calibrate a threshold `lambda` for a [`templates::TemplateFamily`],
//!    either by residual bootstrap ([`bootstrap`]) or with the parametric
//!    Simes / ARI rules ([`bounds::simes_lambda`], [`bounds::ari_lambda`]);
//! 3. query [`bounds::vbar`] for any hypothesis subset, chosen before or after
//!    looking at the data.
//!
//! [`sim`] contains the Monte-Carlo harness used to check joint error rate
//! control and power on smoothed Gaussian random fields.

pub mod bootstrap;
pub mod bounds;
mod error;
pub mod model;
pub mod rng;
pub mod sim;
pub mod templates;

pub use bootstrap::{BootstrapSample, CalibrationResult};
pub use bounds::{BoundReport, CurvePoint, HypothesisSet};
pub use error::{Error, Result};
pub use model::{Dataset, ModelFit, Sidedness, StatField, StatKind};
pub use templates::{Template, TemplateFamily};

use serde::{Deserialize, Serialize};

/// How the threshold `lambda` of a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Bootstrap quantile over the full hypothesis set.
    SingleStep,
    /// Bootstrap quantile iterated over the estimated null set.
    StepDown,
    /// Linear template at `lambda = alpha`.
    Simes,
    /// Linear template at `lambda = alpha * m / h(alpha)`.
    Ari,
    /// Bootstrap quantile of the minimum p-value.
    FwerMinP,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SingleStep,
        Method::StepDown,
        Method::Simes,
        Method::Ari,
        Method::FwerMinP,
    ];

    pub fn needs_bootstrap(self) -> bool {
        matches!(self, Method::SingleStep | Method::StepDown | Method::FwerMinP)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::SingleStep => "single_step",
            Method::StepDown => "step_down",
            Method::Simes => "simes",
            Method::Ari => "ari",
            Method::FwerMinP => "fwer_minp",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
