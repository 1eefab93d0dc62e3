use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use posthoc::Method;

#[derive(Debug, Parser)]
#[command(name = "posthoc", version, about = "Post hoc false discovery bounds for linear-model contrasts")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrate lambda and write a JSON report with bounds.
    Fit(FitArgs),
    /// Bounds for the sets of a subset file only.
    Bound(FitArgs),
    /// Top-k bound curves as CSV.
    Curves(FitArgs),
    /// Monte-Carlo study of joint error rate and power.
    Simulate(SimArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Single-step residual bootstrap.
    Bootstrap,
    /// Step-down residual bootstrap.
    BootstrapStepdown,
    Simes,
    Ari,
    /// Bootstrap min-p familywise threshold.
    Fwer,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bootstrap => Method::SingleStep,
            MethodArg::BootstrapStepdown => Method::StepDown,
            MethodArg::Simes => Method::Simes,
            MethodArg::Ari => Method::Ari,
            MethodArg::Fwer => Method::FwerMinP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TemplateArg {
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,

    /// RNG seed; drawn from the OS when omitted and echoed in the output.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum, default_value_t = TemplateArg::Linear)]
    pub template: TemplateArg,

    /// Template size K (defaults to the number of hypotheses).
    #[arg(long = "K", visible_alias = "k")]
    pub k: Option<usize>,

    /// One-sided p-values P(T >= t) instead of two-sided.
    #[arg(long)]
    pub one_sided: bool,

    /// Benjamini-Hochberg level of the reported BH set.
    #[arg(long, default_value_t = 0.05)]
    pub bh_q: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Design matrix CSV, subjects x covariates.
    #[arg(long)]
    pub design: PathBuf,

    /// Response CSV, subjects x points.
    #[arg(long)]
    pub response: PathBuf,

    /// Contrast CSV, one contrast per row.
    #[arg(long)]
    pub contrasts: PathBuf,

    /// Read the response as points x subjects.
    #[arg(long)]
    pub transpose: bool,

    /// Subset file: `label,id-or-point,...` per line.
    #[arg(long)]
    pub subsets: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = MethodArg::BootstrapStepdown)]
    pub method: MethodArg,

    /// Bootstrap replicates [default: 1000]; ignored by simes and ari.
    #[arg(long)]
    pub bootstraps: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,

    /// Largest k of the top-k curves (defaults to all hypotheses).
    #[arg(long)]
    pub curve_k_max: Option<usize>,

    /// Also write top-k curves to this CSV (`fit` only).
    #[arg(long)]
    pub curves: Option<PathBuf>,

    /// Output file.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Grid size, e.g. `25x25`.
    #[arg(long, default_value = "25x25", value_parser = parse_dims)]
    pub dim: (usize, usize),

    /// Smoothing FWHM in pixels.
    #[arg(long, default_value_t = 4.0)]
    pub fwhm: f64,

    #[arg(long, default_value_t = 0.8)]
    pub pi0: f64,

    /// Number of subjects.
    #[arg(long = "n", default_value_t = 100)]
    pub n_subjects: usize,

    #[arg(long, default_value_t = 500)]
    pub reps: usize,

    #[arg(long, default_value_t = 100)]
    pub bootstraps: usize,

    /// Methods to compare, comma separated.
    #[arg(
        long = "method",
        value_enum,
        value_delimiter = ',',
        default_value = "bootstrap,bootstrap-stepdown,simes,ari"
    )]
    pub methods: Vec<MethodArg>,

    #[command(flatten)]
    pub common: CommonArgs,

    /// Summary JSON path.
    #[arg(long, short)]
    pub output: PathBuf,

    /// Per-repetition CSV path.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}
