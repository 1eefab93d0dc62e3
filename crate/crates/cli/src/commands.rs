use posthoc::bootstrap::{calibrate_single_step, calibrate_step_down, draw_bootstrap, fwer_family, fwer_threshold};
use posthoc::bounds::{ari_lambda, bh_rejection_set, simes_lambda, topk_curves, vbar};
use posthoc::model::{fit, p_values, t_statistics};
use posthoc::sim::{simulate, ScenarioConfig};
use posthoc::{Dataset, HypothesisSet, Method, Sidedness, StatField, TemplateFamily};

use crate::args::{FitArgs, SimArgs};
use crate::error::{CliError, CliResult};
use crate::io::{read_subsets, read_table, sim_csv_bytes, write_atomic};
use crate::report::{curve_csv, sim_rows, to_json, BhBound, FitReport, SetBound, SimSummary, StepDownInfo};

const STEP_DOWN_MAX_ITER: usize = 100;
const DEFAULT_BOOTSTRAPS: usize = 1000;

fn resolve_seed(seed: Option<u64>) -> u64 {
    let seed = seed.unwrap_or_else(rand::random);
    log::info!("seed = {seed}");
    seed
}

fn sidedness(one_sided: bool) -> Sidedness {
    if one_sided {
        Sidedness::OneSided
    } else {
        Sidedness::TwoSided
    }
}

pub fn load_dataset(args: &FitArgs) -> CliResult<Dataset> {
    let design = read_table(&args.design)?;
    let mut response = read_table(&args.response)?;
    if args.transpose {
        response = response.transposed();
    }
    let contrasts = read_table(&args.contrasts)?;

    let (n, p) = design.values.shape();
    if response.values.nrows() != n {
        return Err(CliError::Dimension {
            path: args.response.clone(),
            message: format!("{} subjects, design has {n}", response.values.nrows()),
        });
    }
    if contrasts.values.ncols() != p {
        return Err(CliError::Dimension {
            path: args.contrasts.clone(),
            message: format!("{} columns, design has {p}", contrasts.values.ncols()),
        });
    }
    let ds = Dataset::new(design.values, response.values, contrasts.values).map_err(|e| match e {
        posthoc::Error::DimensionMismatch(message) => CliError::Dimension { path: args.design.clone(), message },
        other => other.into(),
    })?;
    match response.column_labels {
        Some(labels) => Ok(ds.with_point_labels(labels)?),
        None => Ok(ds),
    }
}

/// Everything needed to evaluate bounds after calibration.
pub struct Calibrated {
    pub dataset: Dataset,
    pub p: StatField,
    pub family: TemplateFamily,
    pub method: Method,
    pub lambda_star: f64,
    pub lambda: f64,
    pub seed: u64,
    pub bootstraps: Option<usize>,
    pub step_down: Option<StepDownInfo>,
    pub sidedness: Sidedness,
}

pub fn calibrate(args: &FitArgs) -> CliResult<Calibrated> {
    let c = &args.common;
    let method: Method = args.method.into();
    let sidedness = sidedness(c.one_sided);
    let seed = resolve_seed(c.seed);
    if !(c.alpha > 0.0 && c.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha {} outside (0, 1)", c.alpha)));
    }

    let dataset = load_dataset(args)?;
    let model = fit(&dataset)?;
    let p = p_values(&t_statistics(&model, &dataset, None)?, sidedness)?;
    let m = dataset.n_hypotheses();
    let family = if method == Method::FwerMinP {
        fwer_family()
    } else {
        TemplateFamily::linear(m, c.k.unwrap_or(m)).map_err(|e| CliError::Usage(format!("--K: {e}")))?
    };

    let bootstraps = method.needs_bootstrap().then(|| args.bootstraps.unwrap_or(DEFAULT_BOOTSTRAPS));
    if !method.needs_bootstrap() && args.bootstraps.is_some() {
        log::warn!("--bootstraps is ignored by method {method}");
    }

    let mut step_down = None;
    let lambda_star = match method {
        Method::Simes => simes_lambda(c.alpha)?,
        Method::Ari => ari_lambda(p.values(), c.alpha)?,
        Method::SingleStep | Method::StepDown | Method::FwerMinP => {
            let sample = draw_bootstrap(&model, &dataset, bootstraps.unwrap_or(DEFAULT_BOOTSTRAPS), seed, sidedness)?;
            match method {
                Method::SingleStep => calibrate_single_step(&sample, &HypothesisSet::full(m), &family, c.alpha)?.lambda_star,
                Method::StepDown => {
                    let r = calibrate_step_down(&sample, &p, &family, c.alpha, STEP_DOWN_MAX_ITER)?;
                    if r.empty_fallback {
                        log::warn!("step-down emptied the working set; kept the last nonempty set");
                    }
                    step_down = Some(StepDownInfo {
                        iterations: r.iterations,
                        surviving: r.surviving_set.as_ref().map_or(m, HypothesisSet::len),
                        empty_fallback: r.empty_fallback,
                    });
                    r.lambda_star
                }
                _ => fwer_threshold(&sample, c.alpha)?.lambda_star,
            }
        }
    };
    let lambda = lambda_star.clamp(0.0, 1.0);
    Ok(Calibrated { dataset, p, family, method, lambda_star, lambda, seed, bootstraps, step_down, sidedness })
}

fn bound_of(cal: &Calibrated, set: &HypothesisSet, label: &str) -> CliResult<SetBound> {
    let b = vbar(&cal.p, set, &cal.family, cal.lambda, None)?;
    Ok(SetBound::new(label, &b))
}

fn user_sets(args: &FitArgs, cal: &Calibrated) -> CliResult<Vec<SetBound>> {
    let Some(path) = &args.subsets else {
        return Ok(Vec::new());
    };
    let ds = &cal.dataset;
    read_subsets(path, ds.n_contrasts(), ds.n_points(), ds.point_labels())?
        .iter()
        .map(|s| bound_of(cal, s, s.label().unwrap_or("")))
        .collect()
}

fn report(args: &FitArgs, cal: &Calibrated, sets: Vec<SetBound>) -> FitReport {
    let ds = &cal.dataset;
    FitReport {
        method: cal.method.as_str(),
        alpha: args.common.alpha,
        lambda_star: cal.lambda_star,
        lambda: cal.lambda,
        seed: cal.seed,
        bootstraps: cal.bootstraps,
        template: "linear",
        k: cal.family.size(),
        m: ds.n_hypotheses(),
        sidedness: match cal.sidedness {
            Sidedness::TwoSided => "two_sided",
            Sidedness::OneSided => "one_sided",
        },
        n_subjects: ds.n_subjects(),
        n_points: ds.n_points(),
        n_contrasts: ds.n_contrasts(),
        dof: cal.p.dof(),
        step_down: cal.step_down.clone(),
        all: None,
        bh: None,
        sets,
        curves: None,
    }
}

fn curve_bytes(args: &FitArgs, cal: &Calibrated) -> CliResult<Vec<u8>> {
    let m = cal.dataset.n_hypotheses();
    let k_max = args.curve_k_max.unwrap_or(m);
    if k_max == 0 || k_max > m {
        return Err(CliError::Usage(format!("--curve-k-max {k_max} outside 1..={m}")));
    }
    Ok(curve_csv(&topk_curves(cal.p.values(), &cal.family, cal.lambda, k_max, None)?))
}

pub fn cmd_fit(args: &FitArgs) -> CliResult<()> {
    let cal = calibrate(args)?;
    let m = cal.dataset.n_hypotheses();
    let q = args.common.bh_q;
    if !(q > 0.0 && q < 1.0) {
        return Err(CliError::Usage(format!("--bh-q {q} outside (0, 1)")));
    }
    let mut rep = report(args, &cal, user_sets(args, &cal)?);
    rep.all = Some(bound_of(&cal, &HypothesisSet::full(m), "all")?);
    let bh = bh_rejection_set(cal.p.values(), q)?;
    rep.bh = Some(BhBound { q, bound: bound_of(&cal, &bh, "bh")? });
    if let Some(path) = &args.curves {
        write_atomic(path, &curve_bytes(args, &cal)?)?;
        rep.curves = Some(path.display().to_string());
    }
    write_atomic(&args.output, &to_json(&rep))
}

pub fn cmd_bound(args: &FitArgs) -> CliResult<()> {
    if args.subsets.is_none() {
        return Err(CliError::Usage("bound needs --subsets".into()));
    }
    let cal = calibrate(args)?;
    let rep = report(args, &cal, user_sets(args, &cal)?);
    write_atomic(&args.output, &to_json(&rep))
}

pub fn cmd_curves(args: &FitArgs) -> CliResult<()> {
    let cal = calibrate(args)?;
    write_atomic(&args.output, &curve_bytes(args, &cal)?)
}

pub fn scenario_config(args: &SimArgs, seed: u64) -> ScenarioConfig {
    let mut methods: Vec<Method> = args.methods.iter().map(|&m| m.into()).collect();
    methods.dedup();
    ScenarioConfig {
        dims: args.dim,
        fwhm: args.fwhm,
        n_subjects: args.n_subjects,
        pi0: args.pi0,
        alpha: args.common.alpha,
        reps: args.reps,
        bootstraps: args.bootstraps,
        methods,
        seed,
        bh_q: args.common.bh_q,
        template_size: args.common.k,
        sidedness: sidedness(args.common.one_sided),
    }
}

pub fn cmd_simulate(args: &SimArgs) -> CliResult<()> {
    let seed = resolve_seed(args.common.seed);
    let config = scenario_config(args, seed);
    config.validate()?;
    let out = simulate(&config)?;
    if let Some(path) = &args.records {
        write_atomic(path, &sim_csv_bytes(&sim_rows(&out.records))?)?;
    }
    write_atomic(&args.output, &to_json(&SimSummary { seed, report: &out.report }))
}
