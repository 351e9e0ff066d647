//! Experiment configuration, the seeded runner, and report serialization.

use crate::amplify::{
    amplify_monotone, amplify_nonnegative, beta_scaled_solve, sample_union, AmplifyConfig,
};
use crate::baseline::{brute_force_opt, sequential_greedy_metered};
use crate::block_greedy::{block_greedy, LambdaFloor, RunTrace};
use crate::constraint::MatroidSpec;
use crate::error::{Error, Result};
use crate::estimator::EstimatorConfig;
use crate::instance::InstanceSpec;
use crate::meter::{Engine, MeterSnapshot, PhaseCounts};
use crate::multilinear::{multilinear_estimate, multilinear_exact};
use crate::oracle::{FunctionSpec, SubmodularOracle};
use crate::reference::closed_form_multilinear;
use crate::rng::derive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Sequential,
    BlockGreedy,
    AmplifyMonotone,
    AmplifyNonnegative,
    BetaScaled,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Sequential => "sequential",
            Algorithm::BlockGreedy => "block_greedy",
            Algorithm::AmplifyMonotone => "amplify_monotone",
            Algorithm::AmplifyNonnegative => "amplify_nonnegative",
            Algorithm::BetaScaled => "beta_scaled",
        }
    }
}

fn default_reps() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub matroid: MatroidSpec,
    pub function: FunctionSpec,
    pub algorithm: Algorithm,
    pub eps: f64,
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    #[serde(default)]
    pub amplify: AmplifyConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::Config(format!("eps {} outside (0, 0.5)", self.eps)));
        }
        if self.reps < 1 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn instance(&self) -> InstanceSpec {
        InstanceSpec {
            matroid: self.matroid.clone(),
            function: self.function.clone(),
        }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| "inline".to_string())
    }
}

/// Whether to compute the brute-force optimum for small instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptMode {
    Auto,
    Off,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepRow {
    pub seed: u64,
    pub value: f64,
    pub rounds: u64,
    pub f_calls: u64,
    pub matroid_calls: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub instance: String,
    pub algorithm: Algorithm,
    pub eps: f64,
    pub rows: Vec<RepRow>,
    pub mean_value: f64,
    pub std_error: f64,
    pub mean_rounds: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub phases: BTreeMap<String, PhaseCounts>,
    /// Block-greedy trace of the first repetition, when applicable.
    pub trace_sample: Option<RunTrace>,
}

fn check_compat(cfg: &ExperimentConfig, f: &SubmodularOracle) -> Result<()> {
    match cfg.algorithm {
        Algorithm::AmplifyMonotone if !f.is_monotone() => Err(Error::Incompatible(
            "amplify_monotone requires a monotone function".into(),
        )),
        Algorithm::AmplifyNonnegative | Algorithm::BetaScaled if !f.is_nonnegative() => {
            Err(Error::Incompatible(format!(
                "{} requires a nonnegative function",
                cfg.algorithm.name()
            )))
        }
        _ => Ok(()),
    }
}

/// Value of a fractional point: exact for small grounds, estimated above.
fn fractional_value(
    spec: &FunctionSpec,
    f: &SubmodularOracle,
    x: &crate::multilinear::FractionalPoint,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<f64> {
    if let Some(v) = closed_form_multilinear(spec, x.coords()) {
        return Ok(v);
    }
    if f.n() <= 20 {
        return multilinear_exact(f, x);
    }
    Ok(multilinear_estimate(f, x, &cfg.amplify.budget, seed))
}

fn run_single(
    cfg: &ExperimentConfig,
    rep_seed: u64,
    workers: usize,
) -> Result<(f64, MeterSnapshot, Option<RunTrace>)> {
    let (constraint, f) = cfg.instance().build()?;
    check_compat(cfg, &f)?;
    let matroid = constraint.as_dyn();
    let engine = Engine::with_workers(workers);
    engine.attach_function_counter(f.calls());
    for c in matroid.counters() {
        engine.attach_matroid_counter(c);
    }

    let mut trace = None;
    let value = match cfg.algorithm {
        Algorithm::Sequential => {
            let set = sequential_greedy_metered(matroid, &f, &engine)?;
            f.eval(&set)
        }
        Algorithm::BlockGreedy => {
            let out = block_greedy(
                matroid,
                &f,
                cfg.eps,
                LambdaFloor::Auto,
                &cfg.estimator,
                rep_seed,
                &engine,
            )?;
            let v = f.eval(&out.selected);
            trace = Some(out.trace);
            v
        }
        Algorithm::AmplifyMonotone => {
            let frac = amplify_monotone(
                matroid,
                &f,
                cfg.eps,
                &cfg.amplify,
                &cfg.estimator,
                rep_seed,
                &engine,
            )?;
            fractional_value(&cfg.function, &f, &frac.point(), cfg, derive(rep_seed, 71))?
        }
        Algorithm::AmplifyNonnegative => {
            let blocks = amplify_nonnegative(
                matroid,
                &f,
                cfg.eps,
                &cfg.amplify,
                &cfg.estimator,
                rep_seed,
                &engine,
            )?;
            let alpha = cfg.amplify.ratio(cfg.eps, matroid.width());
            let union = sample_union(&blocks, alpha, blocks.len(), derive(rep_seed, 73));
            f.eval(&union)
        }
        Algorithm::BetaScaled => {
            let out = beta_scaled_solve(
                matroid,
                &f,
                matroid.width(),
                cfg.eps,
                &cfg.amplify,
                &cfg.estimator,
                rep_seed,
                &engine,
            )?;
            f.eval(&out.rounded)
        }
    };
    engine.absorb_offline();
    Ok((value, engine.snapshot(), trace))
}

/// Run `cfg.reps` seeded repetitions and aggregate.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize, opt: OptMode) -> Result<RunReport> {
    cfg.validate()?;
    // fail early on incompatible pairings, before spending repetitions
    let (_, probe_f) = cfg.instance().build()?;
    check_compat(cfg, &probe_f)?;

    let mut rows = Vec::with_capacity(cfg.reps);
    let mut phases: BTreeMap<String, PhaseCounts> = BTreeMap::new();
    let mut trace_sample = None;
    for r in 0..cfg.reps {
        let rep_seed = cfg.seed.wrapping_add(r as u64);
        let start = Instant::now();
        let (value, meter, trace) = run_single(cfg, rep_seed, workers)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        if r == 0 {
            trace_sample = trace;
        }
        for (name, counts) in &meter.phases {
            let agg = phases.entry(name.clone()).or_default();
            agg.rounds += counts.rounds;
            agg.f_calls += counts.f_calls;
            agg.matroid_calls += counts.matroid_calls;
        }
        rows.push(RepRow {
            seed: rep_seed,
            value,
            rounds: meter.rounds,
            f_calls: meter.f_calls,
            matroid_calls: meter.matroid_calls,
            wall_ms,
        });
    }

    let mean_value = rows.iter().map(|r| r.value).sum::<f64>() / rows.len() as f64;
    let var = rows
        .iter()
        .map(|r| (r.value - mean_value).powi(2))
        .sum::<f64>()
        / rows.len() as f64;
    let std_error = (var / rows.len() as f64).sqrt();
    let mean_rounds = rows.iter().map(|r| r.rounds as f64).sum::<f64>() / rows.len() as f64;

    let opt_value = match opt {
        OptMode::Auto if probe_f.n() <= 20 => {
            let (constraint, f) = cfg.instance().build()?;
            Some(brute_force_opt(constraint.as_dyn(), &f)?.opt_value)
        }
        _ => None,
    };
    let ratio = opt_value.and_then(|o| (o > 0.0).then(|| mean_value / o));

    Ok(RunReport {
        format_version: 1,
        instance: cfg.label(),
        algorithm: cfg.algorithm,
        eps: cfg.eps,
        rows,
        mean_value,
        std_error,
        mean_rounds,
        opt: opt_value,
        ratio,
        phases,
        trace_sample,
    })
}

pub const CSV_HEADER: &str =
    "instance,algorithm,eps,seed,value,rounds,f_calls,matroid_calls,opt,ratio";

/// Render per-repetition rows in the fixed column order.
pub fn csv_rows(report: &RunReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        let opt = report.opt.map(|o| format!("{o}")).unwrap_or_default();
        let ratio = report
            .opt
            .filter(|o| *o > 0.0)
            .map(|o| format!("{}", row.value / o))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            report.instance,
            report.algorithm.name(),
            report.eps,
            row.seed,
            row.value,
            row.rounds,
            row.f_calls,
            row.matroid_calls,
            opt,
            ratio
        ));
    }
    out
}

pub fn csv_report(report: &RunReport) -> String {
    format!("{CSV_HEADER}\n{}", csv_rows(report))
}

/// Run the experiment once per ε value; one combined CSV.
pub fn sweep_eps(
    cfg: &ExperimentConfig,
    values: &[f64],
    workers: usize,
    opt: OptMode,
) -> Result<(Vec<RunReport>, String)> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let mut reports = Vec::with_capacity(values.len());
    let mut csv = format!("{CSV_HEADER}\n");
    for &eps in values {
        let mut sub = cfg.clone();
        sub.eps = eps;
        let report = run_experiment(&sub, workers, opt)?;
        csv.push_str(&csv_rows(&report));
        reports.push(report);
    }
    Ok((reports, csv))
}
