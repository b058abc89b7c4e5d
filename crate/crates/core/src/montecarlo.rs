//! Repeated synthetic experiments for measuring the estimator's random error.

use std::f64::consts::FRAC_PI_2;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::estimate::{
    estimate_pi, estimate_pi_curve, screen_dataset, EstimateConfig, EstimateResult, ScreenVerdict,
};
use crate::model::NoiseModel;
use crate::simulate::{derive_seed, sample_dataset, Dataset, TimeGrid, DEFAULT_SHOTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub runs_per_model: usize,
    pub shots: u64,
    pub grid: TimeGrid,
    pub base_seed: u64,
    pub estimate: EstimateConfig,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            runs_per_model: 50,
            shots: DEFAULT_SHOTS,
            grid: TimeGrid::default(),
            base_seed: 0,
            estimate: EstimateConfig::default(),
        }
    }
}

/// Whether the harness fans runs out over the rayon pool.
///
/// Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
}

impl Moments {
    /// Mean and sample (n - 1) standard deviation. Values are summed in sorted order
    /// so the result does not depend on input order.
    pub fn of(values: &[f64]) -> Option<Moments> {
        if values.len() < 2 {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let mut dev: Vec<f64> = sorted.iter().map(|v| (v - mean).powi(2)).collect();
        dev.sort_by(f64::total_cmp);
        let var = dev.iter().sum::<f64>() / (n - 1.0);
        Some(Moments {
            mean,
            std: var.sqrt(),
        })
    }
}

/// Pooled statistics over every successful run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n_runs: usize,
    pub failures: usize,
    pub mean_pi: f64,
    pub std_pi: f64,
    pub mean_dt: f64,
    pub std_dt: f64,
    pub mean_i: f64,
    pub std_i: f64,
    /// Per-run results in (model index, run index) order; `None` marks a failed run.
    #[serde(skip)]
    pub runs: Vec<Option<EstimateResult>>,
}

impl McSummary {
    pub fn successes(&self) -> impl Iterator<Item = &EstimateResult> {
        self.runs.iter().flatten()
    }
}

pub fn run_mc(models: &[NoiseModel], cfg: &McConfig) -> Result<McSummary> {
    run_mc_with(models, cfg, Execution::default())
}

pub fn run_mc_with(models: &[NoiseModel], cfg: &McConfig, exec: Execution) -> Result<McSummary> {
    if cfg.runs_per_model < 2 {
        return Err(Error::MonteCarlo(format!(
            "runs_per_model must be >= 2 for a standard deviation, got {}",
            cfg.runs_per_model
        )));
    }
    if cfg.shots == 0 {
        return Err(Error::MonteCarlo("shots must be >= 1".into()));
    }
    if models.is_empty() {
        return Err(Error::MonteCarlo("no models given".into()));
    }
    for m in models {
        m.validate()?;
    }
    cfg.estimate.validate()?;

    let jobs: Vec<(NoiseModel, u64)> = model_keys(models)
        .into_iter()
        .zip(models)
        .flat_map(|(key, &m)| {
            (0..cfg.runs_per_model as u64)
                .map(move |run| (m, derive_seed(cfg.base_seed, &[key, run])))
        })
        .collect();

    let one = |&(model, seed): &(NoiseModel, u64)| -> Option<EstimateResult> {
        let ds = sample_dataset(&model, &cfg.grid, cfg.shots, seed).ok()?;
        estimate_pi(&ds, &cfg.estimate).ok()
    };
    let runs: Vec<Option<EstimateResult>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => jobs.par_iter().map(one).collect(),
        _ => jobs.iter().map(one).collect(),
    };

    summarize(runs)
}

/// Seed key per model: its parameter bits plus its occurrence count among identical
/// earlier models. Keys depend on the models, not their positions, so permuting the
/// list permutes the runs without changing them.
fn model_keys(models: &[NoiseModel]) -> Vec<u64> {
    let bits = |m: &NoiseModel| [m.alpha(), m.beta(), m.phi0(), m.c()].map(|v| (v + 0.0).to_bits());
    models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let occurrence = models[..i].iter().filter(|o| bits(o) == bits(m)).count() as u64;
            let b = bits(m);
            derive_seed(occurrence, &b)
        })
        .collect()
}

fn summarize(runs: Vec<Option<EstimateResult>>) -> Result<McSummary> {
    let ok: Vec<&EstimateResult> = runs.iter().flatten().collect();
    let failures = runs.len() - ok.len();
    let collect = |f: fn(&EstimateResult) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<_>>();
    let stats = |f| {
        Moments::of(&collect(f)).ok_or_else(|| {
            Error::MonteCarlo(format!(
                "only {} of {} runs succeeded; need at least 2",
                ok.len(),
                runs.len()
            ))
        })
    };
    let pi = stats(|r| r.pi_hat)?;
    let dt = stats(|r| r.crossing_gap())?;
    let area = stats(|r| r.integral_i)?;
    Ok(McSummary {
        n_runs: runs.len(),
        failures,
        mean_pi: pi.mean,
        std_pi: pi.std,
        mean_dt: dt.mean,
        std_dt: dt.std,
        mean_i: area.mean,
        std_i: area.std,
        runs,
    })
}

/// Builds a model from a pipeline result: refined levels, `c = 1/I`, and the phase
/// that puts the first half-crossing at `t1`.
pub fn model_from_result(r: &EstimateResult) -> Result<NoiseModel> {
    let c = 1.0 / r.integral_i;
    NoiseModel::new(r.alpha_hat, r.beta_hat, FRAC_PI_2 - c * r.t1_hat, c)
}

pub fn model_from_curve(curve: &Curve, cfg: &EstimateConfig) -> Result<NoiseModel> {
    model_from_result(&estimate_pi_curve(curve, cfg)?)
}

/// One model per dataset, for regenerating synthetic data that resembles each qubit.
pub fn models_from_datasets(datasets: &[Dataset], cfg: &EstimateConfig) -> Result<Vec<NoiseModel>> {
    datasets
        .iter()
        .map(|ds| {
            if let ScreenVerdict::Reject { reason, .. } = screen_dataset(ds) {
                return Err(Error::Screened {
                    label: ds.label().to_string(),
                    reason,
                });
            }
            estimate_pi(ds, cfg)
                .and_then(|r| model_from_result(&r))
                .map_err(|e| e.in_dataset(ds.label()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub per_qubit: Vec<(String, EstimateResult)>,
    pub mean_pi: f64,
    pub sigma: f64,
    /// Two standard deviations.
    pub error_bar: f64,
    pub sigma_source: String,
}

/// Averages the per-qubit estimates; the error bar is `2 sigma` where `sigma` is the
/// Monte Carlo standard deviation of a single-run estimate.
pub fn aggregate(results: &[(String, EstimateResult)], sigma: f64) -> Result<AggregateReport> {
    if results.is_empty() {
        return Err(Error::InvalidInput("no results to aggregate".into()));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    let mean_pi = results.iter().map(|(_, r)| r.pi_hat).sum::<f64>() / results.len() as f64;
    Ok(AggregateReport {
        per_qubit: results.to_vec(),
        mean_pi,
        sigma,
        error_bar: 2.0 * sigma,
        sigma_source: "Monte Carlo standard deviation of a single-run pi estimate \
                       (not divided by the square root of the number of qubits)"
            .into(),
    })
}
