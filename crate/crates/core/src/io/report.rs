use std::fmt;

use crate::error::{Error, Result};
use crate::estimate::{estimate_pi, screen_dataset, EstimateConfig, EstimateResult, ScreenVerdict};
use crate::montecarlo::{
    aggregate, model_from_result, run_mc, AggregateReport, McConfig, McSummary,
};
use crate::simulate::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct InputSummary {
    pub label: String,
    pub points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub total_shots: u64,
}

/// Full analysis of a set of qubit datasets: screening, per-qubit estimates, Monte
/// Carlo error characterization, and the averaged result.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    pub inputs: Vec<InputSummary>,
    pub verdicts: Vec<(String, ScreenVerdict)>,
    pub results: Vec<(String, EstimateResult)>,
    pub failures: Vec<(String, String)>,
    pub mc: McSummary,
    pub mc_config: McConfig,
    pub aggregate: AggregateReport,
}

/// Screens every dataset, estimates pi on the accepted ones, regenerates synthetic data
/// from each accepted qubit's fitted model to measure the spread, and averages.
pub fn build_report(
    datasets: &[Dataset],
    cfg: &EstimateConfig,
    mc_cfg: &McConfig,
) -> Result<ReportDocument> {
    let inputs = datasets
        .iter()
        .map(|ds| InputSummary {
            label: ds.label().to_string(),
            points: ds.len(),
            t_min: ds.t_min(),
            t_max: ds.t_max(),
            total_shots: ds.records().iter().map(|r| r.shots).sum(),
        })
        .collect();

    let mut verdicts = Vec::new();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for ds in datasets {
        let verdict = screen_dataset(ds);
        if verdict.is_accept() {
            match estimate_pi(ds, cfg) {
                Ok(r) => results.push((ds.label().to_string(), r)),
                Err(e) => failures.push((ds.label().to_string(), e.to_string())),
            }
        }
        verdicts.push((ds.label().to_string(), verdict));
    }
    if results.is_empty() {
        return Err(Error::InvalidInput(
            "no dataset passed screening and estimation".into(),
        ));
    }

    let models = results
        .iter()
        .map(|(label, r)| model_from_result(r).map_err(|e| e.in_dataset(label)))
        .collect::<Result<Vec<_>>>()?;
    let mc_config = McConfig {
        estimate: *cfg,
        ..*mc_cfg
    };
    let mc = run_mc(&models, &mc_config)?;
    let aggregate = aggregate(&results, mc.std_pi)?;

    Ok(ReportDocument {
        inputs,
        verdicts,
        results,
        failures,
        mc,
        mc_config,
        aggregate,
    })
}

pub(crate) fn write_result(f: &mut impl fmt::Write, r: &EstimateResult) -> fmt::Result {
    writeln!(
        f,
        "  alpha_hat   {:.5}  (rough {:.5})",
        r.alpha_hat, r.alpha_rough
    )?;
    writeln!(
        f,
        "  beta_hat    {:.5}  (rough {:.5})",
        r.beta_hat, r.beta_rough
    )?;
    writeln!(
        f,
        "  t1_hat      {:.5}  (rough {:.5})",
        r.t1_hat, r.t1_rough
    )?;
    writeln!(
        f,
        "  t2_hat      {:.5}  (rough {:.5})",
        r.t2_hat, r.t2_rough
    )?;
    writeln!(f, "  t_minval    {:.5}", r.t_minval)?;
    writeln!(f, "  t_maxval    {:.5}", r.t_maxval)?;
    writeln!(f, "  integral_I  {:.5}", r.integral_i)?;
    writeln!(f, "  c_hat       {:.5}", r.c_hat)?;
    writeln!(f, "  pi_hat      {:.4}", r.pi_hat)
}

impl fmt::Display for ReportDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== inputs")?;
        for i in &self.inputs {
            writeln!(
                f,
                "  {}: {} points, t in [{:.3}, {:.3}], {} shots",
                i.label, i.points, i.t_min, i.t_max, i.total_shots
            )?;
        }

        writeln!(f, "\n== screening")?;
        for (label, v) in &self.verdicts {
            match v {
                ScreenVerdict::Accept => writeln!(f, "  {label}: accept")?,
                ScreenVerdict::Reject { reason, location } => {
                    writeln!(f, "  {label}: REJECT near t = {location:.3} ({reason})")?
                }
            }
        }
        for (label, e) in &self.failures {
            writeln!(f, "  {label}: estimate failed ({e})")?;
        }

        writeln!(f, "\n== estimates")?;
        for (label, r) in &self.results {
            writeln!(f, "{label}")?;
            write_result(f, r)?;
        }

        let m = &self.mc;
        let c = &self.mc_config;
        writeln!(f, "\n== monte carlo")?;
        writeln!(
            f,
            "  {} runs per model x {} models, {} shots, seed {}",
            c.runs_per_model,
            self.results.len(),
            c.shots,
            c.base_seed
        )?;
        writeln!(f, "  runs        {} ({} failed)", m.n_runs, m.failures)?;
        writeln!(f, "  mean pi     {:.4}", m.mean_pi)?;
        writeln!(f, "  std pi      {:.4}", m.std_pi)?;
        writeln!(f, "  std t2-t1   {:.4}", m.std_dt)?;
        writeln!(f, "  std I       {:.4}", m.std_i)?;

        let a = &self.aggregate;
        writeln!(f, "\n== result")?;
        writeln!(
            f,
            "  pi = {:.4} +/- {:.4}  (2 sigma, sigma = {:.4})",
            a.mean_pi, a.error_bar, a.sigma
        )?;
        writeln!(f, "  sigma: {}", a.sigma_source)
    }
}
