//! Command-line front end. `run` is the whole program minus process exit, so tests can
//! drive it with in-memory output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::estimate::{estimate_pi, fit_model, screen_dataset, EstimateConfig, ScreenVerdict};
use crate::io::report::write_result;
use crate::io::{build_report, read_dataset, render_svg, write_csv};
use crate::model::NoiseModel;
use crate::montecarlo::{models_from_datasets, run_mc, McConfig};
use crate::simulate::{inject_step, sample_dataset, TimeGrid};

#[derive(Debug, Parser)]
#[command(
    name = "rabi-pi",
    version,
    about = "Estimate pi from Rabi oscillation shot counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a synthetic dataset from the noise model and write it as CSV
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value = "synthetic")]
        label: String,
        /// Add a level shift to every fraction at or after this time
        #[arg(long, requires = "step_offset")]
        step_at: Option<f64>,
        #[arg(long, requires = "step_at", allow_hyphen_values = true)]
        step_offset: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pi estimator on one or more datasets
    Estimate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        estimate: EstimateArgs,
        /// Print results as JSON (full precision)
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares fit of all four model parameters
    Fit {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check datasets for jumps the model cannot explain
    Screen {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the estimator's spread over repeated synthetic experiments
    Mc {
        /// Derive models from these datasets instead of the model flags
        #[arg(long = "from", num_args = 1..)]
        from: Vec<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        estimate: EstimateArgs,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a dataset, its fitted curve and estimated crossings as SVG
    Plot {
        file: PathBuf,
        #[command(flatten)]
        estimate: EstimateArgs,
        #[arg(long)]
        no_fit: bool,
        #[arg(long)]
        no_crossings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Screen, estimate, characterize errors and average across datasets
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        estimate: EstimateArgs,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi0: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.alpha, self.beta, self.phi0, self.c)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    grid_start: f64,
    #[arg(long, default_value_t = 6.3, allow_hyphen_values = true)]
    grid_stop: f64,
    #[arg(long, default_value_t = 0.1)]
    grid_step: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.grid_start, self.grid_stop, self.grid_step)
    }
}

#[derive(Debug, Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    root_start1: f64,
    #[arg(long, default_value_t = 4.5, allow_hyphen_values = true)]
    root_start2: f64,
    #[arg(long, default_value_t = 0.5)]
    window: f64,
}

impl EstimateArgs {
    fn config(&self) -> Result<EstimateConfig> {
        let cfg = EstimateConfig {
            delta: self.delta,
            root_start_1: self.root_start1,
            root_start_2: self.root_start2,
            refine_window: self.window,
            ..EstimateConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (including the program name) and executes the subcommand.
/// Returns the process exit code: 0 success, 1 runtime or data error, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidInput(format!("cannot encode JSON: {e}")))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate {
            model,
            grid,
            sampling,
            label,
            step_at,
            step_offset,
            out: path,
        } => {
            let mut ds = sample_dataset(
                &model.model()?,
                &grid.grid()?,
                sampling.shots,
                sampling.seed,
            )?
            .with_label(label);
            if let (Some(t), Some(offset)) = (step_at, step_offset) {
                ds = inject_step(&ds, t, offset)?;
            }
            emit(&write_csv(&ds), path.as_deref(), out)
        }

        Command::Estimate {
            files,
            estimate,
            json,
            out: path,
        } => {
            let cfg = estimate.config()?;
            let mut results = Vec::new();
            for file in &files {
                let ds = read_dataset(file)?;
                let r = estimate_pi(&ds, &cfg).map_err(|e| e.in_dataset(ds.label()))?;
                results.push((ds.label().to_string(), r));
            }
            let text = if json {
                to_json(&results)?
            } else {
                let mut s = String::new();
                for (label, r) in &results {
                    s.push_str(label);
                    s.push('\n');
                    let _ = write_result(&mut s, r);
                }
                s
            };
            emit(&text, path.as_deref(), out)
        }

        Command::Fit {
            files,
            json,
            out: path,
        } => {
            let mut fits = Vec::new();
            for file in &files {
                let ds = read_dataset(file)?;
                let m = fit_model(&ds).map_err(|e| e.in_dataset(ds.label()))?;
                fits.push((ds.label().to_string(), m));
            }
            let text = if json {
                to_json(&fits)?
            } else {
                fits.iter()
                    .map(|(label, m)| {
                        format!(
                            "{label}: alpha {:.5}  beta {:.5}  phi0 {:.5}  c {:.5}\n",
                            m.alpha(),
                            m.beta(),
                            m.phi0(),
                            m.c()
                        )
                    })
                    .collect()
            };
            emit(&text, path.as_deref(), out)
        }

        Command::Screen { files, out: path } => {
            let mut text = String::new();
            for file in &files {
                let ds = read_dataset(file)?;
                let line = match screen_dataset(&ds) {
                    ScreenVerdict::Accept => format!("{}: accept\n", ds.label()),
                    ScreenVerdict::Reject { reason, location } => {
                        format!("{}: reject near t = {location:.3} ({reason})\n", ds.label())
                    }
                };
                text.push_str(&line);
            }
            emit(&text, path.as_deref(), out)
        }

        Command::Mc {
            from,
            model,
            grid,
            sampling,
            estimate,
            runs,
            json,
            out: path,
        } => {
            let est = estimate.config()?;
            let models = if from.is_empty() {
                vec![model.model()?]
            } else {
                let datasets = from
                    .iter()
                    .map(|f| read_dataset(f))
                    .collect::<Result<Vec<_>>>()?;
                models_from_datasets(&datasets, &est)?
            };
            let cfg = McConfig {
                runs_per_model: runs,
                shots: sampling.shots,
                grid: grid.grid()?,
                base_seed: sampling.seed,
                estimate: est,
            };
            let s = run_mc(&models, &cfg)?;
            let text = if json {
                to_json(&s)?
            } else {
                format!(
                    "models      {}\nruns        {} ({} failed)\nseed        {}\nmean pi     {:.4}\nstd pi      {:.4}\nmean t2-t1  {:.4}\nstd t2-t1   {:.4}\nmean I      {:.4}\nstd I       {:.4}\n",
                    models.len(),
                    s.n_runs,
                    s.failures,
                    cfg.base_seed,
                    s.mean_pi,
                    s.std_pi,
                    s.mean_dt,
                    s.std_dt,
                    s.mean_i,
                    s.std_i
                )
            };
            emit(&text, path.as_deref(), out)
        }

        Command::Plot {
            file,
            estimate,
            no_fit,
            no_crossings,
            out: path,
        } => {
            let ds = read_dataset(&file)?;
            let model = if no_fit {
                None
            } else {
                match fit_model(&ds) {
                    Ok(m) => Some(m),
                    Err(Error::NotConverged { best, .. }) => Some(best),
                    Err(e) => return Err(e.in_dataset(ds.label())),
                }
            };
            let result = if no_crossings {
                None
            } else {
                Some(estimate_pi(&ds, &estimate.config()?).map_err(|e| e.in_dataset(ds.label()))?)
            };
            emit(
                &render_svg(&ds, model.as_ref(), result.as_ref()),
                path.as_deref(),
                out,
            )
        }

        Command::Report {
            files,
            grid,
            sampling,
            estimate,
            runs,
            out: path,
        } => {
            let datasets = files
                .iter()
                .map(|f| read_dataset(f))
                .collect::<Result<Vec<_>>>()?;
            let est = estimate.config()?;
            let mc = McConfig {
                runs_per_model: runs,
                shots: sampling.shots,
                grid: grid.grid()?,
                base_seed: sampling.seed,
                estimate: est,
            };
            let doc = build_report(&datasets, &est, &mc)?;
            emit(&doc.to_string(), path.as_deref(), out)
        }
    }
}
