//! Estimating pi from single-qubit Rabi oscillations.
//!
//! The rotation angle of a qubit is `c t` for a controllable time `t` and an unknown
//! rate `c`. Two successive half-probability crossings are `pi / c` apart and the area
//! under the normalized curve between them is `1 / c`, so their ratio is pi. This crate
//! simulates noisy shot counts, runs the sampled-data estimator, and measures its
//! random error by repeated synthetic experiments.
//!
//! Modules:
//! - [`model`]: closed-form probabilities and analytic crossings.
//! - [`simulate`]: seeded binomial shot-count datasets and anomaly injection.
//! - [`estimate`]: the estimator, the four-parameter fit and dataset screening.
//! - [`montecarlo`]: repeated-run error characterization and multi-qubit averaging.
//! - [`io`] and [`cli`]: CSV, SVG, reports and the `rabi-pi` command.
//!
//! With the default `parallel` feature the Monte Carlo harness runs on rayon; without
//! it every run is sequential and results are identical.

pub mod cli;
pub mod curve;
pub mod error;
pub mod estimate;
pub mod io;
pub mod model;
pub mod montecarlo;
pub mod simulate;

pub use curve::{Curve, NormalizedCurve};
pub use error::{Error, Result, Stage};
pub use estimate::{estimate_pi, estimate_pi_curve, EstimateConfig, EstimateResult};
pub use model::NoiseModel;
pub use montecarlo::{run_mc, McConfig, McSummary};
pub use simulate::{sample_dataset, Dataset, ShotRecord, TimeGrid};
