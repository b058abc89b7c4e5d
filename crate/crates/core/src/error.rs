use std::fmt;

use thiserror::Error;

use crate::model::NoiseModel;

/// Stage of the estimation pipeline, used to tag propagated errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    RoughLevels,
    Normalize,
    FirstCrossing,
    SecondCrossing,
    RefineLevels,
    Renormalize,
    RefineFirstCrossing,
    RefineSecondCrossing,
    Integrate,
    Result,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::RoughLevels => "step 1 (rough alpha/beta)",
            Stage::Normalize => "step 2 (normalize)",
            Stage::FirstCrossing => "step 4 (first crossing)",
            Stage::SecondCrossing => "step 4 (second crossing)",
            Stage::RefineLevels => "step 5 (refined alpha/beta)",
            Stage::Renormalize => "step 6 (re-normalize)",
            Stage::RefineFirstCrossing => "step 7 (refine first crossing)",
            Stage::RefineSecondCrossing => "step 7 (refine second crossing)",
            Stage::Integrate => "step 8 (trapezoid integral)",
            Stage::Result => "step 9 (pi estimate)",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid noise model: {0}")]
    InvalidModel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("t = {t} is outside the data range [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },

    #[error("no crossing of level {level} found from start t = {start}")]
    NoCrossing { start: f64, level: f64 },

    #[error("no samples within {half_width} of t = {center}")]
    EmptyWindow { center: f64, half_width: f64 },

    #[error("{0}")]
    Fit(String),

    #[error("fit did not converge after {evaluations} evaluations (best residual {residual:e})")]
    NotConverged {
        best: NoiseModel,
        residual: f64,
        evaluations: usize,
    },

    #[error("{stage}: {source}")]
    Pipeline {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error("dataset '{label}': {source}")]
    Dataset {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("dataset '{label}' rejected by screening: {reason}")]
    Screened { label: String, reason: String },

    #[error("monte carlo: {0}")]
    MonteCarlo(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Pipeline {
            stage,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_dataset(self, label: &str) -> Error {
        Error::Dataset {
            label: label.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
