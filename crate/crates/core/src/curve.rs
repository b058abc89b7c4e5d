use crate::error::{Error, Result};
use crate::model::NoiseModel;
use crate::simulate::TimeGrid;

/// A sampled series `(t, y)` with strictly increasing, finite times and finite values.
///
/// Used both for raw fractions `f(t)` and for the normalized curve `f1(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    times: Vec<f64>,
    values: Vec<f64>,
}

/// Fractions rescaled so that the estimated oscillation spans `[0, 1]`.
pub type NormalizedCurve = Curve;

impl Curve {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidInput(
                "a curve needs at least 2 samples".into(),
            ));
        }
        if let Some(i) = times
            .iter()
            .chain(values.iter())
            .position(|v| !v.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at position {i}"
            )));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "times must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Curve { times, values })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (times, values) = pairs.into_iter().unzip();
        Curve::new(times, values)
    }

    /// Exact model probabilities on a grid: the infinite-shot limit of a dataset.
    pub fn from_model(model: &NoiseModel, grid: &TimeGrid) -> Self {
        let times = grid.points();
        let values = times.iter().map(|&t| model.prob(t)).collect();
        Curve { times, values }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_min(&self) -> f64 {
        self.times[0]
    }

    pub fn t_max(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> Curve {
        Curve {
            times: self.times.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}
