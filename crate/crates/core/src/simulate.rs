//! Synthetic shot-count datasets drawn from a [`NoiseModel`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::model::NoiseModel;

pub const DEFAULT_SHOTS: u64 = 8192;

/// Evenly spaced measurement times `start, start + step, ...` up to the last point
/// not exceeding `stop + step / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    start: f64,
    stop: f64,
    step: f64,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "grid step must be > 0, got {step}"
            )));
        }
        if stop <= start {
            return Err(Error::InvalidInput(format!(
                "grid stop ({stop}) must exceed start ({start})"
            )));
        }
        Ok(TimeGrid { start, stop, step })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| snap(self.start + k as f64 * self.step))
            .collect()
    }
}

impl Default for TimeGrid {
    /// 0 to 6.3 in steps of 0.1 (64 points).
    fn default() -> Self {
        TimeGrid {
            start: 0.0,
            stop: 6.3,
            step: 0.1,
        }
    }
}

/// Rounds to 12 significant digits so `k * step` lands on the nearest short decimal
/// (63 * 0.1 is 6.300000000000001 otherwise).
fn snap(t: f64) -> f64 {
    format!("{t:.11e}").parse().unwrap_or(t)
}

pub fn make_grid(start: f64, stop: f64, step: f64) -> Result<TimeGrid> {
    TimeGrid::new(start, stop, step)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub t: f64,
    pub shots: u64,
    pub ones: u64,
}

impl ShotRecord {
    pub fn new(t: f64, shots: u64, ones: u64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidInput(format!(
                "record time must be finite, got {t}"
            )));
        }
        if shots == 0 {
            return Err(Error::InvalidInput(format!(
                "record at t = {t} has zero shots"
            )));
        }
        if ones > shots {
            return Err(Error::InvalidInput(format!(
                "record at t = {t} has ones ({ones}) > shots ({shots})"
            )));
        }
        Ok(ShotRecord { t, shots, ones })
    }

    pub fn fraction(&self) -> f64 {
        self.ones as f64 / self.shots as f64
    }
}

/// Shot counts for one qubit across the time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<ShotRecord>,
    label: String,
}

impl Dataset {
    pub fn new(records: Vec<ShotRecord>, label: impl Into<String>) -> Result<Self> {
        if records.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a dataset needs at least 2 records, got {}",
                records.len()
            )));
        }
        for r in &records {
            ShotRecord::new(r.t, r.shots, r.ones)?;
        }
        if let Some(w) = records.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidInput(format!(
                "record times must be strictly increasing ({} then {})",
                w[0].t, w[1].t
            )));
        }
        Ok(Dataset {
            records,
            label: label.into(),
        })
    }

    pub fn records(&self) -> &[ShotRecord] {
        &self.records
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The observed fractions `f(t) = ones / shots`.
    pub fn fractions(&self) -> Curve {
        Curve::from_pairs(self.records.iter().map(|r| (r.t, r.fraction())))
            .expect("dataset invariants guarantee a valid curve")
    }

    pub fn t_min(&self) -> f64 {
        self.records[0].t
    }

    pub fn t_max(&self) -> f64 {
        self.records[self.records.len() - 1].t
    }
}

/// Draws `ones ~ Binomial(shots, P(t))` independently at each grid point.
///
/// Record `i` uses ChaCha stream `i` of the generator keyed by `seed`, so a record's
/// draw depends only on `(seed, i)` and not on evaluation order.
pub fn sample_dataset(
    model: &NoiseModel,
    grid: &TimeGrid,
    shots: u64,
    seed: u64,
) -> Result<Dataset> {
    model.validate()?;
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be >= 1".into()));
    }
    let records = grid
        .points()
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let p = model.prob(t).clamp(0.0, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let binomial = Binomial::new(shots, p).expect("p clamped into [0, 1]");
            ShotRecord {
                t,
                shots,
                ones: binomial.sample(&mut rng),
            }
        })
        .collect();
    Dataset::new(records, format!("seed-{seed}"))
}

/// Adds `offset * shots` to the |1> count of every record at or after `t_jump`,
/// clamping into `[0, shots]`. Models a calibration jump between jobs.
pub fn inject_step(ds: &Dataset, t_jump: f64, offset: f64) -> Result<Dataset> {
    if !(t_jump.is_finite() && offset.is_finite()) {
        return Err(Error::InvalidInput(
            "step position and offset must be finite".into(),
        ));
    }
    if t_jump < ds.t_min() || t_jump > ds.t_max() {
        return Err(Error::OutOfRange {
            t: t_jump,
            min: ds.t_min(),
            max: ds.t_max(),
        });
    }
    let records = ds
        .records
        .iter()
        .map(|r| {
            if r.t < t_jump {
                return *r;
            }
            let shifted = (r.ones as f64 + offset * r.shots as f64).round();
            ShotRecord {
                ones: shifted.clamp(0.0, r.shots as f64) as u64,
                ..*r
            }
        })
        .collect();
    Ok(Dataset {
        records,
        label: ds.label.clone(),
    })
}

/// SplitMix64 finalizer over a sequence of words; used to derive per-run seeds.
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}
