use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::simulate::Dataset;

use super::fit::fit_model;

/// Outcome of the anomaly screen applied before a dataset enters the estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScreenVerdict {
    Accept,
    Reject { reason: String, location: f64 },
}

impl ScreenVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, ScreenVerdict::Accept)
    }
}

/// Rejects datasets containing a jump between neighbouring fractions that neither the
/// model curve nor shot noise can explain.
///
/// For neighbours `dt` apart the curve changes by at most `c dt / 2`; five binomial
/// standard deviations `sqrt(0.25 / shots)` are allowed on top. `c` comes from a
/// provisional four-parameter fit. The reported location is the later sample of the
/// worst offending pair.
pub fn screen_dataset(ds: &Dataset) -> ScreenVerdict {
    let c = match fit_model(ds) {
        Ok(m) => m.c(),
        Err(Error::NotConverged { best, .. }) => best.c(),
        Err(e) => {
            return ScreenVerdict::Reject {
                reason: format!("no usable oscillation: {e}"),
                location: ds.t_min(),
            }
        }
    };

    let worst = ds
        .records()
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let jump = (b.fraction() - a.fraction()).abs();
            let shots = a.shots.min(b.shots) as f64;
            let limit = c * (b.t - a.t) / 2.0 + 5.0 * (0.25 / shots).sqrt();
            (jump > limit).then_some((b.t, jump, limit))
        })
        .max_by(|x, y| (x.1 - x.2).total_cmp(&(y.1 - y.2)));

    match worst {
        None => ScreenVerdict::Accept,
        Some((t, jump, limit)) => ScreenVerdict::Reject {
            reason: format!("fraction jumps by {jump:.4} (limit {limit:.4}) at t = {t}"),
            location: t,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NoiseModel;
    use crate::simulate::{inject_step, sample_dataset, ShotRecord, TimeGrid};

    fn clean(seed: u64) -> Dataset {
        sample_dataset(&NoiseModel::ideal(), &TimeGrid::default(), 8192, seed).unwrap()
    }

    #[test]
    fn clean_data_passes() {
        assert_eq!(screen_dataset(&clean(1)), ScreenVerdict::Accept);
    }

    #[test]
    fn large_step_is_located() {
        // 0.15 far exceeds 0.1/2 + 5 * sqrt(0.25/8192) = 0.0776
        let ds = inject_step(&clean(1), 4.0, 0.15).unwrap();
        match screen_dataset(&ds) {
            ScreenVerdict::Reject { location, .. } => assert!((location - 4.0).abs() <= 0.2),
            v => panic!("expected rejection, got {v:?}"),
        }
    }

    #[test]
    fn small_step_passes() {
        let ds = inject_step(&clean(1), 4.0, 0.005).unwrap();
        assert!(screen_dataset(&ds).is_accept());
    }

    #[test]
    fn flat_data_is_rejected() {
        let records = (0..10)
            .map(|i| ShotRecord::new(i as f64 * 0.1, 100, 50).unwrap())
            .collect();
        let ds = Dataset::new(records, "flat").unwrap();
        assert!(!screen_dataset(&ds).is_accept());
    }
}
