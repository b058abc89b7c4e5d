//! The sampled-data estimator for pi.
//!
//! Fractions are normalized using their extreme levels, the two half-level crossings
//! of the interpolated curve are located and refined by local line fits, and the area
//! between them under `f1 - 1/2` estimates `1/c`. The crossing spacing divided by that
//! area is the estimate of pi.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod fit;
mod screen;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, NormalizedCurve};
use crate::error::{Error, Result, Stage};
use crate::simulate::Dataset;

pub use fit::{fit_model, fit_model_curve, residual_sum, FitBudget};
pub use screen::{screen_dataset, ScreenVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Half-width of the averaging windows around the estimated extrema.
    pub delta: f64,
    pub root_start_1: f64,
    pub root_start_2: f64,
    /// Half-width of the line-fit window around each rough crossing.
    pub refine_window: f64,
    pub level: f64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            delta: 0.1,
            root_start_1: 1.5,
            root_start_2: 4.5,
            refine_window: 0.5,
            level: 0.5,
        }
    }
}

impl EstimateConfig {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.delta,
            self.root_start_1,
            self.root_start_2,
            self.refine_window,
            self.level,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidInput(
                "estimator settings must be finite".into(),
            ));
        }
        if self.delta <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        if self.refine_window <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "refine window must be > 0, got {}",
                self.refine_window
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidInput(format!(
                "level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if self.root_start_1 >= self.root_start_2 {
            return Err(Error::InvalidInput(format!(
                "root starts must be ordered, got {} and {}",
                self.root_start_1, self.root_start_2
            )));
        }
        Ok(())
    }
}

/// Every intermediate and final quantity of one pipeline run.
///
/// `alpha_hat`/`beta_hat` and `t1_hat`/`t2_hat` are the refined values; the `*_rough`
/// fields keep the first-pass estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub alpha_rough: f64,
    pub beta_rough: f64,
    pub t1_rough: f64,
    pub t2_rough: f64,
    pub t_minval: f64,
    pub t_maxval: f64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub t1_hat: f64,
    pub t2_hat: f64,
    pub integral_i: f64,
    pub pi_hat: f64,
    pub c_hat: f64,
}

impl EstimateResult {
    pub fn crossing_gap(&self) -> f64 {
        self.t2_hat - self.t1_hat
    }
}

/// Extreme-level estimates `(alpha, beta)` with `beta = min f` and `alpha = max f - min f`.
pub fn rough_alpha_beta(curve: &Curve) -> Result<(f64, f64)> {
    let (lo, hi) = curve
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let alpha = hi - lo;
    if alpha <= 0.0 {
        return Err(Error::Degenerate(format!(
            "all fractions equal {lo}; no oscillation to measure"
        )));
    }
    Ok((alpha, lo))
}

/// `f1 = (f - beta) / alpha`, unclamped.
pub fn normalize(curve: &Curve, alpha: f64, beta: f64) -> Result<NormalizedCurve> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "beta must be finite, got {beta}"
        )));
    }
    Ok(curve.map_values(|f| (f - beta) / alpha))
}

/// Piecewise-linear interpolant of the curve, defined on `[t_min, t_max]`.
pub fn interpolate(curve: &Curve, t: f64) -> Result<f64> {
    let times = curve.times();
    let values = curve.values();
    if !(t >= curve.t_min() && t <= curve.t_max()) {
        return Err(Error::OutOfRange {
            t,
            min: curve.t_min(),
            max: curve.t_max(),
        });
    }
    // first index with times[i] > t, so times[i - 1] <= t < times[i]
    let i = times.partition_point(|&x| x <= t);
    if i == times.len() {
        return Ok(values[i - 1]);
    }
    let (t0, t1) = (times[i - 1], times[i]);
    let (v0, v1) = (values[i - 1], values[i]);
    if t == t0 {
        return Ok(v0);
    }
    Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
}

const BISECTION_TOL: f64 = 1e-10;

/// Locates `t` with `f1(t) = level` near `start`.
///
/// The bracket grows outward from `start` one grid point at a time, alternating left
/// and right, until a newly added segment shows a sign change of `f1 - level`; that
/// segment is then bisected to within `1e-10` in `t`.
pub fn find_crossing(curve: &Curve, start: f64, level: f64) -> Result<f64> {
    if !start.is_finite() || !level.is_finite() {
        return Err(Error::InvalidInput(
            "crossing start and level must be finite".into(),
        ));
    }
    let start = start.clamp(curve.t_min(), curve.t_max());
    let g = |t: f64| interpolate(curve, t).map(|v| v - level);
    let times = curve.times();

    let g_start = g(start)?;
    if g_start == 0.0 {
        return Ok(start);
    }
    // left: last grid index strictly below start; right: first strictly above
    let mut left = times.partition_point(|&x| x < start).checked_sub(1);
    let mut right = Some(times.partition_point(|&x| x <= start)).filter(|&j| j < times.len());
    let (mut a, mut ga) = (start, g_start);
    let (mut b, mut gb) = (start, g_start);

    let (lo, hi) = loop {
        if left.is_none() && right.is_none() {
            return Err(Error::NoCrossing { start, level });
        }
        if let Some(i) = left {
            let (t, gt) = (times[i], g(times[i])?);
            if gt == 0.0 {
                return Ok(t);
            }
            if gt.signum() != ga.signum() {
                break (t, a);
            }
            a = t;
            ga = gt;
            left = i.checked_sub(1);
        }
        if let Some(j) = right {
            let (t, gt) = (times[j], g(times[j])?);
            if gt == 0.0 {
                return Ok(t);
            }
            if gt.signum() != gb.signum() {
                break (b, t);
            }
            b = t;
            gb = gt;
            right = Some(j + 1).filter(|&j| j < times.len());
        }
    };
    bisect(g, lo, hi)
}

fn bisect(g: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut g_lo = g(lo)?;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Level estimates measured on the normalized scale around the predicted extrema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedLevels {
    pub alpha: f64,
    pub beta: f64,
    pub t_minval: f64,
    pub t_maxval: f64,
}

fn window_mean(curve: &Curve, center: f64, half_width: f64) -> Result<f64> {
    let (sum, n) = curve
        .iter()
        .filter(|(t, _)| (t - center).abs() < half_width)
        .fold((0.0, 0usize), |(s, n), (_, v)| (s + v, n + 1));
    if n == 0 {
        return Err(Error::EmptyWindow { center, half_width });
    }
    Ok(sum / n as f64)
}

/// Averages the curve over `|t - t_maxval| < delta` and `|t - t_minval| < delta`, where
/// `t_maxval` is the crossing midpoint and `t_minval` lies half a period below it
/// (clamped into the data range).
pub fn refine_alpha_beta(curve: &Curve, t1: f64, t2: f64, delta: f64) -> Result<RefinedLevels> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "delta must be > 0, got {delta}"
        )));
    }
    let t_maxval = 0.5 * (t1 + t2);
    let t_minval = (0.5 * (3.0 * t1 - t2)).clamp(curve.t_min(), curve.t_max());
    let beta = window_mean(curve, t_minval, delta)?;
    let top = window_mean(curve, t_maxval, delta)?;
    Ok(RefinedLevels {
        alpha: top - beta,
        beta,
        t_minval,
        t_maxval,
    })
}

/// Least-squares line `gamma t + k` through samples with `|t - t_i| <= window`,
/// solved for `gamma t + k = level`.
pub fn refine_crossing_linear(curve: &Curve, t_i: f64, window: f64, level: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|(t, _)| (t - t_i).abs() <= window)
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate(format!(
            "{} sample(s) within {window} of t = {t_i}; a line fit needs 2",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), &(t, y)| {
        let dt = t - t_mean;
        (sxy + dt * (y - y_mean), sxx + dt * dt)
    });
    let gamma = sxy / sxx;
    if !(gamma.abs() >= 1e-12) {
        return Err(Error::Degenerate(format!(
            "fitted slope {gamma:e} near t = {t_i} is too flat to define a crossing"
        )));
    }
    let k = y_mean - gamma * t_mean;
    Ok((level - k) / gamma)
}

/// Exact integral of `interp(t) - level` over `[t1, t2]`: composite trapezoid over the
/// interior samples plus partial panels ending at the interpolated limit values.
pub fn trapezoid_integral(curve: &Curve, t1: f64, t2: f64, level: f64) -> Result<f64> {
    if !(t1 < t2) {
        return Err(Error::InvalidInput(format!(
            "integration limits must satisfy t1 < t2, got {t1} and {t2}"
        )));
    }
    let y1 = interpolate(curve, t1)? - level;
    let y2 = interpolate(curve, t2)? - level;

    let mut area = 0.0;
    let (mut t_prev, mut y_prev) = (t1, y1);
    for (t, v) in curve.iter().filter(|&(t, _)| t > t1 && t < t2) {
        let y = v - level;
        area += 0.5 * (y_prev + y) * (t - t_prev);
        t_prev = t;
        y_prev = y;
    }
    area += 0.5 * (y_prev + y2) * (t2 - t_prev);
    Ok(area)
}

pub fn estimate_pi(ds: &Dataset, cfg: &EstimateConfig) -> Result<EstimateResult> {
    estimate_pi_curve(&ds.fractions(), cfg)
}

/// Runs the full pipeline on raw fractions `f(t)`.
pub fn estimate_pi_curve(raw: &Curve, cfg: &EstimateConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let level = cfg.level;

    let (alpha_rough, beta_rough) = rough_alpha_beta(raw).map_err(|e| e.at(Stage::RoughLevels))?;
    let f1 = normalize(raw, alpha_rough, beta_rough).map_err(|e| e.at(Stage::Normalize))?;

    let t1_rough =
        find_crossing(&f1, cfg.root_start_1, level).map_err(|e| e.at(Stage::FirstCrossing))?;
    let t2_rough =
        find_crossing(&f1, cfg.root_start_2, level).map_err(|e| e.at(Stage::SecondCrossing))?;
    if !(t1_rough < t2_rough) {
        return Err(Error::Degenerate(format!(
            "crossings out of order: {t1_rough} then {t2_rough}"
        ))
        .at(Stage::SecondCrossing));
    }

    let levels = refine_alpha_beta(&f1, t1_rough, t2_rough, cfg.delta)
        .map_err(|e| e.at(Stage::RefineLevels))?;
    // compose the normalized-scale correction with the first-pass map back onto raw f
    let alpha_hat = alpha_rough * levels.alpha;
    let beta_hat = beta_rough + alpha_rough * levels.beta;
    let f1 = normalize(raw, alpha_hat, beta_hat).map_err(|e| e.at(Stage::Renormalize))?;

    let t1_hat = refine_crossing_linear(&f1, t1_rough, cfg.refine_window, level)
        .map_err(|e| e.at(Stage::RefineFirstCrossing))?;
    let t2_hat = refine_crossing_linear(&f1, t2_rough, cfg.refine_window, level)
        .map_err(|e| e.at(Stage::RefineSecondCrossing))?;

    let integral_i =
        trapezoid_integral(&f1, t1_hat, t2_hat, level).map_err(|e| e.at(Stage::Integrate))?;
    if !(integral_i > 0.0) {
        return Err(Error::Degenerate(format!("non-positive area {integral_i}")).at(Stage::Result));
    }

    Ok(EstimateResult {
        alpha_rough,
        beta_rough,
        t1_rough,
        t2_rough,
        t_minval: levels.t_minval,
        t_maxval: levels.t_maxval,
        alpha_hat,
        beta_hat,
        t1_hat,
        t2_hat,
        integral_i,
        pi_hat: (t2_hat - t1_hat) / integral_i,
        c_hat: 1.0 / integral_i,
    })
}
