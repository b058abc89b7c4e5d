//! Closed-form Rabi probabilities and the analytic half-crossing oracles.
//!
//! The ideal curve is `p(phi) = (1 - cos phi) / 2`. A real device is described by
//! the affine distortion `P(t) = alpha * (1 - cos(c t + phi0)) / 2 + beta`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless rotation angle on the Bloch sphere, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::InvalidInput(format!(
                "angle must be finite, got {radians}"
            )));
        }
        Ok(Angle(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Probability of measuring |1> after rotating |0> by `phi` around the y axis.
pub fn ideal_prob(phi: Angle) -> f64 {
    (1.0 - phi.0.cos()) / 2.0
}

/// The four empirical constants of the affine readout model.
///
/// Invariants: `alpha >= 0`, `beta >= 0`, `alpha + beta <= 1`, `c > 0`, all finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    alpha: f64,
    beta: f64,
    phi0: f64,
    c: f64,
}

impl NoiseModel {
    pub fn new(alpha: f64, beta: f64, phi0: f64, c: f64) -> Result<Self> {
        let model = NoiseModel {
            alpha,
            beta,
            phi0,
            c,
        };
        model.validate()?;
        Ok(model)
    }

    /// `alpha = 1, beta = 0, phi0 = 0, c = 1`.
    pub fn ideal() -> Self {
        NoiseModel {
            alpha: 1.0,
            beta: 0.0,
            phi0: 0.0,
            c: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let NoiseModel {
            alpha,
            beta,
            phi0,
            c,
        } = *self;
        if ![alpha, beta, phi0, c].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "non-finite parameter in {self:?}"
            )));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidModel(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if beta < 0.0 {
            return Err(Error::InvalidModel(format!(
                "beta must be >= 0, got {beta}"
            )));
        }
        if alpha + beta > 1.0 {
            return Err(Error::InvalidModel(format!(
                "alpha + beta must be <= 1, got {}",
                alpha + beta
            )));
        }
        if c <= 0.0 {
            return Err(Error::InvalidModel(format!("c must be > 0, got {c}")));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Evaluates `P(t)`. The model is valid by construction, so only `t` needs checking
    /// by callers that accept untrusted times; see [`noisy_prob`].
    pub fn prob(&self, t: f64) -> f64 {
        self.alpha * (1.0 - (self.c * t + self.phi0).cos()) / 2.0 + self.beta
    }

    /// Oscillation period `2 pi / c`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.c
    }

    fn require_normalized(&self) -> Result<()> {
        if self.alpha != 1.0 || self.beta != 0.0 {
            return Err(Error::InvalidInput(format!(
                "closed-form crossings need alpha = 1 and beta = 0, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::ideal()
    }
}

pub fn noisy_prob(model: &NoiseModel, t: f64) -> Result<f64> {
    model.validate()?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("time must be finite, got {t}")));
    }
    Ok(model.prob(t))
}

/// First two half-probability crossings of the normalized curve:
/// `((pi/2 - phi0)/c, (3pi/2 - phi0)/c)`.
pub fn analytic_half_crossings(model: &NoiseModel) -> Result<(f64, f64)> {
    model.require_normalized()?;
    let t1 = (FRAC_PI_2 - model.phi0) / model.c;
    let t2 = (3.0 * FRAC_PI_2 - model.phi0) / model.c;
    Ok((t1, t2))
}

/// Exact area under `P(t) - 1/2` between the two half-crossings, which is `1/c`.
pub fn analytic_integral_reciprocal_c(model: &NoiseModel) -> Result<f64> {
    model.require_normalized()?;
    Ok(1.0 / model.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(a: f64, b: f64, p: f64, c: f64) -> NoiseModel {
        NoiseModel::new(a, b, p, c).unwrap()
    }

    #[test]
    fn ideal_prob_examples() {
        assert_eq!(ideal_prob(Angle::new(0.0).unwrap()), 0.0);
        assert!((ideal_prob(Angle::new(PI).unwrap()) - 1.0).abs() < 1e-15);
        assert!((ideal_prob(Angle::new(FRAC_PI_2).unwrap()) - 0.5).abs() < 1e-15);
        assert!(Angle::new(f64::NAN).is_err());
        assert!(Angle::new(f64::INFINITY).is_err());
    }

    #[test]
    fn noisy_prob_examples() {
        assert!((noisy_prob(&NoiseModel::ideal(), PI).unwrap() - 1.0).abs() < 1e-15);
        let m = model(0.8, 0.1, 0.0, 1.0);
        assert!((noisy_prob(&m, PI).unwrap() - 0.9).abs() < 1e-15);
        assert!((noisy_prob(&m, 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(noisy_prob(&m, f64::NAN).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(NoiseModel::new(1.0, 0.0, 0.0, 1.0).is_ok());
        assert!(NoiseModel::new(0.0, 0.5, 0.0, 1.0).is_ok());
        assert!(NoiseModel::new(-0.1, 0.0, 0.0, 1.0).is_err());
        assert!(NoiseModel::new(0.5, -0.01, 0.0, 1.0).is_err());
        assert!(NoiseModel::new(0.9, 0.2, 0.0, 1.0).is_err());
        assert!(NoiseModel::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(1.0, 0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn half_crossings_examples() {
        let (t1, t2) = analytic_half_crossings(&NoiseModel::ideal()).unwrap();
        assert!((t1 - FRAC_PI_2).abs() < 1e-15 && (t2 - 3.0 * FRAC_PI_2).abs() < 1e-15);

        let (t1, t2) = analytic_half_crossings(&model(1.0, 0.0, 0.0, 2.0)).unwrap();
        assert!((t1 - PI / 4.0).abs() < 1e-15 && (t2 - 3.0 * PI / 4.0).abs() < 1e-15);

        let m = model(1.0, 0.0, 0.2, 1.0);
        let (t1, t2) = analytic_half_crossings(&m).unwrap();
        assert!((t1 - (FRAC_PI_2 - 0.2)).abs() < 1e-15);
        assert!((t2 - (3.0 * FRAC_PI_2 - 0.2)).abs() < 1e-15);
        assert!((m.prob(t1) - 0.5).abs() < 1e-15);
        assert!((m.prob(t2) - 0.5).abs() < 1e-15);

        assert!(analytic_half_crossings(&model(0.9, 0.0, 0.0, 1.0)).is_err());
        assert!(analytic_half_crossings(&model(1.0 - 0.05, 0.05, 0.0, 1.0)).is_err());
    }

    #[test]
    fn integral_examples() {
        assert_eq!(
            analytic_integral_reciprocal_c(&NoiseModel::ideal()).unwrap(),
            1.0
        );
        assert_eq!(
            analytic_integral_reciprocal_c(&model(1.0, 0.0, 0.0, 2.0)).unwrap(),
            0.5
        );
        assert_eq!(
            analytic_integral_reciprocal_c(&model(1.0, 0.0, 0.3, 1.0)).unwrap(),
            1.0
        );
        assert!(analytic_integral_reciprocal_c(&model(0.8, 0.1, 0.0, 1.0)).is_err());
    }

    // Dense composite trapezoid, independent of the pipeline's interpolant integrator.
    fn dense_quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, h: f64) -> f64 {
        let n = ((b - a) / h).ceil() as usize;
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
        h * (inner + (f(a) + f(b)) / 2.0)
    }

    #[test]
    fn integral_matches_dense_quadrature() {
        for &c in &[0.5, 1.0, 2.0] {
            for &phi0 in &[-0.3, 0.0, 0.3] {
                let m = model(1.0, 0.0, phi0, c);
                let (t1, t2) = analytic_half_crossings(&m).unwrap();
                let numeric = dense_quadrature(|t| m.prob(t) - 0.5, t1, t2, 1e-5);
                let exact = analytic_integral_reciprocal_c(&m).unwrap();
                assert!(
                    (numeric - exact).abs() < 1e-8,
                    "c={c} phi0={phi0}: {numeric} vs {exact}"
                );
                assert!((t2 - t1 - PI / c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reduces_to_ideal_on_dense_grid() {
        let m = NoiseModel::ideal();
        for i in 0..1000 {
            let t = 2.0 * PI * i as f64 / 999.0;
            let ideal = ideal_prob(Angle::new(t).unwrap());
            assert!((m.prob(t) - ideal).abs() <= f64::EPSILON);
        }
    }

    fn valid_model() -> impl Strategy<Value = NoiseModel> {
        (0.0..=1.0f64, 0.0..=1.0f64, -PI..PI, 0.1..5.0f64).prop_map(|(a, bfrac, p, c)| {
            let b = (1.0 - a) * bfrac;
            NoiseModel::new(a, b, p, c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn prob_is_bounded_by_levels(m in valid_model(), t in -50.0..50.0f64) {
            let p = m.prob(t);
            prop_assert!(p >= m.beta() - 1e-15 && p <= m.alpha() + m.beta() + 1e-15);
            prop_assert!((0.0..=1.0 + 1e-15).contains(&p));
        }

        #[test]
        fn prob_is_periodic(m in valid_model(), t in -10.0..10.0f64) {
            prop_assert!((m.prob(t) - m.prob(t + m.period())).abs() < 1e-12);
        }
    }
}
