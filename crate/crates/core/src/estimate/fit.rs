use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::model::NoiseModel;
use crate::simulate::Dataset;

use super::{find_crossing, normalize, rough_alpha_beta, EstimateConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitBudget {
    pub max_evaluations: usize,
    /// Stop once the simplex's residual spread falls below this fraction of the best residual.
    pub rel_tol: f64,
}

impl Default for FitBudget {
    fn default() -> Self {
        FitBudget {
            max_evaluations: 10_000,
            rel_tol: 1e-9,
        }
    }
}

/// Sum of squared differences between observed fractions and the model curve.
pub fn residual_sum(curve: &Curve, model: &NoiseModel) -> f64 {
    curve.iter().map(|(t, f)| (f - model.prob(t)).powi(2)).sum()
}

/// Least-squares fit of all four model parameters to the observed fractions.
pub fn fit_model(ds: &Dataset) -> Result<NoiseModel> {
    fit_model_curve(&ds.fractions(), FitBudget::default())
}

pub fn fit_model_curve(curve: &Curve, budget: FitBudget) -> Result<NoiseModel> {
    let start = initial_guess(curve)?;
    let objective = |x: &[f64; 4]| residual_sum(curve, &project(x));
    let x0 = [start.alpha(), start.beta(), start.phi0(), start.c()];
    let steps = [0.05, 0.02, 0.1, 0.05];

    let mut evaluations = 0;
    let mut best = x0;
    let mut converged = false;
    // a second pass from the first optimum guards against a collapsed simplex
    for _ in 0..2 {
        let remaining = budget.max_evaluations.saturating_sub(evaluations);
        let run = nelder_mead(&objective, best, steps, remaining, budget.rel_tol);
        evaluations += run.evaluations;
        best = run.best;
        converged = run.converged;
        if !converged {
            break;
        }
    }
    let model = project(&best);
    if !converged {
        return Err(Error::NotConverged {
            best: model,
            residual: residual_sum(curve, &model),
            evaluations,
        });
    }
    Ok(model)
}

fn initial_guess(curve: &Curve) -> Result<NoiseModel> {
    let (alpha, beta) =
        rough_alpha_beta(curve).map_err(|e| Error::Fit(format!("cannot fit oscillation: {e}")))?;
    let f1 = normalize(curve, alpha, beta)?;
    let cfg = EstimateConfig::default();
    let crossings = find_crossing(&f1, cfg.root_start_1, cfg.level)
        .and_then(|t1| Ok((t1, find_crossing(&f1, cfg.root_start_2, cfg.level)?)));
    let (c, phi0) = match crossings {
        Ok((t1, t2)) if t2 > t1 => {
            let c = PI / (t2 - t1);
            (c, FRAC_PI_2 - c * t1)
        }
        // time units are chosen so the period is about 2 pi
        _ => (1.0, 0.0),
    };
    Ok(project(&[alpha, beta, phi0, c]))
}

/// Maps an unconstrained parameter vector onto the nearest valid model.
fn project(x: &[f64; 4]) -> NoiseModel {
    let beta = x[1].clamp(0.0, 1.0);
    let alpha = x[0].clamp(0.0, 1.0 - beta);
    let c = x[3].abs().max(1e-9);
    NoiseModel::new(alpha, beta, x[2], c).expect("projected parameters are valid")
}

struct SimplexRun {
    best: [f64; 4],
    evaluations: usize,
    converged: bool,
}

fn nelder_mead(
    f: &impl Fn(&[f64; 4]) -> f64,
    x0: [f64; 4],
    steps: [f64; 4],
    max_evaluations: usize,
    rel_tol: f64,
) -> SimplexRun {
    const N: usize = 4;
    let evaluations = Cell::new(0usize);
    let eval = |x: &[f64; N]| {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += steps[i];
        simplex.push((x, eval(&x)));
    }

    let mut converged = false;
    while evaluations.get() < max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (f_best, f_worst) = (simplex[0].1, simplex[N].1);
        let spread = (f_worst - f_best).abs();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= rel_tol * f_best.abs() + 1e-30 || diameter < 1e-12 {
            converged = true;
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / N as f64;
            }
        }
        let toward = |coef: f64| {
            let mut x = [0.0; N];
            for i in 0..N {
                x[i] = centroid[i] + coef * (simplex[N].0[i] - centroid[i]);
            }
            x
        };

        let xr = toward(-1.0);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = toward(-2.0);
            let fe = eval(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = toward(-0.5);
            (xc, eval(&xc))
        } else {
            let xc = toward(0.5);
            (xc, eval(&xc))
        };
        if fc < f_worst.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0;
        for (x, fx) in simplex.iter_mut().skip(1) {
            for i in 0..N {
                x[i] = best[i] + 0.5 * (x[i] - best[i]);
            }
            *fx = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexRun {
        best: simplex[0].0,
        evaluations: evaluations.get(),
        converged,
    }
}
