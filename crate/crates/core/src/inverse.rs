//! Regularized least-squares recovery of α(x) from an observed static response.
//!
//! α is parameterized by values at equally spaced knots with linear
//! interpolation. The objective is the normalized squared misfit of w₀ and
//! θ₀ plus a second-difference penalty on the knots, minimized by damped
//! Gauss–Newton with a forward-difference Jacobian and projection onto the
//! admissible box.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{solve_transverse, SolverOptions};
use crate::model::{BeamModel, VoProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InverseConfig {
    pub knots: usize,
    pub lower: f64,
    pub upper: f64,
    pub smoothing: f64,
    pub max_iterations: usize,
    /// Stop once an accepted step lowers the objective by less than this
    /// fraction.
    pub tolerance: f64,
    pub initial: f64,
    pub jacobian_step: f64,
}

impl Default for InverseConfig {
    fn default() -> Self {
        Self {
            knots: 21,
            lower: 0.7,
            upper: 1.0,
            smoothing: 1e-6,
            max_iterations: 50,
            tolerance: 1e-8,
            initial: 0.85,
            jacobian_step: 1e-4,
        }
    }
}

/// Nodal response on the solver mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseResult {
    pub alpha: Vec<f64>,
    pub knots: Vec<f64>,
    pub misfit: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Objective values at or below this count as an exact fit.
const EXACT_FIT: f64 = 1e-24;
const MAX_DAMPING_TRIES: usize = 12;

struct Problem<'a> {
    model: &'a BeamModel,
    obs: &'a Observation,
    cfg: &'a InverseConfig,
    opts: &'a SolverOptions,
    w_norm: f64,
    theta_norm: f64,
}

impl Problem<'_> {
    fn profile(&self, knots: &[f64]) -> VoProfile {
        VoProfile::CustomNodal {
            values: knots.to_vec(),
        }
    }

    fn residual(&self, knots: &[f64]) -> Result<DVector<f64>> {
        let model = self.model.with_profile(self.profile(knots))?;
        let resp = solve_transverse(&model, self.opts)?;
        let n = resp.w0.len();
        let k = knots.len();
        let mut r = DVector::zeros(2 * n + k.saturating_sub(2));
        for i in 0..n {
            r[i] = (resp.w0[i] - self.obs.w[i]) / self.w_norm;
            r[n + i] = (resp.theta0[i] - self.obs.theta[i]) / self.theta_norm;
        }
        let s = self.cfg.smoothing.sqrt();
        for j in 1..k.saturating_sub(1) {
            r[2 * n + j - 1] = s * (knots[j - 1] - 2.0 * knots[j] + knots[j + 1]);
        }
        Ok(r)
    }

    fn jacobian(&self, knots: &[f64], r0: &DVector<f64>) -> Result<DMatrix<f64>> {
        let step = self.cfg.jacobian_step;
        let columns = (0..knots.len())
            .into_par_iter()
            .map(|j| {
                let mut p = knots.to_vec();
                let h = if p[j] + step > self.cfg.upper {
                    -step
                } else {
                    step
                };
                p[j] += h;
                Ok((self.residual(&p)? - r0) / h)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_columns(&columns))
    }
}

/// Recover nodal α from `obs`; the model's own profile is ignored.
pub fn identify_vo_lsq(
    obs: &Observation,
    model: &BeamModel,
    cfg: &InverseConfig,
    opts: &SolverOptions,
) -> Result<InverseResult> {
    let n = opts.elements + 1;
    if obs.w.len() != n || obs.theta.len() != n {
        return Err(Error::Input(format!(
            "observation has {} deflections and {} rotations; the mesh has {n} nodes",
            obs.w.len(),
            obs.theta.len()
        )));
    }
    if obs.w.iter().chain(&obs.theta).any(|v| !v.is_finite()) {
        return Err(Error::Input("observations must be finite".into()));
    }
    if !(cfg.knots >= 2 && cfg.knots <= n) {
        return Err(Error::Input(format!(
            "knot count must lie in [2, {n}], got {}",
            cfg.knots
        )));
    }
    if !(cfg.smoothing >= 0.0) {
        return Err(Error::Input("smoothing weight must be non-negative".into()));
    }
    if !(cfg.lower > 0.0 && cfg.lower < cfg.upper && cfg.upper <= 1.0) {
        return Err(Error::Input(format!(
            "bounds must satisfy 0 < lower < upper <= 1, got [{}, {}]",
            cfg.lower, cfg.upper
        )));
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (w_norm, theta_norm) = (norm(&obs.w), norm(&obs.theta));
    if w_norm == 0.0 || theta_norm == 0.0 {
        return Err(Error::Input(
            "observed deflection and rotation must be non-zero".into(),
        ));
    }
    let problem = Problem {
        model,
        obs,
        cfg,
        opts,
        w_norm,
        theta_norm,
    };
    let project = |p: &mut [f64]| {
        p.iter_mut()
            .for_each(|v| *v = v.clamp(cfg.lower, cfg.upper))
    };

    let mut knots = vec![cfg.initial.clamp(cfg.lower, cfg.upper); cfg.knots];
    let mut r = problem.residual(&knots)?;
    let mut phi = r.norm_squared();
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut converged = phi <= EXACT_FIT;

    while !converged && iterations < cfg.max_iterations {
        iterations += 1;
        let jac = problem.jacobian(&knots, &r)?;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        let mut accepted = false;
        for _ in 0..MAX_DAMPING_TRIES {
            let mut lhs = jtj.clone();
            for d in 0..lhs.nrows() {
                lhs[(d, d)] += mu * (jtj[(d, d)] + 1e-12);
            }
            let Some(step) = lhs.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu *= 10.0;
                continue;
            };
            let mut trial: Vec<f64> = knots.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
            project(&mut trial);
            let r_trial = problem.residual(&trial)?;
            let phi_trial = r_trial.norm_squared();
            if phi_trial < phi {
                let decrease = (phi - phi_trial) / phi;
                knots = trial;
                r = r_trial;
                phi = phi_trial;
                mu = (mu / 3.0).max(1e-12);
                accepted = true;
                converged = decrease < cfg.tolerance || phi <= EXACT_FIT;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            // No descent direction left at this damping: a stationary point.
            converged = true;
        }
        log::debug!("inverse iteration {iterations}: objective {phi:e}, damping {mu:e}");
    }

    let profile = problem.profile(&knots);
    let length = model.length();
    let alpha = (0..n)
        .map(|i| profile.order_at(length * i as f64 / (n - 1) as f64, length))
        .collect();
    Ok(InverseResult {
        alpha,
        knots,
        misfit: phi,
        iterations,
        converged,
    })
}

/// Mean over nodes of |α_pred − α_true| / α_true × 100.
pub fn error_metric(alpha_pred: &[f64], alpha_true: &[f64]) -> Result<f64> {
    if alpha_pred.len() != alpha_true.len() || alpha_pred.is_empty() {
        return Err(Error::Input(format!(
            "error metric needs equal non-empty lengths, got {} and {}",
            alpha_pred.len(),
            alpha_true.len()
        )));
    }
    if alpha_true.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::Input("true orders must be positive".into()));
    }
    let sum: f64 = alpha_pred
        .iter()
        .zip(alpha_true)
        .map(|(p, t)| ((p - t) / t).abs() * 100.0)
        .sum();
    Ok(sum / alpha_true.len() as f64)
}
