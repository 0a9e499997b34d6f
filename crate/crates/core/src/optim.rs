//! VQE loop driven by Adam, with energy-gap tracking and convergence metrics.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::CircuitTemplate;
use crate::init::Method;
use crate::prior::BetaParams;
use crate::problem::Hamiltonian;
use crate::sim::{energy_and_gradient, SimError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimError {
    #[error("length mismatch: {params} parameters, {grad} gradient entries, {state} moment entries")]
    LengthMismatch { params: usize, grad: usize, state: usize },
    #[error("invalid optimiser configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimConfig {
    pub max_iterations: usize,
    /// Energy-gap tolerance that counts as converged.
    pub tolerance: f64,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            max_iterations: 400,
            tolerance: 0.05,
            learning_rate: 0.05,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }
}

impl OptimConfig {
    pub fn validate(&self) -> Result<(), OptimError> {
        if self.max_iterations < 1 {
            return Err(OptimError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(OptimError::InvalidConfig("tolerance must be positive".into()));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(OptimError::InvalidConfig("learning_rate must be non-negative".into()));
        }
        if !((0.0..1.0).contains(&self.adam_beta1) && (0.0..1.0).contains(&self.adam_beta2)) {
            return Err(OptimError::InvalidConfig("Adam decay rates must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        AdamState {
            first_moment: vec![0.0; len],
            second_moment: vec![0.0; len],
            step_count: 0,
        }
    }

    /// One bias-corrected Adam update of `params` in place.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64], cfg: &OptimConfig) -> Result<(), OptimError> {
        if params.len() != grad.len() || self.first_moment.len() != params.len() {
            return Err(OptimError::LengthMismatch {
                params: params.len(),
                grad: grad.len(),
                state: self.first_moment.len(),
            });
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = 1.0 - cfg.adam_beta1.powi(t);
        let bc2 = 1.0 - cfg.adam_beta2.powi(t);
        for i in 0..params.len() {
            let g = grad[i];
            self.first_moment[i] = cfg.adam_beta1 * self.first_moment[i] + (1.0 - cfg.adam_beta1) * g;
            self.second_moment[i] = cfg.adam_beta2 * self.second_moment[i] + (1.0 - cfg.adam_beta2) * g * g;
            let m_hat = self.first_moment[i] / bc1;
            let v_hat = self.second_moment[i] / bc2;
            params[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
        }
        Ok(())
    }
}

/// Functional form of [`AdamState::step`].
pub fn adam_step(
    state: &AdamState,
    params: &[f64],
    grad: &[f64],
    cfg: &OptimConfig,
) -> Result<(AdamState, Vec<f64>), OptimError> {
    let mut next = state.clone();
    let mut p = params.to_vec();
    next.step(&mut p, grad, cfg)?;
    Ok((next, p))
}

/// `|E - E_exact|`.
pub fn energy_gap(energy: f64, exact: f64) -> f64 {
    (energy - exact).abs()
}

/// First index whose gap is within `tolerance`.
pub fn convergence_step(trajectory: &[f64], tolerance: f64) -> Option<usize> {
    trajectory.iter().position(|&g| g <= tolerance)
}

/// Outcome of one optimisation run, before it is tagged with an instance
/// and method.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeRun {
    /// Gap at t = 0 (before any update) and after each update.
    pub gap_trajectory: Vec<f64>,
    pub final_gap: f64,
    /// Iterations to converge; `max_iterations` when the run never converged.
    pub t_conv: usize,
    pub t_conv_ms: f64,
    pub converged: bool,
    pub iterations_executed: usize,
    /// Set when the energy became non-finite; the trajectory stops at the
    /// last finite gap.
    pub aborted: bool,
    pub final_params: Vec<f64>,
}

/// Minimises `<H>` from `theta_init` until the gap to `exact_energy` drops
/// to the tolerance or the iteration budget runs out.
pub fn run_vqe(
    template: &CircuitTemplate,
    hamiltonian: &Hamiltonian,
    exact_energy: f64,
    theta_init: &[f64],
    cfg: &OptimConfig,
) -> Result<VqeRun, OptimError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut params = theta_init.to_vec();
    let mut adam = AdamState::new(params.len());
    let (energy, mut grad) = energy_and_gradient(template, &params, hamiltonian)?;
    let mut trajectory = Vec::with_capacity(cfg.max_iterations + 1);
    let mut aborted = false;
    let mut converged = false;

    let gap = energy_gap(energy, exact_energy);
    if !gap.is_finite() {
        aborted = true;
    } else {
        trajectory.push(gap);
        converged = gap <= cfg.tolerance;
    }

    let mut t = 0;
    while !aborted && !converged && t < cfg.max_iterations {
        t += 1;
        adam.step(&mut params, &grad, cfg)?;
        let (energy, g) = energy_and_gradient(template, &params, hamiltonian)?;
        grad = g;
        let gap = energy_gap(energy, exact_energy);
        if !gap.is_finite() || grad.iter().any(|v| !v.is_finite()) {
            aborted = true;
            break;
        }
        trajectory.push(gap);
        converged = gap <= cfg.tolerance;
    }
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let iterations_executed = trajectory.len().saturating_sub(1);
    Ok(VqeRun {
        final_gap: trajectory.last().copied().unwrap_or(f64::NAN),
        t_conv: if converged { iterations_executed } else { cfg.max_iterations },
        t_conv_ms: elapsed,
        converged,
        iterations_executed,
        aborted,
        gap_trajectory: trajectory,
        final_params: params,
    })
}

/// One optimisation run, as exported to JSON and CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub method: Method,
    pub seed: u64,
    pub gap_trajectory: Vec<f64>,
    pub final_gap: f64,
    pub t_conv: usize,
    pub t_conv_ms: f64,
    pub converged: bool,
    pub iterations_executed: usize,
    pub fitted_prior: Option<BetaParams>,
    pub aborted: bool,
}

impl RunRecord {
    pub fn from_run(
        instance_id: impl Into<String>,
        method: Method,
        seed: u64,
        fitted_prior: Option<BetaParams>,
        run: VqeRun,
    ) -> Self {
        RunRecord {
            instance_id: instance_id.into(),
            method,
            seed,
            gap_trajectory: run.gap_trajectory,
            final_gap: run.final_gap,
            t_conv: run.t_conv,
            t_conv_ms: run.t_conv_ms,
            converged: run.converged,
            iterations_executed: run.iterations_executed,
            fitted_prior,
            aborted: run.aborted,
        }
    }

    /// A completed run with finite gap and timing.
    pub fn is_valid(&self) -> bool {
        !self.aborted && self.final_gap.is_finite() && self.t_conv_ms.is_finite()
    }
}
