//! Adam-based circuit optimization, minimizing ⟨H_C⟩.

use super::{expectation, evolve, gradient::gradient_with_loss, CircuitSpec};
use crate::error::{CoreError, Result};
use crate::statevector::StateVector;
use rand::Rng;

/// Optimizer settings. Defaults: 40 epochs at learning rate 0.15, initial
/// angles drawn uniformly from [−π/8, π/8].
#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    pub epochs: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub init_half_width: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            epochs: 40,
            lr: 0.15,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            init_half_width: std::f64::consts::FRAC_PI_8,
        }
    }
}

/// Trace of one optimization run.
#[derive(Debug, Clone)]
pub struct OptimizeReport {
    pub params: Vec<f64>,
    /// Loss at the start of each epoch (length = epochs).
    pub loss_trace: Vec<f64>,
    /// Gradient 2-norm at the start of each epoch (length = epochs).
    pub grad_norm_trace: Vec<f64>,
    /// Loss at the final parameters.
    pub final_loss: f64,
    /// Minimum loss seen anywhere along the run.
    pub best_loss: f64,
}

/// Minimize ⟨H_C⟩ with fresh random initial angles drawn from `rng`.
pub fn optimize(
    circuit: &CircuitSpec,
    psi0: &StateVector,
    opts: &OptimizeOptions,
    rng: &mut impl Rng,
) -> Result<OptimizeReport> {
    let w = opts.init_half_width;
    let init: Vec<f64> =
        (0..circuit.num_parameters()).map(|_| rng.gen_range(-w..w)).collect();
    optimize_from(circuit, psi0, init, opts)
}

/// Minimize ⟨H_C⟩ starting from explicit parameters.
pub fn optimize_from(
    circuit: &CircuitSpec,
    psi0: &StateVector,
    init: Vec<f64>,
    opts: &OptimizeOptions,
) -> Result<OptimizeReport> {
    if opts.epochs == 0 {
        return Err(CoreError::input("epochs must be ≥ 1"));
    }
    circuit.validate_params(&init)?;

    let mut params = init;
    let mut m = vec![0.0; params.len()];
    let mut v = vec![0.0; params.len()];
    let mut loss_trace = Vec::with_capacity(opts.epochs);
    let mut grad_norm_trace = Vec::with_capacity(opts.epochs);

    for t in 1..=opts.epochs {
        let (loss, grads) = gradient_with_loss(circuit, &params, psi0)?;
        if !loss.is_finite() || grads.iter().any(|g| !g.is_finite()) {
            return Err(CoreError::numeric(format!(
                "non-finite loss/gradient at epoch {t}; trace so far: {loss_trace:?}"
            )));
        }
        loss_trace.push(loss);
        grad_norm_trace.push(grads.iter().map(|g| g * g).sum::<f64>().sqrt());

        let bc1 = 1.0 - opts.beta1.powi(t as i32);
        let bc2 = 1.0 - opts.beta2.powi(t as i32);
        for k in 0..params.len() {
            m[k] = opts.beta1 * m[k] + (1.0 - opts.beta1) * grads[k];
            v[k] = opts.beta2 * v[k] + (1.0 - opts.beta2) * grads[k] * grads[k];
            let mhat = m[k] / bc1;
            let vhat = v[k] / bc2;
            params[k] -= opts.lr * mhat / (vhat.sqrt() + opts.eps);
        }
    }

    let final_loss = expectation(&evolve(circuit, &params, psi0)?, circuit.cost())?;
    let best_loss = loss_trace.iter().copied().fold(final_loss, f64::min);
    Ok(OptimizeReport { params, loss_trace, grad_norm_trace, final_loss, best_loss })
}
