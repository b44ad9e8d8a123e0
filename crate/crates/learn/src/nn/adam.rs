//! Bias-corrected Adam over named tensors.

use super::Tensor;
use crate::error::{LearnError, Result};

/// First/second moment buffers plus the step counter, one pair per tensor.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub m: Tensor,
    pub v: Tensor,
    pub step: u64,
}

impl AdamState {
    pub fn for_shape(rows: usize, cols: usize) -> Self {
        AdamState { m: Tensor::zeros(rows, cols), v: Tensor::zeros(rows, cols), step: 0 }
    }
}

/// One in-place Adam update (β₁ = 0.9, β₂ = 0.999, ε = 1e-8).
pub fn adam_step(params: &mut Tensor, grads: &Tensor, state: &mut AdamState, lr: f64) -> Result<()> {
    if grads.shape() != params.shape() {
        return Err(LearnError::Shape(format!(
            "gradient shape {:?} vs parameter shape {:?}",
            grads.shape(),
            params.shape()
        )));
    }
    if !grads.is_finite() {
        return Err(LearnError::Numeric("non-finite gradient in Adam step".into()));
    }
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    state.step += 1;
    let bc1 = 1.0 - BETA1.powi(state.step as i32);
    let bc2 = 1.0 - BETA2.powi(state.step as i32);
    for k in 0..params.data.len() {
        let g = grads.data[k];
        state.m.data[k] = BETA1 * state.m.data[k] + (1.0 - BETA1) * g;
        state.v.data[k] = BETA2 * state.v.data[k] + (1.0 - BETA2) * g * g;
        let mhat = state.m.data[k] / bc1;
        let vhat = state.v.data[k] / bc2;
        params.data[k] -= lr * mhat / (vhat.sqrt() + EPS);
    }
    Ok(())
}
