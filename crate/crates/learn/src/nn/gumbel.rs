//! Gumbel noise for differentiable categorical sampling.

use super::Tensor;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// i.i.d. standard Gumbel noise: −ln(−ln U).
pub fn gumbel_noise(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let data = (0..rows * cols)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -(-u.ln()).ln()
        })
        .collect();
    Tensor::from_vec(rows, cols, data)
}

/// Gumbel-max draw from unnormalized logits; equals a softmax-distributed
/// categorical sample.
pub fn sample_categorical(logits: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let noise = gumbel_noise(1, logits.len(), rng);
    let mut best = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for (k, (&l, &g)) in logits.iter().zip(&noise.data).enumerate() {
        if l + g > best_v {
            best_v = l + g;
            best = k;
        }
    }
    best
}
