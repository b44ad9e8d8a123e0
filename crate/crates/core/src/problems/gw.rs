//! Goemans–Williamson Max-Cut via low-rank (Burer–Monteiro) factorization
//! of the SDP relaxation plus random-hyperplane rounding.

use super::{approximation_ratio, ProblemInstance, Solution, WeightedGraph};
use crate::error::{CoreError, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Solution plus a convergence flag for the relaxation stage.
#[derive(Debug, Clone)]
pub struct GwOutcome {
    pub solution: Solution,
    /// False if the relaxation stagnated before reaching tolerance; the best
    /// rounding found so far is still returned.
    pub converged: bool,
}

/// Maximize Σ w_ij (1 − v_i·v_j)/2 over unit vectors of rank ⌈√(2n)⌉ by
/// projected gradient ascent, then round with `rounds` random hyperplanes.
pub fn gw_maxcut(graph: &WeightedGraph, rounds: usize, rng: &mut ChaCha8Rng) -> Result<GwOutcome> {
    if rounds == 0 {
        return Err(CoreError::input("rounds must be ≥ 1"));
    }
    graph.validate()?;
    let n = graph.num_vertices();
    if n == 0 || graph.edges().is_empty() {
        return Err(CoreError::input("GW needs a nonempty graph"));
    }
    let rank = ((2.0 * n as f64).sqrt().ceil() as usize).max(2);

    // Unit-vector initialization.
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..rank).map(|_| rng.gen_range(-1.0..1.0)).collect();
            normalize(&mut row);
            row
        })
        .collect();

    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in graph.edges() {
        adj[i].push((j, w));
        adj[j].push((i, w));
    }
    let objective = |v: &[Vec<f64>]| -> f64 {
        graph
            .edges()
            .iter()
            .map(|&(i, j, w)| w * (1.0 - dot(&v[i], &v[j])) / 2.0)
            .sum()
    };

    // Projected gradient ascent with an adaptive step; ∂/∂v_i = −½ Σ w_ij v_j.
    let mut step = 1.0;
    let mut obj = objective(&v);
    let mut converged = false;
    for _ in 0..500 {
        let mut trial = v.clone();
        for i in 0..n {
            let mut grad = vec![0.0; rank];
            for &(j, w) in &adj[i] {
                for k in 0..rank {
                    grad[k] -= 0.5 * w * v[j][k];
                }
            }
            for k in 0..rank {
                trial[i][k] += step * grad[k];
            }
            normalize(&mut trial[i]);
        }
        let trial_obj = objective(&trial);
        if trial_obj > obj + 1e-12 {
            let improved_by = trial_obj - obj;
            v = trial;
            obj = trial_obj;
            step = (step * 1.2).min(10.0);
            if improved_by < 1e-10 * obj.abs().max(1.0) {
                converged = true;
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-12 {
                converged = true;
                break;
            }
        }
    }

    // Random-hyperplane rounding; keep the best cut.
    let mut best_bits: Vec<u8> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    for _ in 0..rounds {
        let mut r: Vec<f64> = (0..rank).map(|_| gaussian(rng)).collect();
        normalize(&mut r);
        let bits: Vec<u8> = v.iter().map(|vi| if dot(vi, &r) >= 0.0 { 0u8 } else { 1u8 }).collect();
        let value = graph.cut_value(&bits);
        if value > best_value {
            best_value = value;
            best_bits = bits;
        }
    }

    let instance = ProblemInstance::maxcut(graph.clone());
    let ratio = if n <= super::MAX_BRUTE_FORCE_VERTICES {
        let h = instance.graph.total_weight() / 2.0 - best_value;
        approximation_ratio(&instance, h)?
    } else {
        f64::NAN
    };
    Ok(GwOutcome {
        solution: Solution { bits: best_bits, value: best_value, ratio },
        converged,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let nrm = dot(v, v).sqrt();
    if nrm > 1e-300 {
        for x in v.iter_mut() {
            *x /= nrm;
        }
    } else {
        v[0] = 1.0;
        for x in v.iter_mut().skip(1) {
            *x = 0.0;
        }
    }
}

/// Box–Muller standard normal.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
