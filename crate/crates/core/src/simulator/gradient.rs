//! Gradients of ⟨H_C⟩ with respect to every circuit angle.
//!
//! The adjoint route does one forward evolution and one reverse sweep,
//! inserting −iG for each gate generator; grouped parameters accumulate all
//! gates of their group in a single generator application. The
//! parameter-shift route is the exact two-point formula, valid when every
//! gate generator is a single Pauli string.

use super::{evolve, expectation, CircuitSpec, MixerLayer};
use crate::error::{CoreError, Result};
use crate::pauli::PauliSum;
use crate::statevector::StateVector;

/// Exact ∂⟨H_C⟩/∂θ for every parameter, reverse-mode.
pub fn gradient(circuit: &CircuitSpec, params: &[f64], psi0: &StateVector) -> Result<Vec<f64>> {
    Ok(gradient_with_loss(circuit, params, psi0)?.1)
}

/// Loss and gradient in one pass (the forward state is shared).
pub fn gradient_with_loss(
    circuit: &CircuitSpec,
    params: &[f64],
    psi0: &StateVector,
) -> Result<(f64, Vec<f64>)> {
    circuit.validate_params(params)?;
    let mut psi = evolve(circuit, params, psi0)?;
    let loss = expectation(&psi, circuit.cost())?;
    let mut lambda = psi.apply_pauli_sum(circuit.cost())?;

    let mut grads = vec![0.0; params.len()];
    // Parameter offsets per layer: [α, β…] blocks in layer order.
    let mut offsets = Vec::with_capacity(circuit.depth());
    let mut off = 0usize;
    for layer in circuit.layers() {
        offsets.push(off);
        off += 1 + layer.num_parameters();
    }

    for (k, layer) in circuit.layers().iter().enumerate().rev() {
        let base = offsets[k];
        let alpha = params[base];
        let betas = &params[base + 1..base + 1 + layer.num_parameters()];

        // Mixer derivatives at the state after this layer's mixer.
        match layer {
            MixerLayer::Grouped(spec) => {
                for j in 0..spec.group_count() {
                    let gj = spec.group_generator(j);
                    let gpsi = psi.apply_pauli_sum(&gj)?;
                    grads[base + 1 + j] = 2.0 * lambda.inner(&gpsi).im;
                }
                // Undo the mixer from both vectors.
                for q in 0..circuit.num_qubits() {
                    let angle = -betas[spec.group_of(q)];
                    psi.rotate(q, spec.types()[q].letter(), angle);
                    lambda.rotate(q, spec.types()[q].letter(), angle);
                }
            }
            MixerLayer::Generator(g) => {
                let gpsi = psi.apply_pauli_sum(g)?;
                grads[base + 1] = 2.0 * lambda.inner(&gpsi).im;
                undo_generator(circuit, g, betas[0], &mut psi, &mut lambda)?;
            }
        }

        // Cost derivative at the state after the cost evolution.
        let hpsi = psi.apply_pauli_sum(circuit.cost())?;
        grads[base] = 2.0 * lambda.inner(&hpsi).im;
        undo_cost(circuit, alpha, &mut psi)?;
        undo_cost(circuit, alpha, &mut lambda)?;
    }
    Ok((loss, grads))
}

fn undo_cost(circuit: &CircuitSpec, alpha: f64, v: &mut StateVector) -> Result<()> {
    circuit.apply_cost(v, -alpha)
}

fn undo_generator(
    circuit: &CircuitSpec,
    g: &PauliSum,
    beta: f64,
    psi: &mut StateVector,
    lambda: &mut StateVector,
) -> Result<()> {
    circuit.apply_mixer(psi, &MixerLayer::Generator(g.clone()), &[-beta])?;
    circuit.apply_mixer(lambda, &MixerLayer::Generator(g.clone()), &[-beta])
}

/// Gate generators as (coefficient, is-single-string) for the shift rule.
fn single_string_coefficients(circuit: &CircuitSpec) -> Result<Vec<f64>> {
    let mut coeffs = Vec::with_capacity(circuit.num_parameters());
    let cost_coeff = if circuit.cost().num_terms() == 1 {
        circuit.cost().terms().next().unwrap().coeff.re
    } else {
        return Err(CoreError::Unsupported(
            "parameter-shift needs a single-term cost layer; use gradient()".into(),
        ));
    };
    for layer in circuit.layers() {
        coeffs.push(cost_coeff);
        match layer {
            MixerLayer::Grouped(spec) => {
                for j in 0..spec.group_count() {
                    if spec.group_generator(j).num_terms() != 1 {
                        return Err(CoreError::Unsupported(
                            "parameter-shift needs singleton mixer groups (NG); use gradient()"
                                .into(),
                        ));
                    }
                    coeffs.push(1.0);
                }
            }
            MixerLayer::Generator(g) => {
                if g.num_terms() != 1 {
                    return Err(CoreError::Unsupported(
                        "parameter-shift needs single-string generators; use gradient()".into(),
                    ));
                }
                coeffs.push(g.terms().next().unwrap().coeff.re);
            }
        }
    }
    Ok(coeffs)
}

/// Two-point parameter-shift gradient.
///
/// For a gate e^{−iθ·cP} with P a Pauli string, the loss is harmonic with
/// frequency 2c, giving ∂F/∂θ = c·[F(θ+s) − F(θ−s)] / sin(2cs). Shifts with
/// sin(2cs) ≈ 0 (for unit c: multiples of π/2, which covers the paper's
/// excluded multiples of π) make the denominator diverge and are rejected.
pub fn parameter_shift_gradient(
    circuit: &CircuitSpec,
    params: &[f64],
    psi0: &StateVector,
    shift: f64,
) -> Result<Vec<f64>> {
    circuit.validate_params(params)?;
    let coeffs = single_string_coefficients(circuit)?;
    for &c in &coeffs {
        if (2.0 * c * shift).sin().abs() < 1e-9 {
            return Err(CoreError::input(format!(
                "shift {shift} makes sin(2·{c}·shift) vanish; pick a shift away from the gate period"
            )));
        }
    }
    let mut grads = vec![0.0; params.len()];
    let mut shifted = params.to_vec();
    for (k, &c) in coeffs.iter().enumerate() {
        shifted[k] = params[k] + shift;
        let fp = expectation(&evolve(circuit, &shifted, psi0)?, circuit.cost())?;
        shifted[k] = params[k] - shift;
        let fm = expectation(&evolve(circuit, &shifted, psi0)?, circuit.cost())?;
        shifted[k] = params[k];
        grads[k] = c * (fp - fm) / (2.0 * c * shift).sin();
    }
    Ok(grads)
}

/// Central finite differences, the independent oracle used by the test
/// suites (kept here so integration tests across crates can share it).
pub fn finite_difference_gradient(
    circuit: &CircuitSpec,
    params: &[f64],
    psi0: &StateVector,
    h: f64,
) -> Result<Vec<f64>> {
    let mut grads = vec![0.0; params.len()];
    let mut shifted = params.to_vec();
    for k in 0..params.len() {
        shifted[k] = params[k] + h;
        let fp = expectation(&evolve(circuit, &shifted, psi0)?, circuit.cost())?;
        shifted[k] = params[k] - h;
        let fm = expectation(&evolve(circuit, &shifted, psi0)?, circuit.cost())?;
        shifted[k] = params[k];
        grads[k] = (fp - fm) / (2.0 * h);
    }
    Ok(grads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixer::{fg_spec, ng_spec, MixerSpec};
    use crate::problems::{maxcut_hamiltonian, tfim_hamiltonian, ProblemInstance, WeightedGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
    }

    #[test]
    fn adjoint_matches_finite_differences_maxcut() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(2..=6);
            let edges: Vec<(usize, usize, f64)> = if n == 2 {
                vec![(0, 1, rng.gen_range(0.1..1.0))]
            } else {
                (0..n).map(|i| (i, (i + 1) % n, rng.gen_range(0.1..1.0))).collect()
            };
            let g = WeightedGraph::new(n, edges).unwrap();
            let mixer = if rng.gen_bool(0.5) { fg_spec(n) } else { ng_spec(n) };
            let p = rng.gen_range(1..=4);
            let c = CircuitSpec::uniform(maxcut_hamiltonian(&g), mixer, p).unwrap();
            let params: Vec<f64> =
                (0..c.num_parameters()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let psi0 = StateVector::plus_state(n);
            let adj = gradient(&c, &params, &psi0).unwrap();
            let fd = finite_difference_gradient(&c, &params, &psi0, 1e-5).unwrap();
            for (a, b) in adj.iter().zip(&fd) {
                assert!(rel_err(*a, *b) < 1e-5, "adjoint {a} vs fd {b}");
            }
        }
    }

    #[test]
    fn adjoint_matches_finite_differences_tfim() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..3 {
            let n = 4;
            let j: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
            let inst = ProblemInstance::tfim_ring(&j, rng.gen_range(0.1..2.0)).unwrap();
            let c = CircuitSpec::uniform(tfim_hamiltonian(&inst), fg_spec(n), 2).unwrap();
            let params: Vec<f64> =
                (0..c.num_parameters()).map(|_| rng.gen_range(-0.8..0.8)).collect();
            let psi0 = StateVector::plus_state(n);
            let adj = gradient(&c, &params, &psi0).unwrap();
            let fd = finite_difference_gradient(&c, &params, &psi0, 1e-5).unwrap();
            for (a, b) in adj.iter().zip(&fd) {
                assert!(rel_err(*a, *b) < 1e-5, "adjoint {a} vs fd {b}");
            }
        }
    }

    #[test]
    fn mixer_gradients_vanish_at_zero_angles() {
        // |+⟩^N is stationary for every β when α = 0; checked against the
        // finite-difference oracle.
        let g = WeightedGraph::new(4, vec![(0, 1, 0.6), (1, 2, 0.3), (2, 3, 0.8), (0, 3, 0.2)])
            .unwrap();
        let c = CircuitSpec::uniform(maxcut_hamiltonian(&g), ng_spec(4), 2).unwrap();
        let params = vec![0.0; c.num_parameters()];
        let psi0 = StateVector::plus_state(4);
        let adj = gradient(&c, &params, &psi0).unwrap();
        let fd = finite_difference_gradient(&c, &params, &psi0, 1e-5).unwrap();
        let mut off = 0;
        for layer in c.layers() {
            for j in 0..layer.num_parameters() {
                assert!(adj[off + 1 + j].abs() < 1e-10);
                assert!(fd[off + 1 + j].abs() < 1e-7);
            }
            off += 1 + layer.num_parameters();
        }
    }

    #[test]
    fn grouped_gradient_is_sum_of_ungrouped() {
        // Chain rule for tied parameters: the FG β-gradient equals the sum
        // of the NG β-gradients at the replicated angle vector.
        let g = WeightedGraph::new(3, vec![(0, 1, 0.7), (1, 2, 0.4)]).unwrap();
        let cost = maxcut_hamiltonian(&g);
        let fg = CircuitSpec::uniform(cost.clone(), fg_spec(3), 1).unwrap();
        let ng = CircuitSpec::uniform(cost, ng_spec(3), 1).unwrap();
        let psi0 = StateVector::plus_state(3);
        let fg_params = vec![0.37, -0.22];
        let ng_params = vec![0.37, -0.22, -0.22, -0.22];
        let gf = gradient(&fg, &fg_params, &psi0).unwrap();
        let gn = gradient(&ng, &ng_params, &psi0).unwrap();
        assert!((gf[0] - gn[0]).abs() < 1e-10);
        assert!((gf[1] - (gn[1] + gn[2] + gn[3])).abs() < 1e-10);
    }

    #[test]
    fn parameter_shift_agrees_with_adjoint_on_ng() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let g = WeightedGraph::new(2, vec![(0, 1, 0.9)]).unwrap();
        let c = CircuitSpec::uniform(maxcut_hamiltonian(&g), ng_spec(2), 3).unwrap();
        let params: Vec<f64> = (0..c.num_parameters()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let psi0 = StateVector::plus_state(2);
        let adj = gradient(&c, &params, &psi0).unwrap();
        let ps = parameter_shift_gradient(&c, &params, &psi0, 0.3).unwrap();
        for (a, b) in adj.iter().zip(&ps) {
            assert!((a - b).abs() < 1e-8, "adjoint {a} vs shift {b}");
        }
    }

    #[test]
    fn parameter_shift_rejects_degenerate_shift_and_multi_term() {
        let g = WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let c = CircuitSpec::uniform(maxcut_hamiltonian(&g), ng_spec(2), 1).unwrap();
        let psi0 = StateVector::plus_state(2);
        let params = vec![0.1, 0.2, 0.3];
        assert!(parameter_shift_gradient(&c, &params, &psi0, std::f64::consts::PI).is_err());
        // FG groups sum two strings → unsupported.
        let tri = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let cfg = CircuitSpec::uniform(maxcut_hamiltonian(&tri), fg_spec(3), 1).unwrap();
        let err =
            parameter_shift_gradient(&cfg, &vec![0.1; cfg.num_parameters()], &psi0, 0.3);
        assert!(matches!(err, Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn one_qubit_rx_objective_is_sine() {
        // Circuit e^{−iβX} on |0⟩ with ⟨Z⟩ objective: F(β) = cos 2β, so
        // ∂F/∂β = −2 sin 2β.
        use crate::pauli::{PauliLetter, PauliString, PauliSum, PauliTerm};
        let z = PauliSum::from_term(PauliTerm::real(PauliString::single(1, 0, PauliLetter::Z), 1.0));
        let x = PauliSum::from_term(PauliTerm::real(PauliString::single(1, 0, PauliLetter::X), 1.0));
        let c = CircuitSpec::layered(z, vec![MixerLayer::Generator(x)]).unwrap();
        let beta = 0.4;
        let params = vec![0.0, beta];
        let psi0 = StateVector::zero_state(1);
        let ps = parameter_shift_gradient(&c, &params, &psi0, 0.5).unwrap();
        assert!((ps[1] + 2.0 * (2.0 * beta).sin()).abs() < 1e-10);
        let adj = gradient(&c, &params, &psi0).unwrap();
        assert!((adj[1] + 2.0 * (2.0 * beta).sin()).abs() < 1e-10);
    }
}
