//! Exact statevector QAOA engine: layered evolution, expectation values,
//! analytic gradients and Adam optimization.
//!
//! A circuit is a sequence of layers; each layer applies the cost evolution
//! e^{−iα H_C} followed by a mixer evolution. Most circuits repeat one
//! grouped mixer every layer; adaptive circuits attach a single pool
//! operator per layer instead, which is why layers carry their own mixer.

pub mod gradient;
pub mod krylov;
mod optimize;

pub use gradient::{gradient, parameter_shift_gradient};
pub use optimize::{optimize, optimize_from, OptimizeOptions, OptimizeReport};

use crate::error::{CoreError, Result};
use crate::mixer::MixerSpec;
use crate::pauli::PauliSum;
use crate::statevector::{diagonal_values, StateVector};
use rand::Rng;

/// Mixer applied inside one circuit layer.
#[derive(Debug, Clone, PartialEq)]
pub enum MixerLayer {
    /// Typed single-qubit operators tied into K parameter groups; all terms
    /// commute, so the layer factorizes into per-qubit rotations.
    Grouped(MixerSpec),
    /// One Hermitian generator with a single angle (adaptive circuits).
    Generator(PauliSum),
}

impl MixerLayer {
    /// Trainable angles this layer contributes.
    pub fn num_parameters(&self) -> usize {
        match self {
            MixerLayer::Grouped(spec) => spec.group_count(),
            MixerLayer::Generator(_) => 1,
        }
    }
}

/// A layered QAOA program: cost Hamiltonian plus per-layer mixers.
#[derive(Debug, Clone)]
pub struct CircuitSpec {
    n: usize,
    cost: PauliSum,
    layers: Vec<MixerLayer>,
    /// Eigenvalue table of the cost when it is diagonal.
    diag: Option<Vec<f64>>,
}

impl CircuitSpec {
    /// The standard circuit: the same grouped mixer in every one of `p` layers.
    pub fn uniform(cost: PauliSum, mixer: MixerSpec, p: usize) -> Result<Self> {
        if mixer.num_qubits() != cost.num_qubits() {
            return Err(CoreError::Dimension { left: cost.num_qubits(), right: mixer.num_qubits() });
        }
        Self::layered(cost, vec![MixerLayer::Grouped(mixer); p])
    }

    pub fn layered(cost: PauliSum, layers: Vec<MixerLayer>) -> Result<Self> {
        let n = cost.num_qubits();
        if layers.is_empty() {
            return Err(CoreError::input("circuit depth p must be ≥ 1"));
        }
        if !cost.is_hermitian() {
            return Err(CoreError::input("cost Hamiltonian must be Hermitian"));
        }
        for layer in &layers {
            let ln = match layer {
                MixerLayer::Grouped(spec) => spec.num_qubits(),
                MixerLayer::Generator(g) => {
                    if !g.is_hermitian() {
                        return Err(CoreError::input("mixer generator must be Hermitian"));
                    }
                    g.num_qubits()
                }
            };
            if ln != n {
                return Err(CoreError::Dimension { left: n, right: ln });
            }
        }
        let diag = if cost.is_diagonal() { Some(diagonal_values(&cost)?) } else { None };
        Ok(CircuitSpec { n, cost, layers, diag })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn cost(&self) -> &PauliSum {
        &self.cost
    }

    pub fn layers(&self) -> &[MixerLayer] {
        &self.layers
    }

    pub fn is_diagonal_cost(&self) -> bool {
        self.diag.is_some()
    }

    /// The shared mixer spec of a uniform circuit, if there is one.
    pub fn uniform_mixer(&self) -> Option<&MixerSpec> {
        match &self.layers[0] {
            MixerLayer::Grouped(spec)
                if self
                    .layers
                    .iter()
                    .all(|l| matches!(l, MixerLayer::Grouped(s) if s == spec)) =>
            {
                Some(spec)
            }
            _ => None,
        }
    }

    /// Total trainable angles: Σ over layers of (1 + K_layer).
    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| 1 + l.num_parameters()).sum()
    }

    pub fn validate_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_parameters() {
            return Err(CoreError::input(format!(
                "expected {} parameters, got {}",
                self.num_parameters(),
                params.len()
            )));
        }
        Ok(())
    }

    fn apply_cost(&self, state: &mut StateVector, alpha: f64) -> Result<()> {
        if let Some(diag) = &self.diag {
            state.phase_diagonal(alpha, diag);
        } else {
            *state = krylov::expv(&self.cost, alpha, state)?;
        }
        Ok(())
    }

    fn apply_mixer(&self, state: &mut StateVector, layer: &MixerLayer, betas: &[f64]) -> Result<()> {
        match layer {
            MixerLayer::Grouped(spec) => {
                for q in 0..self.n {
                    state.rotate(q, spec.types()[q].letter(), betas[spec.group_of(q)]);
                }
            }
            MixerLayer::Generator(g) => {
                if g.is_commuting_single_qubit() {
                    for term in g.terms() {
                        let q = (term.string.flip_mask() | term.string.phase_mask())
                            .trailing_zeros() as usize;
                        state.rotate(q, term.string.letter(q), betas[0] * term.coeff.re);
                    }
                } else {
                    *state = krylov::expv(g, betas[0], state)?;
                }
            }
        }
        Ok(())
    }
}

/// e^{−iα H_C}|ψ⟩ as a standalone operation (diagonal fast path, Krylov
/// otherwise).
pub fn apply_cost_evolution(state: &StateVector, alpha: f64, cost: &PauliSum) -> Result<StateVector> {
    if !cost.is_hermitian() {
        return Err(CoreError::input("cost Hamiltonian must be Hermitian"));
    }
    let mut out = state.clone();
    if cost.is_diagonal() {
        let diag = diagonal_values(cost)?;
        out.phase_diagonal(alpha, &diag);
    } else {
        out = krylov::expv(cost, alpha, &out)?;
    }
    Ok(out)
}

/// Apply one grouped mixer layer: the rotation e^{−iβ_j P_i} on each qubit i
/// of group j (all operators act on distinct qubits and commute).
pub fn apply_mixer_layer(state: &StateVector, betas: &[f64], mixer: &MixerSpec) -> Result<StateVector> {
    if mixer.num_qubits() != state.num_qubits() {
        return Err(CoreError::Dimension { left: state.num_qubits(), right: mixer.num_qubits() });
    }
    if betas.len() != mixer.group_count() {
        return Err(CoreError::input(format!(
            "expected {} group angles, got {}",
            mixer.group_count(),
            betas.len()
        )));
    }
    let mut out = state.clone();
    for q in 0..mixer.num_qubits() {
        out.rotate(q, mixer.types()[q].letter(), betas[mixer.group_of(q)]);
    }
    Ok(out)
}

/// Layered evolution of Eq-style circuits: per layer, cost evolution first,
/// then the mixer.
pub fn evolve(circuit: &CircuitSpec, params: &[f64], psi0: &StateVector) -> Result<StateVector> {
    circuit.validate_params(params)?;
    if psi0.num_qubits() != circuit.num_qubits() {
        return Err(CoreError::Dimension { left: circuit.num_qubits(), right: psi0.num_qubits() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(CoreError::input("psi0 must be normalized"));
    }
    let mut state = psi0.clone();
    let mut off = 0usize;
    for layer in circuit.layers() {
        let alpha = params[off];
        off += 1;
        circuit.apply_cost(&mut state, alpha)?;
        let k = layer.num_parameters();
        circuit.apply_mixer(&mut state, layer, &params[off..off + k])?;
        off += k;
    }
    Ok(state)
}

/// ⟨ψ|H|ψ⟩ for Hermitian H (diagonal fast path inside).
pub fn expectation(state: &StateVector, h: &PauliSum) -> Result<f64> {
    if !h.is_hermitian() {
        return Err(CoreError::input("expectation requires a Hermitian operator"));
    }
    if h.is_diagonal() {
        let diag = diagonal_values(h)?;
        return Ok(state
            .amplitudes()
            .iter()
            .zip(&diag)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum());
    }
    state.expectation(h)
}

/// Loss of a circuit at a parameter point: ⟨H_C⟩ after evolution.
pub fn loss(circuit: &CircuitSpec, params: &[f64], psi0: &StateVector) -> Result<f64> {
    let state = evolve(circuit, params, psi0)?;
    expectation(&state, circuit.cost())
}

/// Sample a measurement outcome from a prepared state.
pub fn sample_bitstring(state: &StateVector, rng: &mut impl Rng) -> Vec<u8> {
    state.sample_bits(rng)
}
