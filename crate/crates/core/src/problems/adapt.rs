//! ADAPT-QAOA: layer-by-layer greedy mixer selection from an operator pool
//! using the commutator-gradient criterion, re-optimizing after each pick.

use super::ProblemInstance;
use crate::error::{CoreError, Result};
use crate::pauli::{PauliLetter, PauliString, PauliSum, PauliTerm};
use crate::simulator::{evolve, optimize_from, CircuitSpec, MixerLayer, OptimizeOptions, OptimizeReport};
use crate::statevector::StateVector;

/// New layers start with this cost angle; the selection score is evaluated
/// at the same value.
const ALPHA_INIT: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct AdaptOutcome {
    pub circuit: CircuitSpec,
    pub report: OptimizeReport,
    /// Pool index chosen for each layer.
    pub selected: Vec<usize>,
}

/// {Σ X_i} ∪ {X_i}_i ∪ {Y_i}_i
pub fn default_adapt_pool(n: usize) -> Vec<PauliSum> {
    let mut pool = Vec::with_capacity(2 * n + 1);
    let mut xsum = PauliSum::zero(n);
    for q in 0..n {
        xsum.add_term(&PauliTerm::real(PauliString::single(n, q, PauliLetter::X), 1.0))
            .expect("consistent n");
    }
    pool.push(xsum);
    for q in 0..n {
        pool.push(PauliSum::from_term(PauliTerm::real(PauliString::single(n, q, PauliLetter::X), 1.0)));
    }
    for q in 0..n {
        pool.push(PauliSum::from_term(PauliTerm::real(PauliString::single(n, q, PauliLetter::Y), 1.0)));
    }
    pool
}

/// Selection score |⟨ψ| e^{iαH}[H, A] e^{−iαH} |ψ⟩| at α = ALPHA_INIT.
pub fn selection_score(cost: &PauliSum, op: &PauliSum, state: &StateVector) -> Result<f64> {
    let shifted = crate::simulator::apply_cost_evolution(state, ALPHA_INIT, cost)?;
    let hphi = shifted.apply_pauli_sum(cost)?;
    let aphi = shifted.apply_pauli_sum(op)?;
    // ⟨φ|[H,A]|φ⟩ = ⟨Hφ, Aφ⟩ − conj(…) = 2i·Im⟨Hφ, Aφ⟩
    Ok(2.0 * hphi.inner(&aphi).im.abs())
}

/// Grow a circuit up to `max_depth` layers, stopping once the best selection
/// score drops below `grad_threshold` (the first layer is always accepted).
pub fn adapt_qaoa(
    instance: &ProblemInstance,
    pool: &[PauliSum],
    max_depth: usize,
    grad_threshold: f64,
    opts: &OptimizeOptions,
) -> Result<AdaptOutcome> {
    if pool.is_empty() {
        return Err(CoreError::input("ADAPT needs a nonempty operator pool"));
    }
    let n = instance.num_qubits();
    for op in pool {
        if !op.is_hermitian() {
            return Err(CoreError::input("pool operators must be Hermitian"));
        }
        if op.num_qubits() != n {
            return Err(CoreError::Dimension { left: n, right: op.num_qubits() });
        }
    }
    if max_depth == 0 {
        return Err(CoreError::input("max_depth must be ≥ 1"));
    }

    let cost = instance.cost_hamiltonian();
    let psi0 = StateVector::plus_state(n);
    let mut layers: Vec<MixerLayer> = Vec::new();
    let mut params: Vec<f64> = Vec::new();
    let mut selected = Vec::new();
    let mut report: Option<OptimizeReport> = None;

    for depth in 1..=max_depth {
        let state = if layers.is_empty() {
            psi0.clone()
        } else {
            let circuit = CircuitSpec::layered(cost.clone(), layers.clone())?;
            evolve(&circuit, &params, &psi0)?
        };
        let mut best = (0usize, f64::NEG_INFINITY);
        for (j, op) in pool.iter().enumerate() {
            let score = selection_score(&cost, op, &state)?;
            if score > best.1 {
                best = (j, score);
            }
        }
        if depth > 1 && best.1 < grad_threshold {
            break;
        }
        selected.push(best.0);
        layers.push(MixerLayer::Generator(pool[best.0].clone()));
        params.push(ALPHA_INIT);
        params.push(0.0);

        let circuit = CircuitSpec::layered(cost.clone(), layers.clone())?;
        let r = optimize_from(&circuit, &psi0, params.clone(), opts)?;
        params = r.params.clone();
        report = Some(r);
    }

    let circuit = CircuitSpec::layered(cost.clone(), layers)?;
    Ok(AdaptOutcome {
        circuit,
        report: report.expect("at least one layer optimized"),
        selected,
    })
}
