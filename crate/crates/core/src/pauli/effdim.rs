//! Effective dimension: the smallest subspace containing the initial state
//! and invariant under every ansatz generator.

use super::PauliSum;
use crate::error::{CoreError, Result};
use crate::statevector::StateVector;
use num_complex::Complex64;

/// Parameter-grouping family an ansatz design belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignLabel {
    /// Fully grouped: the two generators {H_M, H_C}.
    Fg,
    /// Partially grouped: one generator per symmetry orbit.
    Pg,
    /// Non-grouped: every single term is its own generator.
    Ng,
    Custom,
}

impl std::fmt::Display for DesignLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignLabel::Fg => write!(f, "FG"),
            DesignLabel::Pg => write!(f, "PG"),
            DesignLabel::Ng => write!(f, "NG"),
            DesignLabel::Custom => write!(f, "custom"),
        }
    }
}

/// A set of Hermitian generators defining a parameterized circuit family.
#[derive(Debug, Clone)]
pub struct AnsatzDesign {
    label: DesignLabel,
    generators: Vec<PauliSum>,
}

impl AnsatzDesign {
    pub fn new(label: DesignLabel, generators: Vec<PauliSum>) -> Result<Self> {
        let n = match generators.first() {
            Some(g) => g.num_qubits(),
            None => return Err(CoreError::input("ansatz design needs at least one generator")),
        };
        for g in &generators {
            if g.num_qubits() != n {
                return Err(CoreError::Dimension { left: n, right: g.num_qubits() });
            }
            if !g.is_hermitian() {
                return Err(CoreError::input("ansatz generators must be Hermitian"));
            }
        }
        if label == DesignLabel::Fg && generators.len() != 2 {
            return Err(CoreError::input("FG design has exactly the two generators {H_M, H_C}"));
        }
        if label == DesignLabel::Ng && generators.iter().any(|g| g.num_terms() != 1) {
            return Err(CoreError::input("NG design generators must be single Pauli terms"));
        }
        Ok(AnsatzDesign { label, generators })
    }

    pub fn label(&self) -> DesignLabel {
        self.label
    }

    pub fn generators(&self) -> &[PauliSum] {
        &self.generators
    }

    pub fn num_qubits(&self) -> usize {
        self.generators[0].num_qubits()
    }
}

/// Qubit cap for the dense-statevector subspace iteration.
pub const MAX_EFFDIM_QUBITS: usize = 14;

/// Orthonormal basis of the minimal generator-invariant subspace containing
/// `psi0`, grown by repeatedly applying each generator and orthogonalizing.
pub fn invariant_subspace(
    design: &AnsatzDesign,
    psi0: &StateVector,
    tol: f64,
) -> Result<Vec<StateVector>> {
    let n = design.num_qubits();
    if n > MAX_EFFDIM_QUBITS {
        return Err(CoreError::capacity(format!(
            "effective dimension limited to N ≤ {MAX_EFFDIM_QUBITS}, got {n}"
        )));
    }
    if psi0.num_qubits() != n {
        return Err(CoreError::Dimension { left: n, right: psi0.num_qubits() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(CoreError::input(format!("psi0 not normalized: |ψ| = {}", psi0.norm())));
    }

    let dim = 1usize << n;
    let mut basis: Vec<StateVector> = vec![psi0.clone()];
    let mut cursor = 0usize;
    let mut rounds = 0usize;
    while cursor < basis.len() {
        rounds += 1;
        if rounds > dim * design.generators().len() + 1 {
            return Err(CoreError::numeric("invariant subspace iteration failed to settle"));
        }
        let v = basis[cursor].clone();
        for g in design.generators() {
            let mut w = v.apply_pauli_sum(g)?;
            let nrm = w.norm();
            if nrm < 1e-14 {
                continue;
            }
            w.scale(Complex64::new(1.0 / nrm, 0.0));
            if let Some(fresh) = orthogonalize(&mut w, &basis, tol) {
                basis.push(fresh);
                if basis.len() > dim {
                    return Err(CoreError::numeric("invariant subspace exceeded 2^N vectors"));
                }
            }
        }
        cursor += 1;
    }
    Ok(basis)
}

/// Dimension of the minimal invariant subspace (Definition of d_eff).
pub fn effective_dimension(design: &AnsatzDesign, psi0: &StateVector, tol: f64) -> Result<usize> {
    Ok(invariant_subspace(design, psi0, tol)?.len())
}

/// Twice-applied modified Gram–Schmidt against `basis`. Returns the
/// normalized residual if its norm stays above `tol`, else `None`.
fn orthogonalize(w: &mut StateVector, basis: &[StateVector], tol: f64) -> Option<StateVector> {
    for _ in 0..2 {
        for b in basis {
            let c = b.inner(w);
            w.axpy(-c, b);
        }
    }
    let nrm = w.norm();
    if nrm > tol {
        w.scale(Complex64::new(1.0 / nrm, 0.0));
        Some(w.clone())
    } else {
        None
    }
}

/// Squared norm of the projection of `v` onto the span of `basis`; used to
/// test whether e.g. the ground state lies inside the invariant subspace.
pub fn projection_weight(basis: &[StateVector], v: &StateVector) -> f64 {
    basis.iter().map(|b| b.inner(v).norm_sqr()).sum()
}
