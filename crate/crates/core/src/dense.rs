//! Dense-matrix helpers for small systems (N ≤ 10): exact exponentials and
//! eigenvalues via Hermitian eigendecomposition. These serve as the slow but
//! trustworthy route next to the statevector fast paths.

use crate::error::{CoreError, Result};
use crate::pauli::{PauliLetter, PauliSum};
use crate::statevector::StateVector;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Qubit cap for materializing 2^N × 2^N matrices.
pub const MAX_DENSE_QUBITS: usize = 10;

fn letter_matrix(l: PauliLetter) -> [[Complex64; 2]; 2] {
    let z = Complex64::ZERO;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match l {
        PauliLetter::I => [[one, z], [z, one]],
        PauliLetter::X => [[z, one], [one, z]],
        PauliLetter::Y => [[z, -i], [i, z]],
        PauliLetter::Z => [[one, z], [z, -one]],
    }
}

/// Materialize a Pauli sum as a dense matrix in the computational basis
/// (qubit 0 = least significant index bit).
pub fn to_matrix(h: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = h.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(CoreError::capacity(format!(
            "dense materialization limited to N ≤ {MAX_DENSE_QUBITS}, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for term in h.terms() {
        for col in 0..dim {
            // P|col⟩ = entry · |row⟩ with row/entry accumulated per qubit.
            let mut row = 0usize;
            let mut entry = term.coeff;
            for q in 0..n {
                let b = (col >> q) & 1;
                let lm = letter_matrix(term.string.letter(q));
                // The letter maps |b⟩ to lm[out][b]|out⟩; single-qubit Paulis
                // have exactly one nonzero per column.
                let (out, v) = if lm[0][b].norm() > 0.0 { (0usize, lm[0][b]) } else { (1usize, lm[1][b]) };
                row |= out << q;
                entry *= v;
            }
            m[(row, col)] += entry;
        }
    }
    Ok(m)
}

/// e^{scale·H} |v⟩ by Hermitian eigendecomposition of H.
pub fn expm_apply(h: &DMatrix<Complex64>, scale: Complex64, v: &[Complex64]) -> Vec<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let vec = DVector::from_column_slice(v);
    let mut coeffs = eig.eigenvectors.adjoint() * vec;
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        coeffs[k] *= (scale * Complex64::new(*lambda, 0.0)).exp();
    }
    let out = &eig.eigenvectors * coeffs;
    out.as_slice().to_vec()
}

/// Exact e^{-iα H}|ψ⟩ for a Pauli-sum Hamiltonian at dense scale.
pub fn evolve_dense(h: &PauliSum, alpha: f64, psi: &StateVector) -> Result<StateVector> {
    let m = to_matrix(h)?;
    let out = expm_apply(&m, Complex64::new(0.0, -alpha), psi.amplitudes());
    Ok(StateVector::from_raw(psi.num_qubits(), out))
}

/// Smallest eigenvalue of a Hermitian Pauli sum at dense scale.
pub fn min_eigenvalue(h: &PauliSum) -> Result<f64> {
    let m = to_matrix(h)?;
    let eig = m.symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}
