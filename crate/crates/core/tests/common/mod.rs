//! Independent dense oracles built straight from 2×2 Pauli matrices and
//! Kronecker products, sharing no code with the engine's bit-mask paths.

use mixgen_core::pauli::{PauliLetter, PauliSum};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn pauli_matrix(l: PauliLetter) -> DMatrix<Complex64> {
    let z = Complex64::ZERO;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match l {
        PauliLetter::I => DMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        PauliLetter::X => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        PauliLetter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliLetter::Z => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// Kronecker product ordered so qubit 0 is the least significant index bit:
/// string L_0 L_1 … maps to L_{n−1} ⊗ … ⊗ L_0.
pub fn sum_to_matrix(h: &PauliSum) -> DMatrix<Complex64> {
    let n = h.num_qubits();
    let dim = 1usize << n;
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for term in h.terms() {
        let mut m = DMatrix::<Complex64>::identity(1, 1);
        for q in (0..n).rev() {
            m = m.kronecker(&pauli_matrix(term.string.letter(q)));
        }
        out += m * term.coeff;
    }
    out
}

/// e^{−iαH} as a dense unitary via Hermitian eigendecomposition.
pub fn dense_unitary(h: &DMatrix<Complex64>, alpha: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let mut d = DMatrix::<Complex64>::zeros(h.nrows(), h.ncols());
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        d[(k, k)] = Complex64::from_polar(1.0, -alpha * lambda);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Numerical rank of the span of nested commutators of dense generators
/// (matrices vectorized, Gram–Schmidt with a 1e-9 drop tolerance).
pub fn closure_rank_oracle(generators: &[DMatrix<Complex64>], cap: usize) -> usize {
    let vectorize = |m: &DMatrix<Complex64>| -> Vec<Complex64> { m.iter().copied().collect() };
    let mut basis_mats: Vec<DMatrix<Complex64>> = Vec::new();
    let mut basis_vecs: Vec<Vec<Complex64>> = Vec::new();

    let mut try_add = |m: DMatrix<Complex64>,
                       basis_mats: &mut Vec<DMatrix<Complex64>>,
                       basis_vecs: &mut Vec<Vec<Complex64>>|
     -> bool {
        let mut v = vectorize(&m);
        let scale = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if scale < 1e-12 {
            return false;
        }
        for _ in 0..2 {
            for b in basis_vecs.iter() {
                let proj: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi -= proj * bi;
                }
            }
        }
        let residual = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if residual > 1e-9 * scale.max(1.0) {
            let inv = Complex64::new(1.0 / residual, 0.0);
            for vi in v.iter_mut() {
                *vi *= inv;
            }
            basis_vecs.push(v);
            basis_mats.push(m);
            true
        } else {
            false
        }
    };

    for g in generators {
        try_add(g.clone(), &mut basis_mats, &mut basis_vecs);
    }
    let mut frontier = 0usize;
    while frontier < basis_mats.len() && basis_mats.len() <= cap {
        let a = basis_mats[frontier].clone();
        for k in 0..frontier {
            let b = &basis_mats[k];
            let comm = &a * b - b * &a;
            try_add(comm, &mut basis_mats, &mut basis_vecs);
        }
        frontier += 1;
    }
    basis_mats.len()
}
