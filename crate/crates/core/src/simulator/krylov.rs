//! Hermitian Lanczos methods: exp(−iαH)|ψ⟩ to a residual tolerance, and
//! extremal eigenvalues. The matrix only appears through Pauli-sum products.

use crate::dense;
use crate::error::{CoreError, Result};
use crate::pauli::PauliSum;
use crate::statevector::StateVector;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Krylov subspace cap per segment.
pub const MAX_KRYLOV_DIM: usize = 64;
/// Memory cap: the basis stores up to MAX_KRYLOV_DIM vectors of 2^N amplitudes.
pub const MAX_KRYLOV_QUBITS: usize = 16;
/// Residual tolerance for the matrix exponential.
pub const EXPV_TOL: f64 = 1e-10;

/// e^{−iαH}|ψ⟩ for Hermitian H. Lanczos with on-the-fly residual estimate;
/// on stagnation the angle is split into segments and retried, with a dense
/// fallback at N ≤ 10.
pub fn expv(h: &PauliSum, alpha: f64, psi: &StateVector) -> Result<StateVector> {
    if !h.is_hermitian() {
        return Err(CoreError::input("exponential requires a Hermitian generator"));
    }
    if h.num_qubits() != psi.num_qubits() {
        return Err(CoreError::Dimension { left: h.num_qubits(), right: psi.num_qubits() });
    }
    if h.num_qubits() > MAX_KRYLOV_QUBITS {
        return Err(CoreError::capacity(format!(
            "non-diagonal evolution limited to N ≤ {MAX_KRYLOV_QUBITS}, got {}",
            h.num_qubits()
        )));
    }
    if alpha == 0.0 || h.is_zero() {
        return Ok(psi.clone());
    }
    let mut segments = 1usize;
    while segments <= 64 {
        match expv_segments(h, alpha, psi, segments) {
            Ok(out) => return Ok(out),
            Err(_) => segments *= 2,
        }
    }
    if h.num_qubits() <= dense::MAX_DENSE_QUBITS {
        return dense::evolve_dense(h, alpha, psi);
    }
    Err(CoreError::numeric("Krylov exponential failed to converge"))
}

fn expv_segments(h: &PauliSum, alpha: f64, psi: &StateVector, segments: usize) -> Result<StateVector> {
    let step = alpha / segments as f64;
    let mut state = psi.clone();
    for _ in 0..segments {
        state = expv_once(h, step, &state)?;
    }
    Ok(state)
}

fn expv_once(h: &PauliSum, alpha: f64, psi: &StateVector) -> Result<StateVector> {
    let beta0 = psi.norm();
    if beta0 < 1e-300 {
        return Ok(psi.clone());
    }
    let n = psi.num_qubits();
    let mut q = psi.clone();
    q.scale(Complex64::new(1.0 / beta0, 0.0));

    let mut basis: Vec<StateVector> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    for m in 0..MAX_KRYLOV_DIM {
        let mut w = basis[m].apply_pauli_sum(h)?;
        if m > 0 {
            w.axpy(Complex64::new(-betas[m - 1], 0.0), &basis[m - 1]);
        }
        let a = basis[m].inner(&w).re;
        alphas.push(a);
        w.axpy(Complex64::new(-a, 0.0), &basis[m]);
        // One reorthogonalization sweep keeps the small basis clean.
        for b in &basis {
            let c = b.inner(&w);
            w.axpy(-c, b);
        }
        let b = w.norm();

        // Residual estimate: β_{m+1} · |last entry of exp(−iαT) e₁|.
        let u = expm_tridiag(&alphas, &betas, alpha);
        let happy = b < 1e-13;
        if happy || b * u[m].norm() < EXPV_TOL {
            let mut out = StateVector::from_raw(n, vec![Complex64::ZERO; 1 << n]);
            for (k, bk) in basis.iter().enumerate() {
                out.axpy(u[k] * beta0, bk);
            }
            return Ok(out);
        }
        betas.push(b);
        w.scale(Complex64::new(1.0 / b, 0.0));
        basis.push(w);
    }
    Err(CoreError::numeric("Krylov subspace cap reached"))
}

/// exp(−iα T) e₁ for the real symmetric tridiagonal T given by diagonal
/// `alphas` and off-diagonal `betas`.
fn expm_tridiag(alphas: &[f64], betas: &[f64], alpha: f64) -> Vec<Complex64> {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    // u = V exp(−iαΛ) Vᵀ e₁
    let mut u = vec![Complex64::ZERO; m];
    for k in 0..m {
        let lambda = eig.eigenvalues[k];
        let phase = Complex64::from_polar(1.0, -alpha * lambda);
        let v_k1 = eig.eigenvectors[(0, k)];
        for (i, ui) in u.iter_mut().enumerate() {
            *ui += eig.eigenvectors[(i, k)] * phase * v_k1;
        }
    }
    u
}

/// Smallest eigenvalue via plain three-term Lanczos (no basis storage),
/// stopping when the extremal Ritz value stagnates below 1e-11 relative.
/// Runs from two random starts and keeps the minimum.
pub fn lanczos_min_eigenvalue(h: &PauliSum) -> Result<f64> {
    let n = h.num_qubits();
    let dim = 1usize << n;
    let mut best = f64::INFINITY;
    for seed in [0x51ab_c0de_u64, 0x51ab_c0df] {
        best = best.min(lanczos_min_once(h, dim, seed)?);
    }
    Ok(best)
}

fn lanczos_min_once(h: &PauliSum, dim: usize, seed: u64) -> Result<f64> {
    let n = h.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut q = StateVector::from_raw(n, amps);
    q.normalize();

    let max_iter = dim.min(400);
    let mut q_prev: Option<StateVector> = None;
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last_theta = f64::INFINITY;
    let mut stagnant = 0usize;

    for m in 0..max_iter {
        let mut w = q.apply_pauli_sum(h)?;
        if let Some(prev) = &q_prev {
            w.axpy(Complex64::new(-betas[m - 1], 0.0), prev);
        }
        let a = q.inner(&w).re;
        alphas.push(a);
        w.axpy(Complex64::new(-a, 0.0), &q);
        let b = w.norm();
        if b < 1e-13 {
            break; // Krylov space exhausted; T is exact on it.
        }
        if (m + 1) % 10 == 0 || m + 1 == max_iter {
            let theta = tridiag_min_eigenvalue(&alphas, &betas);
            if (last_theta - theta).abs() < 1e-11 * theta.abs().max(1.0) {
                stagnant += 1;
                if stagnant >= 3 {
                    return Ok(theta);
                }
            } else {
                stagnant = 0;
            }
            last_theta = theta;
        }
        betas.push(b);
        w.scale(Complex64::new(1.0 / b, 0.0));
        q_prev = Some(std::mem::replace(&mut q, w));
    }
    if alphas.is_empty() {
        return Err(CoreError::numeric("Lanczos produced no iterations"));
    }
    Ok(tridiag_min_eigenvalue(&alphas, &betas))
}

fn tridiag_min_eigenvalue(alphas: &[f64], betas: &[f64]) -> f64 {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m && i < betas.len() {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliLetter, PauliString, PauliTerm};
    use crate::problems::{tfim_hamiltonian, ProblemInstance};

    #[test]
    fn expv_identity_at_zero_angle() {
        let inst = ProblemInstance::tfim_ring(&[1.0, 1.0, 1.0], 0.7).unwrap();
        let h = tfim_hamiltonian(&inst);
        let psi = StateVector::plus_state(3);
        let out = expv(&h, 0.0, &psi).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn expv_matches_dense_on_tfim() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let j: Vec<f64> = (0..4).map(|_| rng.gen_range(0.5..1.5)).collect();
            let h_field = rng.gen_range(0.1..2.0);
            let inst = ProblemInstance::tfim_ring(&j, h_field).unwrap();
            let h = tfim_hamiltonian(&inst);
            let alpha = rng.gen_range(-1.5..1.5);
            let psi = StateVector::plus_state(4);
            let fast = expv(&h, alpha, &psi).unwrap();
            let slow = dense::evolve_dense(&h, alpha, &psi).unwrap();
            let dist: f64 = fast
                .amplitudes()
                .iter()
                .zip(slow.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(dist < 1e-8, "Krylov vs dense distance {dist}");
        }
    }

    #[test]
    fn expv_preserves_norm() {
        let inst = ProblemInstance::tfim_ring(&[1.3, 0.6, 0.9, 1.1, 0.8], 1.4).unwrap();
        let h = tfim_hamiltonian(&inst);
        let psi = StateVector::plus_state(5);
        let out = expv(&h, 2.1, &psi).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ground_energy_of_x_sum() {
        // −ΣX on n qubits has ground energy −n.
        let n = 5;
        let mut h = PauliSum::zero(n);
        for q in 0..n {
            h.add_term(&PauliTerm::real(PauliString::single(n, q, PauliLetter::X), -1.0))
                .unwrap();
        }
        let e = lanczos_min_eigenvalue(&h).unwrap();
        assert!((e + n as f64).abs() < 1e-9, "got {e}");
    }
}
