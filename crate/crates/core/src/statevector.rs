//! Dense 2^N-amplitude state vectors and Pauli actions on them.
//!
//! Basis-index convention: qubit `i` is bit `i` of the index, so qubit 0 is
//! the least significant bit. The spin value of bit b is s = 1 − 2b.

use crate::error::{CoreError, Result};
use crate::pauli::{PauliLetter, PauliSum};
use num_complex::Complex64;
use rand::Rng;

/// Hard cap on exact simulation size.
pub const MAX_SIM_QUBITS: usize = 22;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩
    pub fn zero_state(n: usize) -> Self {
        assert!(n <= MAX_SIM_QUBITS, "n = {n} exceeds exact-simulation cap");
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// |+⟩^⊗N, the uniform superposition used as the QAOA initial state.
    pub fn plus_state(n: usize) -> Self {
        assert!(n <= MAX_SIM_QUBITS, "n = {n} exceeds exact-simulation cap");
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector { n, amps: vec![a; dim] }
    }

    /// Wrap raw amplitudes; the squared-amplitude sum must be 1 within 1e-9.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(CoreError::input(format!(
                "expected {} amplitudes for {n} qubits, got {}",
                1usize << n,
                amps.len()
            )));
        }
        let sv = StateVector { n, amps };
        if (sv.norm() - 1.0).abs() > 1e-9 {
            return Err(CoreError::input(format!("state not normalized: |ψ| = {}", sv.norm())));
        }
        Ok(sv)
    }

    /// Unnormalized constructor for intermediate vectors (subspace bases,
    /// H·ψ products).
    pub fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n);
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let nrm = self.norm();
        if nrm > 0.0 {
            let inv = 1.0 / nrm;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
    }

    /// ⟨self|other⟩ with the physics convention (conjugate on the left).
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn axpy(&mut self, factor: Complex64, other: &StateVector) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Apply the rotation e^{-iβP} on qubit `q` for P ∈ {X, Y} in place.
    ///
    /// e^{-iβX} = [[cos β, −i sin β], [−i sin β, cos β]]
    /// e^{-iβY} = [[cos β, −sin β], [sin β, cos β]]
    pub fn rotate(&mut self, q: usize, letter: PauliLetter, beta: f64) {
        debug_assert!(q < self.n);
        let (c, s) = (beta.cos(), beta.sin());
        let (m01, m10) = match letter {
            PauliLetter::X => (Complex64::new(0.0, -s), Complex64::new(0.0, -s)),
            PauliLetter::Y => (Complex64::new(-s, 0.0), Complex64::new(s, 0.0)),
            PauliLetter::Z => {
                // diagonal: e^{-iβ} on bit 0... handled separately for speed
                let p0 = Complex64::from_polar(1.0, -beta);
                let p1 = Complex64::from_polar(1.0, beta);
                let bit = 1usize << q;
                for (idx, a) in self.amps.iter_mut().enumerate() {
                    *a *= if idx & bit == 0 { p0 } else { p1 };
                }
                return;
            }
            PauliLetter::I => return,
        };
        let cc = Complex64::new(c, 0.0);
        let bit = 1usize << q;
        let dim = self.amps.len();
        let mut base = 0usize;
        while base < dim {
            for lo in base..base + bit {
                let hi = lo | bit;
                let a0 = self.amps[lo];
                let a1 = self.amps[hi];
                self.amps[lo] = cc * a0 + m01 * a1;
                self.amps[hi] = m10 * a0 + cc * a1;
            }
            base += bit << 1;
        }
    }

    /// Multiply each amplitude by e^{-iα·diag[z]}.
    pub fn phase_diagonal(&mut self, alpha: f64, diag: &[f64]) {
        debug_assert_eq!(diag.len(), self.amps.len());
        for (a, d) in self.amps.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, -alpha * d);
        }
    }

    /// Multiply each amplitude by diag[z] (real diagonal operator).
    pub fn mul_diagonal(&mut self, diag: &[f64]) {
        for (a, d) in self.amps.iter_mut().zip(diag) {
            *a *= *d;
        }
    }

    /// H|ψ⟩ for a Pauli sum H, as a fresh vector.
    pub fn apply_pauli_sum(&self, h: &PauliSum) -> Result<StateVector> {
        if h.num_qubits() != self.n {
            return Err(CoreError::Dimension { left: self.n, right: h.num_qubits() });
        }
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for term in h.terms() {
            let flip = term.string.flip_mask() as usize;
            let phase_mask = term.string.phase_mask() as usize;
            // P|z⟩ = i^{#Y} (−1)^{popcount(z & phase_mask)} |z XOR flip⟩
            let ybase = match term.string.y_count() % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let c = term.coeff * ybase;
            for (z, a) in self.amps.iter().enumerate() {
                let sign = if ((z & phase_mask).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                out[z ^ flip] += c * sign * a;
            }
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    /// ⟨ψ|H|ψ⟩ for Hermitian H.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if !h.is_hermitian() {
            return Err(CoreError::input("expectation requires a Hermitian operator"));
        }
        let hpsi = self.apply_pauli_sum(h)?;
        Ok(self.inner(&hpsi).re)
    }

    /// Sample a computational-basis outcome with Born probabilities.
    pub fn sample_bits(&self, rng: &mut impl Rng) -> Vec<u8> {
        let u: f64 = rng.gen::<f64>();
        let mut acc = 0.0;
        let mut hit = self.amps.len() - 1;
        for (z, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                hit = z;
                break;
            }
        }
        (0..self.n).map(|q| ((hit >> q) & 1) as u8).collect()
    }
}

/// Eigenvalue table of a diagonal Pauli sum: diag[z] = ⟨z|H|z⟩.
pub fn diagonal_values(h: &PauliSum) -> Result<Vec<f64>> {
    if !h.is_diagonal() {
        return Err(CoreError::input("operator is not diagonal (contains X/Y letters)"));
    }
    if !h.is_hermitian() {
        return Err(CoreError::input("diagonal table requires a Hermitian operator"));
    }
    let dim = 1usize << h.num_qubits();
    let mut diag = vec![0.0f64; dim];
    for term in h.terms() {
        let mask = term.string.phase_mask() as usize;
        let c = term.coeff.re;
        for (z, d) in diag.iter_mut().enumerate() {
            if ((z & mask).count_ones()) % 2 == 0 {
                *d += c;
            } else {
                *d -= c;
            }
        }
    }
    Ok(diag)
}
