//! Symbolic N-qubit Pauli-string algebra.
//!
//! A [`PauliString`] is a tensor product of single-qubit operators from
//! {I, X, Y, Z}, stored as an (x, z) bit-mask pair: qubit `i` carries X iff
//! bit `i` of `x` is set, Z iff bit `i` of `z` is set, and Y iff both are.
//! A [`PauliSum`] is a linear combination of strings with complex
//! coefficients, the carrier for Hamiltonians and Lie-closure elements.

mod automorphism;
mod closure;
mod effdim;

pub use automorphism::{automorphism_orbits, OrbitPartition};
pub use closure::{dla_dimension, lie_closure};
pub use effdim::{effective_dimension, invariant_subspace, projection_weight, AnsatzDesign, DesignLabel};

use crate::error::{CoreError, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Largest qubit count representable by the bit-mask encoding.
pub const MAX_QUBITS: usize = 63;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(PauliLetter::I),
            'X' | 'x' => Ok(PauliLetter::X),
            'Y' | 'y' => Ok(PauliLetter::Y),
            'Z' | 'z' => Ok(PauliLetter::Z),
            _ => Err(CoreError::input(format!("invalid Pauli letter '{c}'"))),
        }
    }
}

/// A tensor product of Pauli letters over `n` qubits, without coefficient.
///
/// Qubit `i` maps to bit `i` of the masks (qubit 0 is the least significant
/// bit of a computational-basis index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: u64,
    z: u64,
    n: usize,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "qubit count {n} exceeds {MAX_QUBITS}");
        PauliString { x: 0, z: 0, n }
    }

    /// Build from explicit letters, one per qubit.
    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        assert!(letters.len() <= MAX_QUBITS);
        let mut x = 0u64;
        let mut z = 0u64;
        for (i, l) in letters.iter().enumerate() {
            match l {
                PauliLetter::I => {}
                PauliLetter::X => x |= 1 << i,
                PauliLetter::Y => {
                    x |= 1 << i;
                    z |= 1 << i;
                }
                PauliLetter::Z => z |= 1 << i,
            }
        }
        PauliString { x, z, n: letters.len() }
    }

    /// Parse a string like `"ZZII"` (leftmost character is qubit 0).
    pub fn parse(s: &str) -> Result<Self> {
        let letters: Result<Vec<_>> = s.chars().map(PauliLetter::from_char).collect();
        let letters = letters?;
        if letters.len() > MAX_QUBITS {
            return Err(CoreError::capacity(format!("{} letters exceeds {MAX_QUBITS}", letters.len())));
        }
        Ok(PauliString::from_letters(&letters))
    }

    /// A single non-identity letter on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: PauliLetter) -> Self {
        assert!(q < n && n <= MAX_QUBITS);
        let mut s = PauliString::identity(n);
        match letter {
            PauliLetter::I => {}
            PauliLetter::X => s.x |= 1 << q,
            PauliLetter::Y => {
                s.x |= 1 << q;
                s.z |= 1 << q;
            }
            PauliLetter::Z => s.z |= 1 << q,
        }
        s
    }

    /// Z on qubits `a` and `b`, identity elsewhere.
    pub fn zz(n: usize, a: usize, b: usize) -> Self {
        assert!(a < n && b < n && a != b);
        PauliString { x: 0, z: (1 << a) | (1 << b), n }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        let x = (self.x >> q) & 1 == 1;
        let z = (self.z >> q) & 1 == 1;
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Contains only I and Z letters, i.e. diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Bit mask of qubits that flip under this string (X or Y letters).
    pub fn flip_mask(&self) -> u64 {
        self.x
    }

    /// Bit mask of qubits that contribute a (−1)^bit phase (Z or Y letters).
    pub fn phase_mask(&self) -> u64 {
        self.z
    }

    /// Number of Y letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// True if the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti % 2 == 0
    }

    /// Product of two strings: returns the resulting string and the scalar
    /// phase, so that `self * other = phase * result`.
    pub fn product(&self, other: &PauliString) -> Result<(PauliString, Complex64)> {
        if self.n != other.n {
            return Err(CoreError::Dimension { left: self.n, right: other.n });
        }
        // Per-qubit: A·B = phase · C with phase ∈ {1, i, −1, −i}. Track the
        // total phase as a power of i.
        let mut ipow: u32 = 0;
        for q in 0..self.n {
            let a = self.letter(q);
            let b = other.letter(q);
            ipow += single_product_ipow(a, b);
        }
        let result = PauliString { x: self.x ^ other.x, z: self.z ^ other.z, n: self.n };
        Ok((result, ipow_to_complex(ipow)))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

/// i-power contributed by the single-qubit product a·b (result letter is the
/// XOR of the mask bits and needs no separate lookup).
fn single_product_ipow(a: PauliLetter, b: PauliLetter) -> u32 {
    use PauliLetter::*;
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1, // XY = iZ, YZ = iX, ZX = iY
        (Y, X) | (Z, Y) | (X, Z) => 3, // YX = −iZ, ZY = −iX, XZ = −iY
        _ => 0,
    }
}

fn ipow_to_complex(ipow: u32) -> Complex64 {
    match ipow % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// One Pauli string with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub string: PauliString,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn new(string: PauliString, coeff: Complex64) -> Self {
        PauliTerm { string, coeff }
    }

    pub fn real(string: PauliString, coeff: f64) -> Self {
        PauliTerm { string, coeff: Complex64::new(coeff, 0.0) }
    }

    pub fn num_qubits(&self) -> usize {
        self.string.num_qubits()
    }
}

/// Commutator [a, b] = ab − ba of two Pauli terms.
///
/// The product of two Pauli strings is a single string, so the commutator is
/// either zero (commuting strings) or one term with coefficient 2·phase·c_a·c_b.
pub fn commutator(a: &PauliTerm, b: &PauliTerm) -> Result<Option<PauliTerm>> {
    if a.num_qubits() != b.num_qubits() {
        return Err(CoreError::Dimension { left: a.num_qubits(), right: b.num_qubits() });
    }
    if a.string.commutes_with(&b.string) {
        return Ok(None);
    }
    let (string, phase) = a.string.product(&b.string)?;
    let coeff = 2.0 * phase * a.coeff * b.coeff;
    Ok(Some(PauliTerm { string, coeff }))
}

/// Coefficients smaller than this are dropped when merging terms.
const COEFF_EPS: f64 = 1e-14;

/// A sum of Pauli terms with distinct strings; zero-coefficient terms are
/// pruned. Terms are kept in a sorted map so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut sum = PauliSum::zero(n);
        for t in terms {
            sum.add_term(&t)?;
        }
        Ok(sum)
    }

    pub fn from_term(term: PauliTerm) -> Self {
        let mut sum = PauliSum::zero(term.num_qubits());
        sum.add_term(&term).expect("same qubit count");
        sum
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|(s, c)| PauliTerm { string: *s, coeff: *c })
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn add_term(&mut self, term: &PauliTerm) -> Result<()> {
        if term.num_qubits() != self.n {
            return Err(CoreError::Dimension { left: self.n, right: term.num_qubits() });
        }
        let entry = self.terms.entry(term.string).or_insert(Complex64::ZERO);
        *entry += term.coeff;
        if entry.norm() < COEFF_EPS {
            self.terms.remove(&term.string);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &PauliSum) -> Result<()> {
        for t in other.terms() {
            self.add_term(&t)?;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (s, c) in &self.terms {
            let v = c * factor;
            if v.norm() >= COEFF_EPS {
                out.terms.insert(*s, v);
            }
        }
        out
    }

    /// All coefficients real, hence a Hermitian operator.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < 1e-12)
    }

    /// Only I/Z letters appear, hence diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|s| s.is_diagonal())
    }

    /// Every term acts on a single qubit and no qubit is touched twice, so
    /// all terms mutually commute and exponentiate qubit-by-qubit.
    pub fn is_commuting_single_qubit(&self) -> bool {
        let mut seen = 0u64;
        for s in self.terms.keys() {
            let support = s.x | s.z;
            if support.count_ones() != 1 || seen & support != 0 {
                return false;
            }
            seen |= support;
        }
        true
    }

    /// Commutator [A, B] of two sums, expanded term by term.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(CoreError::Dimension { left: self.n, right: other.n });
        }
        let mut out = PauliSum::zero(self.n);
        for a in self.terms() {
            for b in other.terms() {
                if let Some(t) = commutator(&a, &b)? {
                    out.add_term(&t)?;
                }
            }
        }
        Ok(out)
    }

    /// Frobenius-style norm over the coefficient vector (Pauli strings are
    /// orthogonal under the normalized trace inner product).
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Serialize as `<coeff_re> <coeff_im> <letters>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, c) in &self.terms {
            out.push_str(&format!("{} {} {}\n", c.re, c.im, s));
        }
        out
    }

    /// Parse the line format produced by [`PauliSum::to_text`].
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(CoreError::input(format!(
                    "line {}: expected `<re> <im> <letters>`, got `{line}`",
                    lineno + 1
                )));
            }
            let re: f64 = fields[0]
                .parse()
                .map_err(|_| CoreError::input(format!("line {}: bad real part", lineno + 1)))?;
            let im: f64 = fields[1]
                .parse()
                .map_err(|_| CoreError::input(format!("line {}: bad imaginary part", lineno + 1)))?;
            let string = PauliString::parse(fields[2])?;
            match n {
                None => n = Some(string.num_qubits()),
                Some(n0) if n0 != string.num_qubits() => {
                    return Err(CoreError::Dimension { left: n0, right: string.num_qubits() })
                }
                _ => {}
            }
            terms.push(PauliTerm::new(string, Complex64::new(re, im)));
        }
        let n = n.ok_or_else(|| CoreError::input("empty Pauli sum text"))?;
        PauliSum::from_terms(n, terms)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}·{}", c.re, s)?;
            } else {
                write!(f, "({}+{}i)·{}", c.re, c.im, s)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, q: usize) -> PauliTerm {
        PauliTerm::real(PauliString::single(n, q, PauliLetter::X), 1.0)
    }
    fn y(n: usize, q: usize) -> PauliTerm {
        PauliTerm::real(PauliString::single(n, q, PauliLetter::Y), 1.0)
    }
    fn z(n: usize, q: usize) -> PauliTerm {
        PauliTerm::real(PauliString::single(n, q, PauliLetter::Z), 1.0)
    }

    #[test]
    fn commutator_xy_is_2iz() {
        let c = commutator(&x(1, 0), &y(1, 0)).unwrap().unwrap();
        assert_eq!(c.string, z(1, 0).string);
        assert!((c.coeff - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn self_commutator_is_zero() {
        assert!(commutator(&x(1, 0), &x(1, 0)).unwrap().is_none());
        assert!(commutator(&x(3, 1), &x(3, 2)).unwrap().is_none());
    }

    #[test]
    fn commutator_zz_with_xi() {
        // [Z⊗Z, X⊗I] = 2i·Y⊗Z, verified against the dense 4×4 oracle in
        // tests/dense_oracle.rs; frozen here symbolically.
        let zz = PauliTerm::real(PauliString::zz(2, 0, 1), 1.0);
        let xi = x(2, 0);
        let c = commutator(&zz, &xi).unwrap().unwrap();
        let expect = PauliString::from_letters(&[PauliLetter::Y, PauliLetter::Z]);
        assert_eq!(c.string, expect);
        assert!((c.coeff - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        assert!(commutator(&x(1, 0), &x(2, 0)).is_err());
    }

    #[test]
    fn product_phases_cycle() {
        // XY = iZ, YZ = iX, ZX = iY and reversals pick up −i.
        let (s, p) = x(1, 0).string.product(&y(1, 0).string).unwrap();
        assert_eq!(s, z(1, 0).string);
        assert_eq!(p, Complex64::new(0.0, 1.0));
        let (s, p) = y(1, 0).string.product(&x(1, 0).string).unwrap();
        assert_eq!(s, z(1, 0).string);
        assert_eq!(p, Complex64::new(0.0, -1.0));
    }

    #[test]
    fn sum_merges_and_prunes() {
        let mut sum = PauliSum::zero(2);
        let t = PauliTerm::real(PauliString::zz(2, 0, 1), 0.5);
        sum.add_term(&t).unwrap();
        sum.add_term(&t).unwrap();
        assert_eq!(sum.num_terms(), 1);
        assert_eq!(sum.coefficient(&t.string).re, 1.0);
        sum.add_term(&PauliTerm::real(t.string, -1.0)).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn text_round_trip() {
        let mut sum = PauliSum::zero(3);
        sum.add_term(&PauliTerm::real(PauliString::zz(3, 0, 2), 0.5)).unwrap();
        sum.add_term(&PauliTerm::real(PauliString::single(3, 1, PauliLetter::X), -1.25)).unwrap();
        let text = sum.to_text();
        let back = PauliSum::parse_text(&text).unwrap();
        assert_eq!(sum, back);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PauliSum::parse_text("0.5 0.0 ZQ").is_err());
        assert!(PauliSum::parse_text("0.5 ZZ").is_err());
        assert!(PauliSum::parse_text("").is_err());
    }

    #[test]
    fn antisymmetry_on_random_pairs() {
        // commutator(a,b) = −commutator(b,a)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let letters = |rng: &mut rand_chacha::ChaCha8Rng| {
                (0..n)
                    .map(|_| match rng.gen_range(0..4) {
                        0 => PauliLetter::I,
                        1 => PauliLetter::X,
                        2 => PauliLetter::Y,
                        _ => PauliLetter::Z,
                    })
                    .collect::<Vec<_>>()
            };
            let a = PauliTerm::real(PauliString::from_letters(&letters(&mut rng)), rng.gen_range(-2.0..2.0));
            let b = PauliTerm::real(PauliString::from_letters(&letters(&mut rng)), rng.gen_range(-2.0..2.0));
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            match (ab, ba) {
                (None, None) => {}
                (Some(u), Some(v)) => {
                    assert_eq!(u.string, v.string);
                    assert!((u.coeff + v.coeff).norm() < 1e-12);
                }
                _ => panic!("commutator asymmetric in zero-ness"),
            }
        }
    }

    #[test]
    fn jacobi_identity_on_random_triples() {
        // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0 symbolically.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let rand_sum = |rng: &mut rand_chacha::ChaCha8Rng| {
                let terms: Vec<PauliTerm> = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        let letters: Vec<PauliLetter> = (0..n)
                            .map(|_| match rng.gen_range(0..4) {
                                0 => PauliLetter::I,
                                1 => PauliLetter::X,
                                2 => PauliLetter::Y,
                                _ => PauliLetter::Z,
                            })
                            .collect();
                        PauliTerm::real(PauliString::from_letters(&letters), rng.gen_range(-1.0..1.0))
                    })
                    .collect();
                PauliSum::from_terms(n, terms).unwrap()
            };
            let a = rand_sum(&mut rng);
            let b = rand_sum(&mut rng);
            let c = rand_sum(&mut rng);
            let mut acc = a.commutator(&b.commutator(&c).unwrap()).unwrap();
            acc.add_assign(&b.commutator(&c.commutator(&a).unwrap()).unwrap()).unwrap();
            acc.add_assign(&c.commutator(&a.commutator(&b).unwrap()).unwrap()).unwrap();
            assert!(acc.coeff_norm() < 1e-10, "jacobi violated: norm {}", acc.coeff_norm());
        }
    }
}
