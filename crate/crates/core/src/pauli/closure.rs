//! Lie closure of Hermitian Pauli-sum generators under nested commutators.
//!
//! The dynamical algebra is span_ℝ{iH_k} closed under [·,·]. Working with
//! the Hermitian representatives H_k, the induced bracket is −i[A, B], which
//! again has real coefficients, so the whole closure stays in the real
//! coefficient table indexed by Pauli strings.

use super::{PauliString, PauliSum};
use crate::error::{CoreError, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Residual threshold below which a reduced element counts as dependent.
const INDEP_TOL: f64 = 1e-10;

/// Sparse fully-reduced row-echelon state over PauliString-indexed real
/// coordinates. Invariant: every stored row has coefficient 1 at its own
/// pivot and 0 at every other row's pivot, so reducing a candidate is a
/// single pass in any row order.
struct Echelon {
    rows: Vec<(PauliString, BTreeMap<PauliString, f64>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Reduce `sum` by the current rows. Returns the reduced row if it is
    /// independent (residual above tolerance), `None` otherwise.
    fn reduce(&self, sum: &PauliSum) -> Result<Option<BTreeMap<PauliString, f64>>> {
        let mut row: BTreeMap<PauliString, f64> = BTreeMap::new();
        for t in sum.terms() {
            if t.coeff.im.abs() > 1e-9 * (1.0 + t.coeff.re.abs()) {
                return Err(CoreError::input(
                    "lie closure expects Hermitian (real-coefficient) generators",
                ));
            }
            row.insert(t.string, t.coeff.re);
        }
        let scale = row_norm(&row).max(1.0);
        for (pivot, base) in &self.rows {
            if let Some(&c) = row.get(pivot) {
                if c != 0.0 {
                    for (s, v) in base {
                        *row.entry(*s).or_insert(0.0) -= c * v;
                    }
                }
            }
        }
        row.retain(|_, v| v.abs() > 1e-14 * scale);
        if row_norm(&row) > INDEP_TOL * scale {
            Ok(Some(row))
        } else {
            Ok(None)
        }
    }

    /// Insert a reduced independent row: normalize its pivot to 1 and
    /// eliminate that pivot from all existing rows.
    fn insert(&mut self, mut row: BTreeMap<PauliString, f64>) {
        let (pivot, pval) = row
            .iter()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(s, v)| (*s, *v))
            .expect("non-empty independent row");
        for v in row.values_mut() {
            *v /= pval;
        }
        for (_, base) in self.rows.iter_mut() {
            if let Some(&c) = base.get(&pivot) {
                if c != 0.0 {
                    for (s, v) in &row {
                        *base.entry(*s).or_insert(0.0) -= c * v;
                    }
                    base.retain(|_, v| v.abs() > 1e-14);
                }
            }
        }
        self.rows.push((pivot, row));
    }
}

fn row_norm(row: &BTreeMap<PauliString, f64>) -> f64 {
    row.values().map(|v| v * v).sum::<f64>().sqrt()
}

/// Breadth-first Lie closure of the generators.
///
/// Returns a linearly independent basis of Hermitian Pauli sums whose span is
/// closed under the −i[·,·] bracket. Fails with a capacity error (reporting
/// the partial dimension reached) once the basis exceeds `max_dim`.
pub fn lie_closure(generators: &[PauliSum], max_dim: usize) -> Result<Vec<PauliSum>> {
    let n = match generators.first() {
        Some(g) => g.num_qubits(),
        None => return Ok(Vec::new()),
    };
    for g in generators {
        if g.num_qubits() != n {
            return Err(CoreError::Dimension { left: n, right: g.num_qubits() });
        }
    }

    let mut echelon = Echelon::new();
    let mut basis: Vec<PauliSum> = Vec::new();
    // Pairs (i, j), i < j, still awaiting a bracket evaluation.
    let mut pending: Vec<(usize, usize)> = Vec::new();

    let push = |sum: PauliSum,
                    echelon: &mut Echelon,
                    basis: &mut Vec<PauliSum>,
                    pending: &mut Vec<(usize, usize)>|
     -> Result<bool> {
        if sum.is_zero() {
            return Ok(false);
        }
        if let Some(row) = echelon.reduce(&sum)? {
            if basis.len() >= max_dim {
                return Err(CoreError::capacity(format!(
                    "lie closure exceeds max_dim={max_dim} (partial dimension {})",
                    basis.len()
                )));
            }
            echelon.insert(row);
            let k = basis.len();
            for j in 0..k {
                pending.push((j, k));
            }
            basis.push(sum);
            return Ok(true);
        }
        Ok(false)
    };

    for g in generators {
        push(g.clone(), &mut echelon, &mut basis, &mut pending)?;
    }

    while let Some((i, j)) = pending.pop() {
        // Hermitian bracket: −i[A, B].
        let c = basis[i].commutator(&basis[j])?.scaled(Complex64::new(0.0, -1.0));
        push(c, &mut echelon, &mut basis, &mut pending)?;
    }

    Ok(basis)
}

/// Dimension of the Lie closure of the design's generators.
pub fn dla_dimension(design: &super::AnsatzDesign, max_dim: usize) -> Result<usize> {
    Ok(lie_closure(design.generators(), max_dim)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{AnsatzDesign, DesignLabel, PauliLetter, PauliTerm};

    fn single(n: usize, q: usize, l: PauliLetter) -> PauliSum {
        PauliSum::from_term(PauliTerm::real(PauliString::single(n, q, l), 1.0))
    }

    #[test]
    fn commuting_generators_close_immediately() {
        let g = vec![single(2, 0, PauliLetter::X), single(2, 1, PauliLetter::X)];
        assert_eq!(lie_closure(&g, 100).unwrap().len(), 2);
    }

    #[test]
    fn x_and_z_close_to_su2() {
        let g = vec![single(1, 0, PauliLetter::X), single(1, 0, PauliLetter::Z)];
        assert_eq!(lie_closure(&g, 100).unwrap().len(), 3);
    }

    #[test]
    fn single_generator_dimension_one() {
        let design = AnsatzDesign::new(DesignLabel::Custom, vec![single(2, 0, PauliLetter::X)]).unwrap();
        assert_eq!(dla_dimension(&design, 10).unwrap(), 1);
    }

    #[test]
    fn single_edge_grouped_vs_split_generators() {
        // Expected values frozen from the dense numerical-rank oracle in
        // tests/dense_oracle.rs (closure_rank_oracle): the grouped pair
        // {X⊗I + I⊗X, Z⊗Z} closes at dimension 4 with basis
        // {XI+IX, ZZ, YZ+ZY, ZZ−YY}, while splitting the mixer,
        // {X⊗I, I⊗X, Z⊗Z}, closes at dimension 6 spanning
        // {XI, IX, ZZ, YZ, ZY, YY}.
        let mut xsum = single(2, 0, PauliLetter::X);
        xsum.add_assign(&single(2, 1, PauliLetter::X)).unwrap();
        let zz = PauliSum::from_term(PauliTerm::real(PauliString::zz(2, 0, 1), 1.0));
        let grouped = lie_closure(&[xsum, zz.clone()], 64).unwrap();
        assert_eq!(grouped.len(), 4);

        let split = vec![single(2, 0, PauliLetter::X), single(2, 1, PauliLetter::X), zz];
        assert_eq!(lie_closure(&split, 64).unwrap().len(), 6);
    }

    #[test]
    fn closure_is_closed_under_bracket() {
        // Every pairwise bracket of basis elements reduces to zero against
        // the echelon of the basis (rank does not increase).
        let mut xsum = single(3, 0, PauliLetter::X);
        xsum.add_assign(&single(3, 1, PauliLetter::X)).unwrap();
        xsum.add_assign(&single(3, 2, PauliLetter::X)).unwrap();
        let mut zz = PauliSum::from_term(PauliTerm::real(PauliString::zz(3, 0, 1), 1.0));
        zz.add_assign(&PauliSum::from_term(PauliTerm::real(PauliString::zz(3, 1, 2), 0.7)))
            .unwrap();
        let basis = lie_closure(&[xsum, zz], 256).unwrap();
        let mut echelon = Echelon::new();
        for b in &basis {
            let row = echelon.reduce(b).unwrap().expect("basis is independent");
            echelon.insert(row);
        }
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let c = basis[i]
                    .commutator(&basis[j])
                    .unwrap()
                    .scaled(Complex64::new(0.0, -1.0));
                if !c.is_zero() {
                    assert!(echelon.reduce(&c).unwrap().is_none(), "bracket escaped the span");
                }
            }
        }
    }

    #[test]
    fn max_dim_cap_reports_capacity() {
        let g = vec![single(1, 0, PauliLetter::X), single(1, 0, PauliLetter::Z)];
        let err = lie_closure(&g, 2).unwrap_err();
        assert!(matches!(err, CoreError::Capacity(_)));
    }
}
