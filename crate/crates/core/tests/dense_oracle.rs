//! Cross-checks of the bit-mask engine against independent dense oracles.

mod common;

use common::{closure_rank_oracle, dense_unitary, sum_to_matrix};
use mixgen_core::mixer::{fg_spec, ng_spec, MixerSpec, OpType};
use mixgen_core::pauli::{
    commutator, effective_dimension, lie_closure, AnsatzDesign, DesignLabel, PauliLetter,
    PauliString, PauliSum, PauliTerm,
};
use mixgen_core::problems::{maxcut_hamiltonian, WeightedGraph};
use mixgen_core::simulator::{evolve, expectation, CircuitSpec};
use mixgen_core::statevector::StateVector;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn single(n: usize, q: usize, l: PauliLetter) -> PauliSum {
    PauliSum::from_term(PauliTerm::real(PauliString::single(n, q, l), 1.0))
}

#[test]
fn commutator_zz_xi_matches_dense_product() {
    let zz = PauliTerm::real(PauliString::zz(2, 0, 1), 1.0);
    let xi = PauliTerm::real(PauliString::single(2, 0, PauliLetter::X), 1.0);
    let symbolic = commutator(&zz, &xi).unwrap().unwrap();

    let a = sum_to_matrix(&PauliSum::from_term(zz));
    let b = sum_to_matrix(&PauliSum::from_term(xi));
    let dense = &a * &b - &b * &a;
    let sym_dense = sum_to_matrix(&PauliSum::from_term(symbolic));
    assert!((dense - sym_dense).norm() < 1e-12);
}

#[test]
fn random_commutators_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let rand_term = |rng: &mut ChaCha8Rng| {
            let letters: Vec<PauliLetter> = (0..n)
                .map(|_| match rng.gen_range(0..4) {
                    0 => PauliLetter::I,
                    1 => PauliLetter::X,
                    2 => PauliLetter::Y,
                    _ => PauliLetter::Z,
                })
                .collect();
            PauliTerm::real(PauliString::from_letters(&letters), rng.gen_range(-1.5..1.5))
        };
        let a = rand_term(&mut rng);
        let b = rand_term(&mut rng);
        let sym = commutator(&a, &b).unwrap();
        let ma = sum_to_matrix(&PauliSum::from_term(a));
        let mb = sum_to_matrix(&PauliSum::from_term(b));
        let dense = &ma * &mb - &mb * &ma;
        let sym_dense = match sym {
            Some(t) => sum_to_matrix(&PauliSum::from_term(t)),
            None => DMatrix::zeros(1 << n, 1 << n),
        };
        assert!((dense - sym_dense).norm() < 1e-10);
    }
}

#[test]
fn closure_dimensions_match_dense_rank_oracle() {
    // Grouped single-edge pair {X⊗I + I⊗X, Z⊗Z} and its split variant.
    let mut xsum = single(2, 0, PauliLetter::X);
    xsum.add_assign(&single(2, 1, PauliLetter::X)).unwrap();
    let zz = PauliSum::from_term(PauliTerm::real(PauliString::zz(2, 0, 1), 1.0));

    let grouped = [xsum.clone(), zz.clone()];
    let rank = closure_rank_oracle(&[sum_to_matrix(&xsum), sum_to_matrix(&zz)], 64);
    assert_eq!(lie_closure(&grouped, 64).unwrap().len(), rank);
    assert_eq!(rank, 4);

    let split = [single(2, 0, PauliLetter::X), single(2, 1, PauliLetter::X), zz.clone()];
    let split_dense: Vec<DMatrix<Complex64>> = split.iter().map(sum_to_matrix).collect();
    let split_rank = closure_rank_oracle(&split_dense, 64);
    assert_eq!(lie_closure(&split, 64).unwrap().len(), split_rank);
    assert_eq!(split_rank, 6);

    // su(2) from {X, Z} on one qubit.
    let su2 = [single(1, 0, PauliLetter::X), single(1, 0, PauliLetter::Z)];
    let su2_dense: Vec<DMatrix<Complex64>> = su2.iter().map(sum_to_matrix).collect();
    assert_eq!(closure_rank_oracle(&su2_dense, 16), 3);
    assert_eq!(lie_closure(&su2, 16).unwrap().len(), 3);
}

#[test]
fn closure_matches_oracle_on_random_designs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..8 {
        let n = rng.gen_range(2..=3);
        let count = rng.gen_range(2..=3);
        let gens: Vec<PauliSum> = (0..count)
            .map(|_| {
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
                        PauliTerm::real(
                            PauliString::from_letters(&letters),
                            rng.gen_range(0.2..1.5),
                        )
                    })
                    .collect();
                PauliSum::from_terms(n, terms).unwrap()
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let dense: Vec<DMatrix<Complex64>> = gens.iter().map(sum_to_matrix).collect();
        let rank = closure_rank_oracle(&dense, 300);
        let dim = lie_closure(&gens, 300).unwrap().len();
        assert_eq!(dim, rank, "generators: {gens:?}");
    }
}

#[test]
fn evolve_matches_dense_unitary_product() {
    // 2-qubit single-edge Max-Cut at p=1 with (α, β) = (π/4, π/8).
    let g = WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap();
    let cost = maxcut_hamiltonian(&g);
    let circuit = CircuitSpec::uniform(cost.clone(), fg_spec(2), 1).unwrap();
    let (alpha, beta) = (std::f64::consts::FRAC_PI_4, std::f64::consts::PI / 8.0);
    let fast = evolve(&circuit, &[alpha, beta], &StateVector::plus_state(2)).unwrap();

    let hc = sum_to_matrix(&cost);
    let hm = sum_to_matrix(&fg_spec(2).hamiltonian());
    let u = dense_unitary(&hm, beta) * dense_unitary(&hc, alpha);
    let psi0 = DVector::from_element(4, Complex64::new(0.5, 0.0));
    let expect = u * psi0;
    for (a, b) in fast.amplitudes().iter().zip(expect.iter()) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn evolve_matches_dense_on_random_mixed_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.7) {
                    edges.push((i, j, rng.gen_range(0.1..1.0)));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 1, 1.0));
        }
        let g = WeightedGraph::new(n, edges).unwrap();
        let cost = maxcut_hamiltonian(&g);
        let types: Vec<OpType> =
            (0..n).map(|_| if rng.gen_bool(0.5) { OpType::X } else { OpType::Y }).collect();
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mixer = MixerSpec::from_partition_labels(types, &labels).unwrap();
        let p = rng.gen_range(1..=3);
        let circuit = CircuitSpec::uniform(cost.clone(), mixer.clone(), p).unwrap();
        let params: Vec<f64> =
            (0..circuit.num_parameters()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let fast = evolve(&circuit, &params, &StateVector::plus_state(n)).unwrap();

        // Dense route: per layer, cost unitary then one unitary per group.
        let dim = 1usize << n;
        let mut psi = DVector::from_element(dim, Complex64::new(1.0 / (dim as f64).sqrt(), 0.0));
        let hc = sum_to_matrix(&cost);
        let mut off = 0;
        for _ in 0..p {
            psi = dense_unitary(&hc, params[off]) * psi;
            off += 1;
            for j in 0..mixer.group_count() {
                let gj = sum_to_matrix(&mixer.group_generator(j));
                psi = dense_unitary(&gj, params[off + j]) * psi;
            }
            off += mixer.group_count();
        }
        for (a, b) in fast.amplitudes().iter().zip(psi.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn expectation_matches_dense_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let n = 6;
    let dim = 1usize << n;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.4) {
                edges.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    let h = maxcut_hamiltonian(&WeightedGraph::new(n, edges).unwrap());
    for _ in 0..5 {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut psi = StateVector::from_raw(n, amps);
        psi.normalize();
        let fast = expectation(&psi, &h).unwrap();
        let m = sum_to_matrix(&h);
        let v = DVector::from_column_slice(psi.amplitudes());
        let dense = (v.adjoint() * &m * &v)[(0, 0)].re;
        assert!((fast - dense).abs() < 1e-10, "{fast} vs {dense}");
    }
}

#[test]
fn effective_dimension_matches_dense_subspace_oracle() {
    // FG vs NG on a 6-node w3r graph with distinct weights: Theorem-style
    // equality when there is no spatial symmetry.
    let g = WeightedGraph::new(
        6,
        vec![
            (0, 1, 0.517),
            (0, 2, 0.923),
            (0, 3, 0.331),
            (1, 2, 0.817),
            (1, 4, 0.254),
            (2, 5, 0.442),
            (3, 4, 0.735),
            (3, 5, 0.681),
            (4, 5, 0.119),
        ],
    )
    .unwrap();
    let cost = maxcut_hamiltonian(&g);
    let psi0 = StateVector::plus_state(6);

    let fg = AnsatzDesign::new(
        DesignLabel::Fg,
        vec![fg_spec(6).hamiltonian(), cost.clone()],
    )
    .unwrap();
    let mut ng_gens: Vec<PauliSum> = cost.terms().map(PauliSum::from_term).collect();
    for q in 0..6 {
        ng_gens.push(single(6, q, PauliLetter::X));
    }
    let ng = AnsatzDesign::new(DesignLabel::Ng, ng_gens.clone()).unwrap();

    let d_fg = effective_dimension(&fg, &psi0, 1e-10).unwrap();
    let d_ng = effective_dimension(&ng, &psi0, 1e-10).unwrap();
    assert_eq!(d_fg, d_ng, "no-symmetry instance must have equal dimensions");

    // Independent dense-matrix subspace oracle for the FG case.
    let mats: Vec<DMatrix<Complex64>> = fg.generators().iter().map(sum_to_matrix).collect();
    let dim = 1usize << 6;
    let mut basis: Vec<DVector<Complex64>> =
        vec![DVector::from_element(dim, Complex64::new(1.0 / (dim as f64).sqrt(), 0.0))];
    let mut cursor = 0;
    while cursor < basis.len() {
        let v = basis[cursor].clone();
        for m in &mats {
            let mut w = m * &v;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.adjoint() * &w;
                    w -= b * c[(0, 0)];
                }
            }
            let nrm = w.norm();
            if nrm > 1e-10 {
                basis.push(w / Complex64::new(nrm, 0.0));
            }
        }
        cursor += 1;
    }
    assert_eq!(d_fg, basis.len(), "bit-mask subspace vs dense oracle");
}
