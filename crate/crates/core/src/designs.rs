//! Canonical ansatz designs (FG/PG/NG) for a problem instance, used by the
//! effective-dimension and Lie-closure diagnostics.

use crate::error::Result;
use crate::mixer::MixerSpec;
use crate::pauli::{
    automorphism_orbits, AnsatzDesign, DesignLabel, PauliLetter, PauliString, PauliSum, PauliTerm,
};
use crate::problems::ProblemInstance;
use std::collections::BTreeMap;

fn all_x(n: usize) -> PauliSum {
    let mut s = PauliSum::zero(n);
    for q in 0..n {
        s.add_term(&PauliTerm::real(PauliString::single(n, q, PauliLetter::X), 1.0))
            .expect("consistent n");
    }
    s
}

/// Fully grouped: the two generators {H_M = Σ X_i, H_C}.
pub fn fg_design(instance: &ProblemInstance) -> Result<AnsatzDesign> {
    let n = instance.num_qubits();
    AnsatzDesign::new(DesignLabel::Fg, vec![all_x(n), instance.cost_hamiltonian()])
}

/// Non-grouped: every cost term and every X_i is its own generator.
pub fn ng_design(instance: &ProblemInstance) -> Result<AnsatzDesign> {
    let n = instance.num_qubits();
    let mut gens: Vec<PauliSum> =
        instance.cost_hamiltonian().terms().map(PauliSum::from_term).collect();
    for q in 0..n {
        gens.push(PauliSum::from_term(PauliTerm::real(
            PauliString::single(n, q, PauliLetter::X),
            1.0,
        )));
    }
    AnsatzDesign::new(DesignLabel::Ng, gens)
}

/// Partially grouped by the weight-preserving automorphism orbits: one
/// Σ X_i per vertex orbit, and the cost terms summed within each orbit
/// (edge orbits for two-qubit terms, vertex orbits for one-qubit terms).
pub fn pg_design(instance: &ProblemInstance) -> Result<AnsatzDesign> {
    let n = instance.num_qubits();
    let orbits = automorphism_orbits(&instance.graph)?;

    let mut gens: Vec<PauliSum> = Vec::new();
    for orbit in &orbits.vertex_orbits {
        let mut g = PauliSum::zero(n);
        for &v in orbit {
            g.add_term(&PauliTerm::real(PauliString::single(n, v, PauliLetter::X), 1.0))?;
        }
        gens.push(g);
    }

    // Cost terms keyed by their orbit block, preserving coefficients so the
    // blocks sum back to H_C.
    let edge_orbit_of: BTreeMap<(usize, usize), usize> = {
        let mut m = BTreeMap::new();
        for (k, orbit) in orbits.edge_orbits.iter().enumerate() {
            for &e in orbit {
                let (i, j, _) = instance.graph.edges()[e];
                m.insert((i.min(j), i.max(j)), k);
            }
        }
        m
    };
    let vertex_orbit_of = orbits.vertex_orbit_ids(n);

    let mut blocks: BTreeMap<(u8, usize), PauliSum> = BTreeMap::new();
    for term in instance.cost_hamiltonian().terms() {
        let support: Vec<usize> =
            (0..n).filter(|&q| term.string.letter(q) != PauliLetter::I).collect();
        let key = match support.as_slice() {
            [q] => (0u8, vertex_orbit_of[*q]),
            [a, b] => (1u8, edge_orbit_of[&(*a.min(b), *a.max(b))]),
            _ => (2u8, 0),
        };
        blocks.entry(key).or_insert_with(|| PauliSum::zero(n)).add_term(&term)?;
    }
    gens.extend(blocks.into_values());
    AnsatzDesign::new(DesignLabel::Pg, gens)
}

/// Design for an explicit mixer spec: {H_C} plus one generator per group.
pub fn custom_design(instance: &ProblemInstance, spec: &MixerSpec) -> Result<AnsatzDesign> {
    let mut gens = vec![instance.cost_hamiltonian()];
    for j in 0..spec.group_count() {
        gens.push(spec.group_generator(j));
    }
    AnsatzDesign::new(DesignLabel::Custom, gens)
}
