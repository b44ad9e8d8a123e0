//! Generalized mixer Hamiltonians: per-qubit operator types in {X, Y} plus a
//! partition of the qubits into parameter groups, H_M = Σ_j β_j Σ_{i∈G_j} P_i.
//!
//! Partitions are stored as canonical restricted-growth strings (RGS):
//! g_0 = 0 and g_{k+1} ≤ max(g_0..g_k) + 1, one unique representative per
//! partition of {0..N−1}.

mod encode;

pub use encode::{
    depth_embedding, encode_mixer, encode_problem, EncodedGraph, NodeRole, FEATURE_WIDTH,
};

use crate::error::{CoreError, Result};
use crate::pauli::{automorphism_orbits, PauliLetter, PauliString, PauliSum, PauliTerm};
use crate::problems::WeightedGraph;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Bell-number growth cap for pool enumeration.
pub const MAX_POOL_QUBITS: usize = 12;

/// Mixer operator type on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpType {
    X,
    Y,
}

impl OpType {
    pub fn letter(self) -> PauliLetter {
        match self {
            OpType::X => PauliLetter::X,
            OpType::Y => PauliLetter::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            OpType::X => 'X',
            OpType::Y => 'Y',
        }
    }
}

/// Operator types plus a canonical-RGS parameter grouping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixerSpec {
    types: Vec<OpType>,
    groups: Vec<usize>,
}

impl MixerSpec {
    /// Construct from a canonical RGS; rejects non-canonical strings and
    /// reports the canonical equivalent.
    pub fn new(types: Vec<OpType>, groups: Vec<usize>) -> Result<Self> {
        if types.is_empty() || types.len() != groups.len() {
            return Err(CoreError::input(format!(
                "types ({}) and groups ({}) must be equal nonzero lengths",
                types.len(),
                groups.len()
            )));
        }
        if !is_canonical_rgs(&groups) {
            let canon = canonicalize_labels(&groups);
            return Err(CoreError::input(format!(
                "non-canonical RGS {}; canonical equivalent is {}",
                format_rgs(&groups),
                format_rgs(&canon)
            )));
        }
        Ok(MixerSpec { types, groups })
    }

    /// Construct from arbitrary partition labels, relabeling to canonical RGS.
    pub fn from_partition_labels(types: Vec<OpType>, labels: &[usize]) -> Result<Self> {
        if types.len() != labels.len() {
            return Err(CoreError::input("types and labels length mismatch"));
        }
        MixerSpec::new(types, canonicalize_labels(labels))
    }

    pub fn num_qubits(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[OpType] {
        &self.types
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    /// Number of parameter groups K = 1 + max(g).
    pub fn group_count(&self) -> usize {
        1 + self.groups.iter().copied().max().unwrap_or(0)
    }

    pub fn group_of(&self, q: usize) -> usize {
        self.groups[q]
    }

    /// Σ_{i∈G_j} P_i for one group.
    pub fn group_generator(&self, j: usize) -> PauliSum {
        let n = self.num_qubits();
        let mut sum = PauliSum::zero(n);
        for q in 0..n {
            if self.groups[q] == j {
                sum.add_term(&PauliTerm::real(
                    PauliString::single(n, q, self.types[q].letter()),
                    1.0,
                ))
                .expect("consistent n");
            }
        }
        sum
    }

    /// Full H_M with unit group parameters: Σ_i P_i.
    pub fn hamiltonian(&self) -> PauliSum {
        let n = self.num_qubits();
        let mut sum = PauliSum::zero(n);
        for q in 0..n {
            sum.add_term(&PauliTerm::real(PauliString::single(n, q, self.types[q].letter()), 1.0))
                .expect("consistent n");
        }
        sum
    }

    /// Parse the text form `<types>/<rgs>`, e.g. `XYXYXX/0-1-2-0-3-3`.
    pub fn parse(text: &str) -> Result<Self> {
        let (tpart, gpart) = text
            .split_once('/')
            .ok_or_else(|| CoreError::input(format!("expected `<types>/<rgs>`, got `{text}`")))?;
        let types: Result<Vec<OpType>> = tpart
            .chars()
            .map(|c| match c {
                'X' | 'x' => Ok(OpType::X),
                'Y' | 'y' => Ok(OpType::Y),
                other => Err(CoreError::input(format!("invalid operator type `{other}`"))),
            })
            .collect();
        let groups: Result<Vec<usize>> = gpart
            .split('-')
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| CoreError::input(format!("invalid group index `{tok}`")))
            })
            .collect();
        MixerSpec::new(types?, groups?)
    }
}

impl fmt::Display for MixerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.types {
            write!(f, "{}", t.as_char())?;
        }
        write!(f, "/{}", format_rgs(&self.groups))
    }
}

fn format_rgs(groups: &[usize]) -> String {
    groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("-")
}

fn is_canonical_rgs(groups: &[usize]) -> bool {
    let mut max_seen = 0usize;
    for (k, &g) in groups.iter().enumerate() {
        if k == 0 {
            if g != 0 {
                return false;
            }
        } else if g > max_seen + 1 {
            return false;
        }
        max_seen = max_seen.max(g);
    }
    true
}

/// Relabel arbitrary partition labels to the canonical RGS (first occurrence
/// order).
fn canonicalize_labels(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        let id = match map.iter().find(|(orig, _)| *orig == l) {
            Some((_, id)) => *id,
            None => {
                let id = map.len();
                map.push((l, id));
                id
            }
        };
        out.push(id);
    }
    out
}

/// All-X mixer with a single shared angle per layer.
pub fn fg_spec(n: usize) -> MixerSpec {
    MixerSpec { types: vec![OpType::X; n], groups: vec![0; n] }
}

/// All-X mixer with one angle per qubit (the ma-QAOA mixer).
pub fn ng_spec(n: usize) -> MixerSpec {
    MixerSpec { types: vec![OpType::X; n], groups: (0..n).collect() }
}

/// All-X mixer grouped by the vertex orbits of the weight-preserving
/// automorphism group.
pub fn pg_spec(graph: &WeightedGraph) -> Result<MixerSpec> {
    let orbits = automorphism_orbits(graph)?;
    let ids = orbits.vertex_orbit_ids(graph.num_vertices());
    MixerSpec::from_partition_labels(vec![OpType::X; graph.num_vertices()], &ids)
}

/// All canonical restricted-growth strings of length n, in lexicographic
/// order of enumeration; the count is the Bell number B(n).
pub fn grouping_pool(n: usize) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(CoreError::input("pool needs n ≥ 1"));
    }
    if n > MAX_POOL_QUBITS {
        return Err(CoreError::capacity(format!(
            "grouping pool limited to n ≤ {MAX_POOL_QUBITS} (Bell-number growth), got {n}"
        )));
    }
    let mut pool = Vec::new();
    let mut prefix = vec![0usize; n];
    enumerate_rgs(1, 0, n, &mut prefix, &mut pool);
    Ok(pool)
}

fn enumerate_rgs(k: usize, max_seen: usize, n: usize, prefix: &mut Vec<usize>, pool: &mut Vec<Vec<usize>>) {
    if k == n {
        pool.push(prefix.clone());
        return;
    }
    for g in 0..=max_seen + 1 {
        prefix[k] = g;
        enumerate_rgs(k + 1, max_seen.max(g), n, prefix, pool);
    }
}

/// Connected components of the 1-edges of a symmetric indicator on the
/// complete graph, serialized to a canonical RGS. Transitive by
/// construction: e_ij = e_ik = 1 groups i, j, k regardless of e_jk.
pub fn groups_from_edges(n: usize, indicator: &[Vec<bool>]) -> Result<Vec<usize>> {
    if indicator.len() != n || indicator.iter().any(|row| row.len() != n) {
        return Err(CoreError::input("indicator must be an n×n matrix"));
    }
    for i in 0..n {
        for j in 0..n {
            if indicator[i][j] != indicator[j][i] {
                return Err(CoreError::input("indicator matrix must be symmetric"));
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if indicator[i][j] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Ok(canonicalize_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent partition enumerator: assign each element to one of the
    /// existing blocks or a new block.
    fn count_partitions(n: usize) -> u64 {
        fn rec(k: usize, blocks: usize, n: usize) -> u64 {
            if k == n {
                return 1;
            }
            (blocks as u64) * rec(k + 1, blocks, n) + rec(k + 1, blocks + 1, n)
        }
        rec(1, 1, n)
    }

    #[test]
    fn pool_counts_are_bell_numbers() {
        // Cross-checked against the independent enumerator above; the first
        // few Bell numbers are 1, 2, 5, 15, 52, 203, 877, 4140.
        let expected = [1u64, 2, 5, 15, 52, 203, 877, 4140];
        for (i, &b) in expected.iter().enumerate() {
            let n = i + 1;
            let pool = grouping_pool(n).unwrap();
            assert_eq!(pool.len() as u64, b, "Bell({n})");
            assert_eq!(count_partitions(n), b);
            for rgs in &pool {
                assert!(is_canonical_rgs(rgs));
            }
        }
    }

    #[test]
    fn pool_n2_explicit() {
        assert_eq!(grouping_pool(2).unwrap(), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn pool_has_no_duplicates() {
        let pool = grouping_pool(6).unwrap();
        let set: std::collections::HashSet<_> = pool.iter().cloned().collect();
        assert_eq!(set.len(), pool.len());
    }

    #[test]
    fn non_canonical_rgs_rejected_with_equivalent() {
        let err = MixerSpec::parse("XYXYXX/0-1-2-0-4-4").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0-1-2-0-3-3"), "message was: {msg}");
    }

    #[test]
    fn spec_text_round_trip() {
        let spec = MixerSpec::parse("XYXYXX/0-1-2-0-3-3").unwrap();
        assert_eq!(spec.to_string(), "XYXYXX/0-1-2-0-3-3");
        assert_eq!(spec.group_count(), 4);
    }

    #[test]
    fn canonical_specs() {
        assert_eq!(fg_spec(3).to_string(), "XXX/0-0-0");
        assert_eq!(ng_spec(3).to_string(), "XXX/0-1-2");
        let path = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(pg_spec(&path).unwrap().to_string(), "XXX/0-1-0");
    }

    #[test]
    fn pg_on_asymmetric_weights_equals_ng() {
        let g = WeightedGraph::new(3, vec![(0, 1, 0.21), (1, 2, 0.77)]).unwrap();
        assert_eq!(pg_spec(&g).unwrap(), ng_spec(3));
    }

    #[test]
    fn groups_from_edges_cases() {
        let zeros = vec![vec![false; 3]; 3];
        assert_eq!(groups_from_edges(3, &zeros).unwrap(), vec![0, 1, 2]);
        let ones: Vec<Vec<bool>> =
            (0..3).map(|i| (0..3).map(|j| i != j).collect()).collect();
        assert_eq!(groups_from_edges(3, &ones).unwrap(), vec![0, 0, 0]);
        // Transitivity: e01 = e02 = 1, e12 = 0 still merges everything.
        let mut ind = vec![vec![false; 3]; 3];
        ind[0][1] = true;
        ind[1][0] = true;
        ind[0][2] = true;
        ind[2][0] = true;
        assert_eq!(groups_from_edges(3, &ind).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn group_generator_splits_hamiltonian() {
        let spec = MixerSpec::parse("XYX/0-1-0").unwrap();
        let mut total = PauliSum::zero(3);
        for j in 0..spec.group_count() {
            total.add_assign(&spec.group_generator(j)).unwrap();
        }
        assert_eq!(total, spec.hamiltonian());
    }
}
