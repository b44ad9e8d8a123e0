//! Problem instances (weighted Max-Cut, 1D transverse-field Ising rings),
//! their cost Hamiltonians, exact oracles and approximation ratios.

mod adapt;
mod greedy;
mod gw;

pub use adapt::{adapt_qaoa, default_adapt_pool, AdaptOutcome};
pub use greedy::greedy_maxcut;
pub use gw::{gw_maxcut, GwOutcome};

use crate::error::{CoreError, Result};
use crate::pauli::{PauliLetter, PauliString, PauliSum, PauliTerm};
use crate::simulator::krylov;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Exhaustive Max-Cut oracle cap (2^(n−1) partitions scanned).
pub const MAX_BRUTE_FORCE_VERTICES: usize = 22;
/// Lanczos ground-energy cap.
pub const MAX_GROUND_ENERGY_QUBITS: usize = 16;

/// Undirected weighted graph on vertices 0..n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let g = WeightedGraph { n, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for &(i, j, w) in &self.edges {
            if i == j {
                return Err(CoreError::input(format!("self-loop at vertex {i}")));
            }
            if i >= self.n || j >= self.n {
                return Err(CoreError::input(format!("edge ({i},{j}) out of range for n={}", self.n)));
            }
            if !w.is_finite() {
                return Err(CoreError::input(format!("non-finite weight on edge ({i},{j})")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(CoreError::input(format!("duplicate edge ({i},{j})")));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    /// Unweighted ring 0−1−…−(n−1)−0.
    pub fn ring(n: usize) -> Self {
        assert!(n >= 3);
        let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        WeightedGraph { n, edges }
    }

    /// Cut value of an assignment given as bits (0/1 per vertex).
    pub fn cut_value(&self, bits: &[u8]) -> f64 {
        self.edges
            .iter()
            .map(|&(i, j, w)| if bits[i] != bits[j] { w } else { 0.0 })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    MaxCut,
    Tfim,
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemKind::MaxCut => write!(f, "maxcut"),
            ProblemKind::Tfim => write!(f, "tfim"),
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maxcut" | "max-cut" => Ok(ProblemKind::MaxCut),
            "tfim" => Ok(ProblemKind::Tfim),
            other => Err(CoreError::input(format!("unknown task kind `{other}`"))),
        }
    }
}

/// A concrete optimization instance. For TFIM the graph is a ring whose edge
/// weights are the couplings J_ij and `h` is the shared transverse field.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub graph: WeightedGraph,
    pub h: f64,
}

/// On-disk JSON form: `{n, edges: [[i, j, w], …], kind, h, J}`.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    kind: ProblemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    j: Option<Vec<f64>>,
}

impl ProblemInstance {
    pub fn maxcut(graph: WeightedGraph) -> Self {
        ProblemInstance { kind: ProblemKind::MaxCut, graph, h: 0.0 }
    }

    /// 1D ring TFIM with per-edge couplings and a shared field.
    pub fn tfim_ring(couplings: &[f64], h: f64) -> Result<Self> {
        let n = couplings.len();
        if n < 2 {
            return Err(CoreError::input("TFIM ring needs at least 2 sites"));
        }
        let edges = if n == 2 {
            // The two parallel ring edges (0,1) and (1,0 mod 2) merge into a
            // single coupling with summed J.
            vec![(0usize, 1usize, couplings[0] + couplings[1])]
        } else {
            (0..n).map(|i| (i, (i + 1) % n, couplings[i])).collect()
        };
        Ok(ProblemInstance { kind: ProblemKind::Tfim, graph: WeightedGraph::new(n, edges)?, h })
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn cost_hamiltonian(&self) -> PauliSum {
        match self.kind {
            ProblemKind::MaxCut => maxcut_hamiltonian(&self.graph),
            ProblemKind::Tfim => tfim_hamiltonian(self),
        }
    }

    /// Optimal objective used as the denominator material of the ratio:
    /// C_max for Max-Cut, ground energy E_0 for TFIM.
    pub fn exact_optimum(&self) -> Result<f64> {
        match self.kind {
            ProblemKind::MaxCut => Ok(brute_force_maxcut(&self.graph)?.0),
            ProblemKind::Tfim => ground_energy(&self.cost_hamiltonian(), self.num_qubits()),
        }
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n: self.graph.num_vertices(),
            edges: self.graph.edges().to_vec(),
            kind: self.kind,
            h: (self.kind == ProblemKind::Tfim).then_some(self.h),
            j: (self.kind == ProblemKind::Tfim)
                .then(|| self.graph.edges().iter().map(|&(_, _, w)| w).collect()),
        };
        serde_json::to_string(&file).expect("instance serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let mut edges = file.edges;
        if let Some(j) = &file.j {
            if j.len() != edges.len() {
                return Err(CoreError::input("J list length does not match edge list"));
            }
            for (e, jv) in edges.iter_mut().zip(j) {
                e.2 = *jv;
            }
        }
        let graph = WeightedGraph::new(file.n, edges)?;
        let inst = ProblemInstance { kind: file.kind, graph, h: file.h.unwrap_or(0.0) };
        if inst.kind == ProblemKind::Tfim {
            inst.validate_ring()?;
        }
        Ok(inst)
    }

    fn validate_ring(&self) -> Result<()> {
        let n = self.graph.num_vertices();
        let expected = if n == 2 { 1 } else { n };
        if self.graph.edges().len() != expected {
            return Err(CoreError::input("TFIM instance must be a ring"));
        }
        for &(i, j, _) in self.graph.edges() {
            let d = (i as i64 - j as i64).rem_euclid(n as i64);
            if d != 1 && d != n as i64 - 1 {
                return Err(CoreError::input(format!("non-ring edge ({i},{j}) in TFIM instance")));
            }
        }
        Ok(())
    }
}

/// H_C = 0.5·Σ w_ij Z_i Z_j
pub fn maxcut_hamiltonian(graph: &WeightedGraph) -> PauliSum {
    let n = graph.num_vertices();
    let mut h = PauliSum::zero(n);
    for &(i, j, w) in graph.edges() {
        h.add_term(&PauliTerm::real(PauliString::zz(n, i, j), 0.5 * w))
            .expect("indices validated");
    }
    h
}

/// H = −Σ J_ij Z_i Z_j − h Σ X_i
pub fn tfim_hamiltonian(instance: &ProblemInstance) -> PauliSum {
    let n = instance.num_qubits();
    let mut h = PauliSum::zero(n);
    for &(i, j, jw) in instance.graph.edges() {
        h.add_term(&PauliTerm::real(PauliString::zz(n, i, j), -jw)).expect("ring indices");
    }
    for q in 0..n {
        h.add_term(&PauliTerm::real(PauliString::single(n, q, PauliLetter::X), -instance.h))
            .expect("ring indices");
    }
    h
}

/// Exhaustive Max-Cut: returns (C_max, argmax bits). Scans 2^(n−1)
/// partitions (vertex n−1 pinned to side 0); ties resolve to the smallest
/// index so the result is deterministic.
pub fn brute_force_maxcut(graph: &WeightedGraph) -> Result<(f64, Vec<u8>)> {
    let n = graph.num_vertices();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(CoreError::capacity(format!(
            "brute force limited to n ≤ {MAX_BRUTE_FORCE_VERTICES}, got {n}"
        )));
    }
    if n == 0 {
        return Err(CoreError::input("empty graph"));
    }
    let masks: Vec<(u64, f64)> = graph
        .edges()
        .iter()
        .map(|&(i, j, w)| ((1u64 << i) | (1u64 << j), w))
        .collect();
    let total = 1u64 << (n - 1);
    let cut_of = |z: u64| -> f64 {
        masks
            .iter()
            .map(|&(m, w)| if (z & m).count_ones() == 1 { w } else { 0.0 })
            .sum()
    };
    let chunk = 1u64 << 14;
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut best = (f64::NEG_INFINITY, 0u64);
            for z in lo..hi {
                let v = cut_of(z);
                if v > best.0 {
                    best = (v, z);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let bits = (0..n).map(|q| ((best.1 >> q) & 1) as u8).collect();
    Ok((best.0, bits))
}

/// Smallest eigenvalue of a Hermitian Pauli sum to ~1e-9 via Lanczos.
pub fn ground_energy(h: &PauliSum, n: usize) -> Result<f64> {
    if h.num_qubits() != n {
        return Err(CoreError::Dimension { left: n, right: h.num_qubits() });
    }
    if n > MAX_GROUND_ENERGY_QUBITS {
        return Err(CoreError::capacity(format!(
            "ground energy limited to N ≤ {MAX_GROUND_ENERGY_QUBITS}, got {n}"
        )));
    }
    if !h.is_hermitian() {
        return Err(CoreError::input("ground energy requires a Hermitian operator"));
    }
    krylov::lanczos_min_eigenvalue(h)
}

/// One proposed assignment with its objective value and approximation ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub bits: Vec<u8>,
    pub value: f64,
    pub ratio: f64,
}

/// The multi-angle QAOA mixer: all-X with one parameter per qubit, i.e. the
/// NG grouping.
pub fn ma_qaoa_spec(n: usize) -> crate::mixer::MixerSpec {
    crate::mixer::ng_spec(n)
}

/// Approximation ratio of an achieved ⟨H_C⟩ against the exact optimum.
///
/// Max-Cut: r = (W/2 − ⟨H_C⟩) / C_max, using the expected-cut identity
/// Cut = W/2 − ⟨H_C⟩ under the 0.5·w·ZZ convention. TFIM: r = ⟨H⟩ / E_0.
pub fn approximation_ratio(instance: &ProblemInstance, achieved_expectation: f64) -> Result<f64> {
    let optimum = instance.exact_optimum()?;
    approximation_ratio_with(instance, optimum, achieved_expectation)
}

/// Ratio computation with a precomputed oracle optimum (C_max or E_0).
pub fn approximation_ratio_with(
    instance: &ProblemInstance,
    optimum: f64,
    achieved_expectation: f64,
) -> Result<f64> {
    let r = match instance.kind {
        ProblemKind::MaxCut => {
            if optimum <= 0.0 {
                return Err(CoreError::input("C_max must be positive"));
            }
            (instance.graph.total_weight() / 2.0 - achieved_expectation) / optimum
        }
        ProblemKind::Tfim => {
            if optimum >= 0.0 {
                return Err(CoreError::input("TFIM ground energy must be negative"));
            }
            achieved_expectation / optimum
        }
    };
    if r > 1.0 + 1e-6 {
        return Err(CoreError::numeric(format!(
            "approximation ratio {r} exceeds 1 + 1e-6; oracle or expectation is inconsistent"
        )));
    }
    Ok(r)
}
