//! Graph and vector encoders feeding the learned models: problem DAGs,
//! mixer graphs and sinusoidal depth embeddings.

use super::MixerSpec;
use crate::error::{CoreError, Result};
use crate::problems::ProblemInstance;
use serde::{Deserialize, Serialize};

/// Fixed node-feature width (zero-padded): role one-hot in the leading
/// slots, term coefficient in the last. Qubit identity stays out of the
/// features so predictions are invariant under qubit relabeling.
pub const FEATURE_WIDTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Input,
    Gate,
    Output,
    Operator,
}

/// Attributed directed graph shared by the problem-DAG and mixer encodings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedGraph {
    pub num_qubits: usize,
    pub roles: Vec<NodeRole>,
    /// One fixed-width feature row per node.
    pub node_features: Vec<Vec<f64>>,
    /// Directed weighted edges (from, to, weight).
    pub edges: Vec<(usize, usize, f64)>,
    /// Node ids of the per-qubit output nodes (problem encoding) or the
    /// operator nodes (mixer encoding), in qubit order.
    pub qubit_nodes: Vec<usize>,
}

impl EncodedGraph {
    pub fn num_nodes(&self) -> usize {
        self.roles.len()
    }

    /// True if the directed edge relation has no cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self.num_nodes();
        let mut indeg = vec![0usize; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            indeg[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0usize;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        seen == n
    }

    /// Dense adjacency with edge weights, rows = targets aggregated per node.
    pub fn adjacency(&self) -> Vec<Vec<f64>> {
        let n = self.num_nodes();
        let mut a = vec![vec![0.0; n]; n];
        for &(from, to, w) in &self.edges {
            a[to][from] += w;
        }
        a
    }
}

/// Encode a problem instance as a circuit-shaped DAG: per-qubit input nodes,
/// one gate node per cost-Hamiltonian term, per-qubit output nodes. Each
/// gate hangs on its qubit wires as input_q → gate → output_q; the cost
/// terms commute, so no gate-before-gate order is encoded and the graph is
/// invariant under qubit relabeling. Gate features carry the term
/// coefficient.
pub fn encode_problem(instance: &ProblemInstance) -> Result<EncodedGraph> {
    let n = instance.num_qubits();
    let cost = instance.cost_hamiltonian();
    let mut roles = Vec::new();
    let mut feats: Vec<Vec<f64>> = Vec::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();

    let feature = |role: NodeRole, coeff: f64| -> Vec<f64> {
        let mut f = vec![0.0; FEATURE_WIDTH];
        f[match role {
            NodeRole::Input => 0,
            NodeRole::Gate => 1,
            NodeRole::Output => 2,
            NodeRole::Operator => unreachable!("operator nodes belong to the mixer encoding"),
        }] = 1.0;
        f[FEATURE_WIDTH - 1] = coeff;
        f
    };

    // Input nodes 0..n; `last[q]` tracks the tail of each qubit wire.
    for _ in 0..n {
        roles.push(NodeRole::Input);
        feats.push(feature(NodeRole::Input, 0.0));
    }
    let mut last: Vec<usize> = (0..n).collect();
    for term in cost.terms() {
        let qubits: Vec<usize> =
            (0..n).filter(|&q| term.string.letter(q) != crate::pauli::PauliLetter::I).collect();
        let id = roles.len();
        roles.push(NodeRole::Gate);
        feats.push(feature(NodeRole::Gate, term.coeff.re));
        for &q in &qubits {
            edges.push((last[q], id, 1.0));
            last[q] = id;
        }
    }
    let mut outputs = Vec::with_capacity(n);
    for q in 0..n {
        let id = roles.len();
        roles.push(NodeRole::Output);
        feats.push(feature(NodeRole::Output, 0.0));
        edges.push((last[q], id, 1.0));
        outputs.push(id);
    }

    Ok(EncodedGraph {
        num_qubits: n,
        roles,
        node_features: feats,
        edges,
        qubit_nodes: outputs,
    })
}

/// Encode a mixer as a complete graph over N operator nodes: node features
/// one-hot the operator type, edge weight 1 marks a shared parameter.
pub fn encode_mixer(spec: &MixerSpec) -> EncodedGraph {
    let n = spec.num_qubits();
    let mut feats = Vec::with_capacity(n);
    for t in spec.types() {
        let mut f = vec![0.0; FEATURE_WIDTH];
        match t {
            super::OpType::X => f[0] = 1.0,
            super::OpType::Y => f[1] = 1.0,
        }
        feats.push(f);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let w = if spec.group_of(i) == spec.group_of(j) { 1.0 } else { 0.0 };
                edges.push((i, j, w));
            }
        }
    }
    EncodedGraph {
        num_qubits: n,
        roles: vec![NodeRole::Operator; n],
        node_features: feats,
        edges,
        qubit_nodes: (0..n).collect(),
    }
}

/// Sinusoidal depth embedding:
/// x[2k] = sin(p / 10000^{2k/d}), x[2k+1] = cos(p / 10000^{2k/d}).
pub fn depth_embedding(p: usize, d_p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(CoreError::input("depth p must be ≥ 1"));
    }
    if d_p == 0 || d_p % 2 != 0 {
        return Err(CoreError::input(format!("embedding dimension must be even and > 0, got {d_p}")));
    }
    let mut x = vec![0.0; d_p];
    for k in 0..d_p / 2 {
        let freq = (p as f64) / 10000f64.powf(2.0 * k as f64 / d_p as f64);
        x[2 * k] = freq.sin();
        x[2 * k + 1] = freq.cos();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixer::{fg_spec, ng_spec};
    use crate::problems::{ProblemInstance, WeightedGraph};

    #[test]
    fn single_edge_dag_shape() {
        let inst = ProblemInstance::maxcut(WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap());
        let g = encode_problem(&inst).unwrap();
        assert_eq!(g.num_nodes(), 5); // 2 input + 1 gate + 2 output
        assert_eq!(g.edges.len(), 4);
        assert!(g.is_acyclic());
        assert_eq!(g.roles.iter().filter(|r| **r == NodeRole::Gate).count(), 1);
    }

    #[test]
    fn w3r_has_gate_node_per_edge() {
        // A 6-vertex 3-regular graph has 9 edges.
        let g = WeightedGraph::new(
            6,
            vec![
                (0, 1, 0.5),
                (0, 2, 0.9),
                (0, 3, 0.3),
                (1, 2, 0.8),
                (1, 4, 0.2),
                (2, 5, 0.4),
                (3, 4, 0.7),
                (3, 5, 0.6),
                (4, 5, 0.1),
            ],
        )
        .unwrap();
        let enc = encode_problem(&ProblemInstance::maxcut(g)).unwrap();
        assert_eq!(enc.roles.iter().filter(|r| **r == NodeRole::Gate).count(), 9);
        assert!(enc.is_acyclic());
    }

    #[test]
    fn mixer_edge_weights_follow_groups() {
        let fg = encode_mixer(&fg_spec(3));
        assert!(fg.edges.iter().all(|&(_, _, w)| w == 1.0));
        let ng = encode_mixer(&ng_spec(3));
        assert!(ng.edges.iter().all(|&(_, _, w)| w == 0.0));
        let spec = MixerSpec::parse("XXX/0-1-0").unwrap();
        let enc = encode_mixer(&spec);
        for &(i, j, w) in &enc.edges {
            let expect = if (i, j) == (0, 2) || (i, j) == (2, 0) { 1.0 } else { 0.0 };
            assert_eq!(w, expect, "edge ({i},{j})");
        }
    }

    #[test]
    fn mixer_encoding_is_injective_and_invertible() {
        use crate::mixer::{groups_from_edges, grouping_pool};
        // Round trip: groups_from_edges ∘ encode_mixer recovers the RGS.
        for rgs in grouping_pool(4).unwrap() {
            let spec = MixerSpec::new(vec![super::super::OpType::X; 4], rgs.clone()).unwrap();
            let enc = encode_mixer(&spec);
            let mut ind = vec![vec![false; 4]; 4];
            for &(i, j, w) in &enc.edges {
                if w == 1.0 {
                    ind[i][j] = true;
                }
            }
            assert_eq!(groups_from_edges(4, &ind).unwrap(), rgs);
        }
    }

    #[test]
    fn depth_embedding_formula() {
        let x = depth_embedding(7, 8).unwrap();
        assert!((x[0] - (7f64).sin()).abs() < 1e-15);
        assert!((x[1] - (7f64).cos()).abs() < 1e-15);
        assert!(x.iter().all(|v| v.abs() <= 1.0));
        assert!(depth_embedding(3, 7).is_err());
        assert!(depth_embedding(0, 8).is_err());
    }

    #[test]
    fn depth_embedding_distinct_over_depth_range() {
        let all: Vec<Vec<f64>> = (2..=92).map(|p| depth_embedding(p, 128).unwrap()).collect();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let dist: f64 =
                    all[i].iter().zip(&all[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                assert!(dist > 1e-6, "depths {} and {} collide", i + 2, j + 2);
            }
        }
    }
}
