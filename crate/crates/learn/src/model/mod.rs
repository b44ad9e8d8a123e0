//! The cost estimator (three-branch network) and the mixer generator
//! (two-head network over the problem DAG), plus their forward passes.

mod strategy;
mod train;

pub use strategy::GeneratorStrategy;
pub use train::{train_estimator, train_generator, EstimatorTrainOptions, GeneratorTrainOptions, TrainReport};

use crate::error::{LearnError, Result};
use crate::nn::{
    graph_conv, gumbel_noise, mlp_forward, AdamState, NodeId, Tape, Tensor,
};
use mixgen_core::mixer::{
    depth_embedding, groups_from_edges, EncodedGraph, MixerSpec, OpType, FEATURE_WIDTH,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::Path;

/// Width of each GNN branch and of the depth embedding.
pub const HIDDEN: usize = 128;
/// Head widths of the estimator MLP.
pub const HEAD: [usize; 2] = [256, 64];
/// Head widths of the generator's per-node / per-pair MLPs.
pub const GEN_HEAD: usize = 64;

/// Node features and dense adjacency of an encoded graph, as tensors.
#[derive(Debug, Clone)]
pub struct GraphTensors {
    pub feats: Tensor,
    pub adj: Tensor,
    pub qubit_nodes: Vec<usize>,
    pub num_qubits: usize,
}

impl GraphTensors {
    pub fn from_encoded(g: &EncodedGraph) -> Self {
        let nodes = g.num_nodes();
        let mut feats = Tensor::zeros(nodes, FEATURE_WIDTH);
        for (r, row) in g.node_features.iter().enumerate() {
            feats.data[r * FEATURE_WIDTH..(r + 1) * FEATURE_WIDTH].copy_from_slice(row);
        }
        let adj_rows = g.adjacency();
        let mut adj = Tensor::zeros(nodes, nodes);
        for (r, row) in adj_rows.iter().enumerate() {
            adj.data[r * nodes..(r + 1) * nodes].copy_from_slice(row);
        }
        GraphTensors {
            feats,
            adj,
            qubit_nodes: g.qubit_nodes.clone(),
            num_qubits: g.num_qubits,
        }
    }
}

pub fn depth_tensor(p: usize) -> Result<Tensor> {
    Ok(Tensor::from_vec(1, HIDDEN, depth_embedding(p, HIDDEN)?))
}

fn glorot(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Tensor {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Tensor::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(-limit..limit)).collect())
}

fn branch_shapes(prefix: &str) -> Vec<(String, (usize, usize))> {
    vec![
        (format!("{prefix}.gc1.w_self"), (FEATURE_WIDTH, HIDDEN)),
        (format!("{prefix}.gc1.w_nbr"), (FEATURE_WIDTH, HIDDEN)),
        (format!("{prefix}.gc1.bias"), (1, HIDDEN)),
        (format!("{prefix}.gc2.w_self"), (HIDDEN, HIDDEN)),
        (format!("{prefix}.gc2.w_nbr"), (HIDDEN, HIDDEN)),
        (format!("{prefix}.gc2.bias"), (1, HIDDEN)),
    ]
}

/// Two graph convolutions (ReLU then linear) and a mean-pool readout.
fn branch_pooled(
    tape: &mut Tape,
    ids: &BTreeMap<String, NodeId>,
    prefix: &str,
    feats: NodeId,
    adj: NodeId,
) -> NodeId {
    let h1 = graph_conv(
        tape,
        feats,
        adj,
        ids[&format!("{prefix}.gc1.w_self")],
        ids[&format!("{prefix}.gc1.w_nbr")],
        ids[&format!("{prefix}.gc1.bias")],
        true,
    );
    let h2 = graph_conv(
        tape,
        h1,
        adj,
        ids[&format!("{prefix}.gc2.w_self")],
        ids[&format!("{prefix}.gc2.w_nbr")],
        ids[&format!("{prefix}.gc2.bias")],
        false,
    );
    tape.mean_rows(h2)
}

/// Same two convolutions without pooling (per-node features).
fn branch_nodes(
    tape: &mut Tape,
    ids: &BTreeMap<String, NodeId>,
    prefix: &str,
    feats: NodeId,
    adj: NodeId,
) -> NodeId {
    let h1 = graph_conv(
        tape,
        feats,
        adj,
        ids[&format!("{prefix}.gc1.w_self")],
        ids[&format!("{prefix}.gc1.w_nbr")],
        ids[&format!("{prefix}.gc1.bias")],
        true,
    );
    graph_conv(
        tape,
        h1,
        adj,
        ids[&format!("{prefix}.gc2.w_self")],
        ids[&format!("{prefix}.gc2.w_nbr")],
        ids[&format!("{prefix}.gc2.bias")],
        false,
    )
}

/// Parameter container shared by both networks.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: BTreeMap<String, Tensor>,
    pub adam: BTreeMap<String, AdamState>,
}

impl Model {
    fn init(shapes: &[(String, (usize, usize))], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = BTreeMap::new();
        let mut adam = BTreeMap::new();
        for (name, (r, c)) in shapes {
            let t = if name.ends_with(".bias") || name.ends_with('b') {
                Tensor::zeros(*r, *c)
            } else {
                glorot(&mut rng, *r, *c)
            };
            adam.insert(name.clone(), AdamState::for_shape(*r, *c));
            params.insert(name.clone(), t);
        }
        Model { params, adam }
    }

    fn shapes(&self) -> BTreeMap<String, (usize, usize)> {
        self.params.iter().map(|(k, t)| (k.clone(), t.shape())).collect()
    }

    /// Register every parameter as a tape leaf; returns name → node id.
    fn leaves(&self, tape: &mut Tape) -> BTreeMap<String, NodeId> {
        self.params.iter().map(|(k, t)| (k.clone(), tape.leaf(t.clone()))).collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::nn::save_checkpoint(path, &self.params)
    }

    fn load_into(&mut self, path: &Path) -> Result<()> {
        let expected = self.shapes();
        self.params = crate::nn::load_checkpoint(path, &expected)?;
        Ok(())
    }
}

/// Estimator: problem branch ⊕ mixer branch ⊕ depth feature → MLP → ŷ.
#[derive(Debug, Clone)]
pub struct CostEstimator {
    pub model: Model,
}

impl CostEstimator {
    pub fn shapes() -> Vec<(String, (usize, usize))> {
        let mut s = branch_shapes("prob");
        s.extend(branch_shapes("mix"));
        s.push(("head.w1".into(), (3 * HIDDEN, HEAD[0])));
        s.push(("head.b1".into(), (1, HEAD[0])));
        s.push(("head.w2".into(), (HEAD[0], HEAD[1])));
        s.push(("head.b2".into(), (1, HEAD[1])));
        s.push(("head.w3".into(), (HEAD[1], 1)));
        s.push(("head.b3".into(), (1, 1)));
        s
    }

    pub fn init(seed: u64) -> Self {
        CostEstimator { model: Model::init(&Self::shapes(), seed) }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut est = Self::init(0);
        est.model.load_into(path)?;
        Ok(est)
    }

    /// ŷ node for already-materialized inputs (mixer side may be soft).
    pub fn forward_on_tape(
        &self,
        tape: &mut Tape,
        ids: &BTreeMap<String, NodeId>,
        prob_feats: NodeId,
        prob_adj: NodeId,
        mix_feats: NodeId,
        mix_adj: NodeId,
        xp: NodeId,
    ) -> NodeId {
        let xc = branch_pooled(tape, ids, "prob", prob_feats, prob_adj);
        let xm = branch_pooled(tape, ids, "mix", mix_feats, mix_adj);
        let cm = tape.concat_cols(xc, xm);
        let all = tape.concat_cols(cm, xp);
        mlp_forward(
            tape,
            all,
            &[
                (ids["head.w1"], ids["head.b1"]),
                (ids["head.w2"], ids["head.b2"]),
                (ids["head.w3"], ids["head.b3"]),
            ],
        )
    }

    /// Predicted minimum cost for a (problem, mixer, depth) triple.
    pub fn predict(&self, problem: &GraphTensors, mixer: &GraphTensors, p: usize) -> Result<f64> {
        if problem.feats.cols != FEATURE_WIDTH || mixer.feats.cols != FEATURE_WIDTH {
            return Err(LearnError::Shape("feature width mismatch".into()));
        }
        let mut tape = Tape::new();
        let ids = self.model.leaves(&mut tape);
        let pf = tape.leaf(problem.feats.clone());
        let pa = tape.leaf(problem.adj.clone());
        let mf = tape.leaf(mixer.feats.clone());
        let ma = tape.leaf(mixer.adj.clone());
        let xp = tape.leaf(depth_tensor(p)?);
        let y = self.forward_on_tape(&mut tape, &ids, pf, pa, mf, ma, xp);
        Ok(tape.value(y).data[0])
    }
}

/// How the generator's discrete outputs are produced.
#[derive(Debug, Clone, Copy)]
pub enum SampleMode {
    /// Zero noise, argmax (the τ → 0 limit).
    Deterministic,
    /// Gumbel noise at the given temperature.
    Gumbel { tau: f64 },
}

/// Soft generator output: per-qubit type probabilities and per-pair
/// shared-parameter probabilities.
#[derive(Debug, Clone)]
pub struct SoftMixer {
    pub type_probs: Vec<[f64; 2]>,
    /// Pairs (i, j), i < j, in lexicographic order.
    pub edge_probs: Vec<f64>,
}

/// Generator: two GNN branches over the problem DAG; a node-classification
/// head for operator types and a link-prediction head for parameter sharing.
#[derive(Debug, Clone)]
pub struct MixerGenerator {
    pub model: Model,
}

pub(crate) fn qubit_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

impl MixerGenerator {
    pub fn shapes() -> Vec<(String, (usize, usize))> {
        let mut s = branch_shapes("type");
        s.extend(branch_shapes("link"));
        for head in ["type", "link"] {
            s.push((format!("{head}.head.w1"), (2 * HIDDEN, GEN_HEAD)));
            s.push((format!("{head}.head.b1"), (1, GEN_HEAD)));
            s.push((format!("{head}.head.w2"), (GEN_HEAD, 2)));
            s.push((format!("{head}.head.b2"), (1, 2)));
        }
        s
    }

    pub fn init(seed: u64) -> Self {
        MixerGenerator { model: Model::init(&Self::shapes(), seed) }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut gen = Self::init(0);
        gen.model.load_into(path)?;
        Ok(gen)
    }

    /// Type and edge probability nodes for one problem at one depth.
    /// Returns (type_probs N×2, edge_probs P×1).
    #[allow(clippy::too_many_arguments)]
    pub fn forward_on_tape(
        &self,
        tape: &mut Tape,
        ids: &BTreeMap<String, NodeId>,
        prob_feats: NodeId,
        prob_adj: NodeId,
        qubit_nodes: &[usize],
        xp: NodeId,
        mode: SampleMode,
        rng: &mut ChaCha8Rng,
    ) -> (NodeId, NodeId) {
        let n = qubit_nodes.len();
        let pairs = qubit_pairs(n);

        let head = |tape: &mut Tape, which: &str, x: NodeId| -> NodeId {
            mlp_forward(
                tape,
                x,
                &[
                    (ids[&format!("{which}.head.w1")], ids[&format!("{which}.head.b1")]),
                    (ids[&format!("{which}.head.w2")], ids[&format!("{which}.head.b2")]),
                ],
            )
        };
        let soften = |tape: &mut Tape, logits: NodeId, rows: usize, rng: &mut ChaCha8Rng| match mode
        {
            SampleMode::Deterministic => tape.hard_one_hot(logits),
            SampleMode::Gumbel { tau } => {
                let noise = tape.leaf(gumbel_noise(rows, 2, rng));
                let shifted = tape.add(logits, noise);
                let scaled = tape.scale(shifted, 1.0 / tau);
                tape.softmax_rows(scaled)
            }
        };

        // Operator-type head over the output nodes.
        let tnodes = branch_nodes(tape, ids, "type", prob_feats, prob_adj);
        let tsel = tape.select_rows(tnodes, qubit_nodes);
        let xp_rows = tape.broadcast_rows(xp, n);
        let tcat = tape.concat_cols(tsel, xp_rows);
        let tlogits = head(tape, "type", tcat);
        let type_probs = soften(tape, tlogits, n, rng);

        // Link head over pairwise elementwise products.
        let lnodes = branch_nodes(tape, ids, "link", prob_feats, prob_adj);
        let lsel = tape.select_rows(lnodes, qubit_nodes);
        let xp_rows2 = tape.broadcast_rows(xp, n);
        let lcat = tape.concat_cols(lsel, xp_rows2);
        let rows_i: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
        let rows_j: Vec<usize> = pairs.iter().map(|&(_, j)| j).collect();
        let xi = tape.select_rows(lcat, &rows_i);
        let xj = tape.select_rows(lcat, &rows_j);
        let prod = tape.mul(xi, xj);
        let llogits = head(tape, "link", prod);
        let link_probs = soften(tape, llogits, pairs.len(), rng);
        // Probability of class 1 (= shared parameter).
        let selector = tape.leaf(Tensor::from_vec(2, 1, vec![0.0, 1.0]));
        let edge_probs = tape.matmul(link_probs, selector);

        (type_probs, edge_probs)
    }

    /// Soft output (probabilities), no binarization.
    pub fn soft_spec(
        &self,
        problem: &GraphTensors,
        p: usize,
        mode: SampleMode,
        rng: &mut ChaCha8Rng,
    ) -> Result<SoftMixer> {
        let mut tape = Tape::new();
        let ids = self.model.leaves(&mut tape);
        let pf = tape.leaf(problem.feats.clone());
        let pa = tape.leaf(problem.adj.clone());
        let xp = tape.leaf(depth_tensor(p)?);
        let (tp, ep) =
            self.forward_on_tape(&mut tape, &ids, pf, pa, &problem.qubit_nodes, xp, mode, rng);
        let tpv = tape.value(tp);
        let type_probs =
            (0..problem.num_qubits).map(|q| [tpv.at(q, 0), tpv.at(q, 1)]).collect();
        let edge_probs = tape.value(ep).data.clone();
        Ok(SoftMixer { type_probs, edge_probs })
    }

    /// Hard output: a canonical mixer spec via connected components of the
    /// sampled edge indicators.
    pub fn hard_spec(
        &self,
        problem: &GraphTensors,
        p: usize,
        mode: SampleMode,
        rng: &mut ChaCha8Rng,
    ) -> Result<MixerSpec> {
        let soft = self.soft_spec(problem, p, mode, rng)?;
        let n = problem.num_qubits;
        let types: Vec<OpType> = soft
            .type_probs
            .iter()
            .map(|pr| if pr[0] >= pr[1] { OpType::X } else { OpType::Y })
            .collect();
        let mut indicator = vec![vec![false; n]; n];
        for (k, &(i, j)) in qubit_pairs(n).iter().enumerate() {
            if soft.edge_probs[k] >= 0.5 {
                indicator[i][j] = true;
                indicator[j][i] = true;
            }
        }
        let rgs = groups_from_edges(n, &indicator)?;
        Ok(MixerSpec::new(types, rgs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixgen_core::mixer::{encode_mixer, encode_problem, fg_spec};
    use mixgen_core::problems::{ProblemInstance, WeightedGraph};

    fn toy_problem() -> GraphTensors {
        let g = WeightedGraph::new(3, vec![(0, 1, 0.8), (1, 2, 0.4)]).unwrap();
        GraphTensors::from_encoded(&encode_problem(&ProblemInstance::maxcut(g)).unwrap())
    }

    #[test]
    fn estimator_is_deterministic() {
        let est = CostEstimator::init(7);
        let prob = toy_problem();
        let mix = GraphTensors::from_encoded(&encode_mixer(&fg_spec(3)));
        let a = est.predict(&prob, &mix, 12).unwrap();
        let b = est.predict(&prob, &mix, 12).unwrap();
        assert_eq!(a, b);
        assert!(a.is_finite());
        // Depth must matter through the embedding.
        let c = est.predict(&prob, &mix, 82).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn estimator_invariant_under_qubit_relabeling() {
        // Relabeling qubits permutes DAG nodes and mixer nodes jointly;
        // mean pooling over equivariant layers keeps ŷ fixed.
        let est = CostEstimator::init(3);
        let g = WeightedGraph::new(3, vec![(0, 1, 0.8), (1, 2, 0.4)]).unwrap();
        let inst = ProblemInstance::maxcut(g);
        // Relabel qubits by the permutation 0→2, 1→0, 2→1.
        let g2 = WeightedGraph::new(3, vec![(2, 0, 0.8), (0, 1, 0.4)]).unwrap();
        let inst2 = ProblemInstance::maxcut(g2);
        let prob = GraphTensors::from_encoded(&encode_problem(&inst).unwrap());
        let prob2 = GraphTensors::from_encoded(&encode_problem(&inst2).unwrap());
        // FG mixer is permutation-symmetric, so the mixer side is unchanged.
        let mix = GraphTensors::from_encoded(&encode_mixer(&fg_spec(3)));
        let a = est.predict(&prob, &mix, 12).unwrap();
        let b = est.predict(&prob2, &mix, 12).unwrap();
        assert!(
            (a - b).abs() < 1e-9,
            "permutation changed the prediction: {a} vs {b}"
        );
    }

    #[test]
    fn generator_hard_specs_are_canonical() {
        let gen = MixerGenerator::init(11);
        let prob = toy_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2usize, 12, 82] {
            let spec = gen.hard_spec(&prob, p, SampleMode::Gumbel { tau: 1.0 }, &mut rng).unwrap();
            assert_eq!(spec.num_qubits(), 3);
            // Construction through groups_from_edges canonicalizes; parsing
            // the printed form must round-trip.
            let round = MixerSpec::parse(&spec.to_string()).unwrap();
            assert_eq!(round, spec);
        }
    }

    #[test]
    fn deterministic_mode_matches_low_temperature_soft() {
        let gen = MixerGenerator::init(13);
        let prob = toy_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hard = gen.hard_spec(&prob, 12, SampleMode::Deterministic, &mut rng).unwrap();
        // Zero-noise soft at τ → 0 concentrates on the same argmax.
        let soft = gen.soft_spec(&prob, 12, SampleMode::Deterministic, &mut rng).unwrap();
        for (q, pr) in soft.type_probs.iter().enumerate() {
            let argmax = if pr[0] >= pr[1] { OpType::X } else { OpType::Y };
            assert_eq!(argmax, hard.types()[q]);
        }
    }

    #[test]
    fn checkpoint_round_trip_preserves_predictions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("est.json");
        let est = CostEstimator::init(21);
        est.model.save(&path).unwrap();
        let loaded = CostEstimator::load(&path).unwrap();
        let prob = toy_problem();
        let mix = GraphTensors::from_encoded(&encode_mixer(&fg_spec(3)));
        assert_eq!(
            est.predict(&prob, &mix, 42).unwrap(),
            loaded.predict(&prob, &mix, 42).unwrap()
        );
    }
}
