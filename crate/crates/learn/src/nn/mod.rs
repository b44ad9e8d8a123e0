//! Minimal reverse-mode autodiff over row-major 2-D tensors.
//!
//! A [`Tape`] records primitive operations during the forward pass; the
//! backward sweep walks the nodes in exact reverse order. Just enough ops
//! for graph convolutions, MLP heads, Gumbel-Softmax sampling and the two
//! training losses.

mod adam;
mod checkpoint;
mod gumbel;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use gumbel::{gumbel_noise, sample_categorical};

use crate::error::{LearnError, Result};

/// Dense row-major matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Tensor { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape/data mismatch");
        Tensor { rows, cols, data }
    }

    pub fn scalar(v: f64) -> Self {
        Tensor { rows: 1, cols: 1, data: vec![v] }
    }

    pub fn row_slice(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

pub type NodeId = usize;

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    MatMul(NodeId, NodeId),
    Add(NodeId, NodeId),
    AddBias(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Relu(NodeId),
    Scale(NodeId, f64),
    MeanRows(NodeId),
    BroadcastRows(NodeId, usize),
    ConcatCols(NodeId, NodeId),
    SelectRows(NodeId, Vec<usize>),
    SoftmaxRows(NodeId),
    /// One-hot of the row argmax with a straight-through gradient.
    HardOneHot(NodeId),
    /// Scatter a (P×1) vector of pair weights into a symmetric N×N matrix.
    PairsToSymmetric(NodeId, Vec<(usize, usize)>, usize),
    /// Stack 1×1 scalars into an S×1 column.
    Stack(Vec<NodeId>),
    MseLoss(NodeId, Tensor),
    RankingLoss(NodeId, Tensor),
}

struct Node {
    op: Op,
    value: Tensor,
}

/// Record of one forward computation.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    fn push(&mut self, op: Op, value: Tensor) -> NodeId {
        self.nodes.push(Node { op, value });
        self.nodes.len() - 1
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id].value
    }

    /// Input tensor (constant or parameter; gradients are computed for all
    /// leaves, the caller decides which to read).
    pub fn leaf(&mut self, t: Tensor) -> NodeId {
        self.push(Op::Leaf, t)
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (ar, ac) = self.nodes[a].value.shape();
        let (br, bc) = self.nodes[b].value.shape();
        assert_eq!(ac, br, "matmul inner dims {ac} vs {br}");
        let mut out = Tensor::zeros(ar, bc);
        matmul_into(&self.nodes[a].value, &self.nodes[b].value, &mut out);
        self.push(Op::MatMul(a, b), out)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert_eq!(self.nodes[a].value.shape(), self.nodes[b].value.shape());
        let mut out = self.nodes[a].value.clone();
        for (o, x) in out.data.iter_mut().zip(&self.nodes[b].value.data) {
            *o += x;
        }
        self.push(Op::Add(a, b), out)
    }

    /// (r×c) + broadcast (1×c)
    pub fn add_bias(&mut self, a: NodeId, bias: NodeId) -> NodeId {
        let (_, c) = self.nodes[a].value.shape();
        assert_eq!(self.nodes[bias].value.shape(), (1, c));
        let mut out = self.nodes[a].value.clone();
        for r in 0..out.rows {
            for k in 0..c {
                out.data[r * c + k] += self.nodes[bias].value.data[k];
            }
        }
        self.push(Op::AddBias(a, bias), out)
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert_eq!(self.nodes[a].value.shape(), self.nodes[b].value.shape());
        let mut out = self.nodes[a].value.clone();
        for (o, x) in out.data.iter_mut().zip(&self.nodes[b].value.data) {
            *o *= x;
        }
        self.push(Op::Mul(a, b), out)
    }

    pub fn relu(&mut self, a: NodeId) -> NodeId {
        let mut out = self.nodes[a].value.clone();
        for v in out.data.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        self.push(Op::Relu(a), out)
    }

    pub fn scale(&mut self, a: NodeId, s: f64) -> NodeId {
        let mut out = self.nodes[a].value.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        self.push(Op::Scale(a, s), out)
    }

    pub fn mean_rows(&mut self, a: NodeId) -> NodeId {
        let (r, c) = self.nodes[a].value.shape();
        let mut out = Tensor::zeros(1, c);
        for row in 0..r {
            for k in 0..c {
                out.data[k] += self.nodes[a].value.data[row * c + k];
            }
        }
        for v in out.data.iter_mut() {
            *v /= r as f64;
        }
        self.push(Op::MeanRows(a), out)
    }

    pub fn broadcast_rows(&mut self, a: NodeId, rows: usize) -> NodeId {
        let (r, c) = self.nodes[a].value.shape();
        assert_eq!(r, 1, "broadcast expects a row vector");
        let mut out = Tensor::zeros(rows, c);
        for row in 0..rows {
            out.data[row * c..(row + 1) * c].copy_from_slice(&self.nodes[a].value.data);
        }
        self.push(Op::BroadcastRows(a, rows), out)
    }

    pub fn concat_cols(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (ar, ac) = self.nodes[a].value.shape();
        let (br, bc) = self.nodes[b].value.shape();
        assert_eq!(ar, br, "concat rows {ar} vs {br}");
        let mut out = Tensor::zeros(ar, ac + bc);
        for r in 0..ar {
            out.data[r * (ac + bc)..r * (ac + bc) + ac]
                .copy_from_slice(self.nodes[a].value.row_slice(r));
            out.data[r * (ac + bc) + ac..(r + 1) * (ac + bc)]
                .copy_from_slice(self.nodes[b].value.row_slice(r));
        }
        self.push(Op::ConcatCols(a, b), out)
    }

    pub fn select_rows(&mut self, a: NodeId, idx: &[usize]) -> NodeId {
        let (_, c) = self.nodes[a].value.shape();
        let mut out = Tensor::zeros(idx.len(), c);
        for (r, &i) in idx.iter().enumerate() {
            out.data[r * c..(r + 1) * c].copy_from_slice(self.nodes[a].value.row_slice(i));
        }
        self.push(Op::SelectRows(a, idx.to_vec()), out)
    }

    pub fn softmax_rows(&mut self, a: NodeId) -> NodeId {
        let (r, c) = self.nodes[a].value.shape();
        let mut out = Tensor::zeros(r, c);
        for row in 0..r {
            let slice = self.nodes[a].value.row_slice(row);
            let max = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for k in 0..c {
                let e = (slice[k] - max).exp();
                out.data[row * c + k] = e;
                sum += e;
            }
            for k in 0..c {
                out.data[row * c + k] /= sum;
            }
        }
        self.push(Op::SoftmaxRows(a), out)
    }

    /// Row-wise one-hot argmax with straight-through backward.
    pub fn hard_one_hot(&mut self, a: NodeId) -> NodeId {
        let (r, c) = self.nodes[a].value.shape();
        let mut out = Tensor::zeros(r, c);
        for row in 0..r {
            let slice = self.nodes[a].value.row_slice(row);
            let mut best = 0usize;
            for k in 1..c {
                if slice[k] > slice[best] {
                    best = k;
                }
            }
            out.data[row * c + best] = 1.0;
        }
        self.push(Op::HardOneHot(a), out)
    }

    /// Scatter pair weights (P×1, ordered as `pairs`) into a symmetric N×N
    /// adjacency with zero diagonal.
    pub fn pairs_to_symmetric(&mut self, a: NodeId, pairs: &[(usize, usize)], n: usize) -> NodeId {
        let (p, c) = self.nodes[a].value.shape();
        assert_eq!((p, c), (pairs.len(), 1));
        let mut out = Tensor::zeros(n, n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let w = self.nodes[a].value.data[k];
            out.data[i * n + j] = w;
            out.data[j * n + i] = w;
        }
        self.push(Op::PairsToSymmetric(a, pairs.to_vec(), n), out)
    }

    pub fn stack_scalars(&mut self, ids: &[NodeId]) -> NodeId {
        let mut out = Tensor::zeros(ids.len(), 1);
        for (k, &id) in ids.iter().enumerate() {
            assert_eq!(self.nodes[id].value.shape(), (1, 1));
            out.data[k] = self.nodes[id].value.data[0];
        }
        self.push(Op::Stack(ids.to_vec()), out)
    }

    /// L_e = (1/S)·Σ (y − ŷ)²
    pub fn mse_loss(&mut self, pred: NodeId, target: Tensor) -> NodeId {
        assert_eq!(self.nodes[pred].value.shape(), target.shape());
        let s = target.rows as f64;
        let v = self.nodes[pred]
            .value
            .data
            .iter()
            .zip(&target.data)
            .map(|(p, y)| (y - p) * (y - p))
            .sum::<f64>()
            / s;
        self.push(Op::MseLoss(pred, target), Tensor::scalar(v))
    }

    /// L_r = 1/(S²−S) · Σ_{i≠j} max(0, 1 − sign(y_i−y_j)(ŷ_i−ŷ_j)),
    /// with sign(0) = 0.
    pub fn ranking_loss(&mut self, pred: NodeId, target: Tensor) -> Result<NodeId> {
        let s = target.rows;
        if s < 2 {
            return Err(LearnError::Input("ranking loss needs S ≥ 2".into()));
        }
        assert_eq!(self.nodes[pred].value.shape(), target.shape());
        let p = &self.nodes[pred].value.data;
        let y = &target.data;
        let mut total = 0.0;
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                let sgn = sign(y[i] - y[j]);
                total += (1.0 - sgn * (p[i] - p[j])).max(0.0);
            }
        }
        let v = total / ((s * s - s) as f64);
        Ok(self.push(Op::RankingLoss(pred, target), Tensor::scalar(v)))
    }

    /// Reverse sweep from a scalar loss; returns one gradient slot per node.
    pub fn backward(&self, loss: NodeId) -> Vec<Option<Tensor>> {
        assert_eq!(self.nodes[loss].value.shape(), (1, 1), "loss must be scalar");
        let mut grads: Vec<Option<Tensor>> = vec![None; self.nodes.len()];
        grads[loss] = Some(Tensor::scalar(1.0));

        for id in (0..=loss).rev() {
            let Some(g) = grads[id].take() else { continue };
            match &self.nodes[id].op {
                Op::Leaf => {}
                Op::MatMul(a, b) => {
                    // dA += dC·Bᵀ ; dB += Aᵀ·dC
                    let bv = &self.nodes[*b].value;
                    let av = &self.nodes[*a].value;
                    {
                        let slot = grads[*a]
                            .get_or_insert_with(|| Tensor::zeros(av.rows, av.cols));
                        matmul_nt_into(&g, bv, slot);
                    }
                    {
                        let slot = grads[*b]
                            .get_or_insert_with(|| Tensor::zeros(bv.rows, bv.cols));
                        matmul_tn_into(av, &g, slot);
                    }
                }
                Op::Add(a, b) => {
                    accumulate(&mut grads, *a, &g);
                    accumulate(&mut grads, *b, &g);
                }
                Op::AddBias(a, bias) => {
                    accumulate(&mut grads, *a, &g);
                    let mut gb = Tensor::zeros(1, g.cols);
                    for r in 0..g.rows {
                        for k in 0..g.cols {
                            gb.data[k] += g.data[r * g.cols + k];
                        }
                    }
                    accumulate(&mut grads, *bias, &gb);
                }
                Op::Mul(a, b) => {
                    let mut ga = g.clone();
                    for (x, y) in ga.data.iter_mut().zip(&self.nodes[*b].value.data) {
                        *x *= y;
                    }
                    accumulate(&mut grads, *a, &ga);
                    let mut gb = g.clone();
                    for (x, y) in gb.data.iter_mut().zip(&self.nodes[*a].value.data) {
                        *x *= y;
                    }
                    accumulate(&mut grads, *b, &gb);
                }
                Op::Relu(a) => {
                    let mut ga = g.clone();
                    for (x, v) in ga.data.iter_mut().zip(&self.nodes[id].value.data) {
                        if *v <= 0.0 {
                            *x = 0.0;
                        }
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::Scale(a, s) => {
                    let mut ga = g.clone();
                    for x in ga.data.iter_mut() {
                        *x *= s;
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::MeanRows(a) => {
                    let (r, c) = self.nodes[*a].value.shape();
                    let mut ga = Tensor::zeros(r, c);
                    for row in 0..r {
                        for k in 0..c {
                            ga.data[row * c + k] = g.data[k] / r as f64;
                        }
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::BroadcastRows(a, rows) => {
                    let (_, c) = self.nodes[*a].value.shape();
                    let mut ga = Tensor::zeros(1, c);
                    for row in 0..*rows {
                        for k in 0..c {
                            ga.data[k] += g.data[row * c + k];
                        }
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::ConcatCols(a, b) => {
                    let (ar, ac) = self.nodes[*a].value.shape();
                    let (_, bc) = self.nodes[*b].value.shape();
                    let mut ga = Tensor::zeros(ar, ac);
                    let mut gb = Tensor::zeros(ar, bc);
                    for r in 0..ar {
                        ga.data[r * ac..(r + 1) * ac]
                            .copy_from_slice(&g.data[r * (ac + bc)..r * (ac + bc) + ac]);
                        gb.data[r * bc..(r + 1) * bc]
                            .copy_from_slice(&g.data[r * (ac + bc) + ac..(r + 1) * (ac + bc)]);
                    }
                    accumulate(&mut grads, *a, &ga);
                    accumulate(&mut grads, *b, &gb);
                }
                Op::SelectRows(a, idx) => {
                    let (ar, c) = self.nodes[*a].value.shape();
                    let mut ga = Tensor::zeros(ar, c);
                    for (r, &i) in idx.iter().enumerate() {
                        for k in 0..c {
                            ga.data[i * c + k] += g.data[r * c + k];
                        }
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::SoftmaxRows(a) => {
                    let y = &self.nodes[id].value;
                    let (r, c) = y.shape();
                    let mut ga = Tensor::zeros(r, c);
                    for row in 0..r {
                        let dot: f64 = (0..c)
                            .map(|k| g.data[row * c + k] * y.data[row * c + k])
                            .sum();
                        for k in 0..c {
                            ga.data[row * c + k] =
                                y.data[row * c + k] * (g.data[row * c + k] - dot);
                        }
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::HardOneHot(a) => {
                    // Straight-through: pass the gradient unchanged.
                    accumulate(&mut grads, *a, &g);
                }
                Op::PairsToSymmetric(a, pairs, n) => {
                    let mut ga = Tensor::zeros(pairs.len(), 1);
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        ga.data[k] = g.data[i * n + j] + g.data[j * n + i];
                    }
                    accumulate(&mut grads, *a, &ga);
                }
                Op::Stack(ids) => {
                    for (k, &cid) in ids.iter().enumerate() {
                        accumulate(&mut grads, cid, &Tensor::scalar(g.data[k]));
                    }
                }
                Op::MseLoss(pred, target) => {
                    let p = &self.nodes[*pred].value;
                    let s = target.rows as f64;
                    let mut gp = Tensor::zeros(p.rows, 1);
                    for k in 0..p.rows {
                        gp.data[k] = g.data[0] * 2.0 * (p.data[k] - target.data[k]) / s;
                    }
                    accumulate(&mut grads, *pred, &gp);
                }
                Op::RankingLoss(pred, target) => {
                    let p = &self.nodes[*pred].value;
                    let s = target.rows;
                    let norm = (s * s - s) as f64;
                    let mut gp = Tensor::zeros(s, 1);
                    for i in 0..s {
                        for j in 0..s {
                            if i == j {
                                continue;
                            }
                            let sgn = sign(target.data[i] - target.data[j]);
                            if 1.0 - sgn * (p.data[i] - p.data[j]) > 0.0 {
                                gp.data[i] -= sgn;
                                gp.data[j] += sgn;
                            }
                        }
                    }
                    for v in gp.data.iter_mut() {
                        *v *= g.data[0] / norm;
                    }
                    accumulate(&mut grads, *pred, &gp);
                }
            }
            // Leaf gradients stay readable after the sweep.
            if matches!(self.nodes[id].op, Op::Leaf) {
                grads[id] = Some(g);
            }
        }
        grads
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn accumulate(grads: &mut [Option<Tensor>], id: NodeId, g: &Tensor) {
    match &mut grads[id] {
        Some(t) => {
            for (a, b) in t.data.iter_mut().zip(&g.data) {
                *a += b;
            }
        }
        slot @ None => *slot = Some(g.clone()),
    }
}

/// C += A·B; i-k-j loop order over flat slices.
fn matmul_into(a: &Tensor, b: &Tensor, c: &mut Tensor) {
    let (ar, ac) = a.shape();
    let bc = b.cols;
    for i in 0..ar {
        for k in 0..ac {
            let aik = a.data[i * ac + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b.data[k * bc..(k + 1) * bc];
            let crow = &mut c.data[i * bc..(i + 1) * bc];
            for j in 0..bc {
                crow[j] += aik * brow[j];
            }
        }
    }
}

/// C += A·Bᵀ
fn matmul_nt_into(a: &Tensor, b: &Tensor, c: &mut Tensor) {
    let (ar, ac) = a.shape();
    let br = b.rows;
    for i in 0..ar {
        for j in 0..br {
            let mut acc = 0.0;
            let arow = &a.data[i * ac..(i + 1) * ac];
            let brow = &b.data[j * b.cols..j * b.cols + b.cols];
            for k in 0..ac {
                acc += arow[k] * brow[k];
            }
            c.data[i * br + j] += acc;
        }
    }
}

/// C += Aᵀ·B
fn matmul_tn_into(a: &Tensor, b: &Tensor, c: &mut Tensor) {
    let (ar, ac) = a.shape();
    let bc = b.cols;
    for k in 0..ar {
        for i in 0..ac {
            let aki = a.data[k * ac + i];
            if aki == 0.0 {
                continue;
            }
            let brow = &b.data[k * bc..(k + 1) * bc];
            let crow = &mut c.data[i * bc..(i + 1) * bc];
            for j in 0..bc {
                crow[j] += aki * brow[j];
            }
        }
    }
}

/// One graph-convolution layer on the tape:
/// H' = act(H·W_self + (A·H)·W_nbr + bias), identity activation when
/// `relu` is false (the convention for final layers).
#[allow(clippy::too_many_arguments)]
pub fn graph_conv(
    tape: &mut Tape,
    h: NodeId,
    adjacency: NodeId,
    w_self: NodeId,
    w_nbr: NodeId,
    bias: NodeId,
    relu: bool,
) -> NodeId {
    let own = tape.matmul(h, w_self);
    let nbr_feats = tape.matmul(adjacency, h);
    let nbr = tape.matmul(nbr_feats, w_nbr);
    let sum = tape.add(own, nbr);
    let out = tape.add_bias(sum, bias);
    if relu {
        tape.relu(out)
    } else {
        out
    }
}

/// Affine + ReLU stack with a linear final layer. `params` alternates
/// (weight, bias) per layer.
pub fn mlp_forward(tape: &mut Tape, x: NodeId, params: &[(NodeId, NodeId)]) -> NodeId {
    let mut cur = x;
    for (k, (w, b)) in params.iter().enumerate() {
        let z = tape.matmul(cur, *w);
        cur = tape.add_bias(z, *b);
        if k + 1 < params.len() {
            cur = tape.relu(cur);
        }
    }
    cur
}

/// Plain-value mean-squared error, for reporting outside the tape.
pub fn mse_value(pred: &[f64], target: &[f64]) -> f64 {
    assert_eq!(pred.len(), target.len());
    pred.iter().zip(target).map(|(p, y)| (y - p) * (y - p)).sum::<f64>() / pred.len() as f64
}

/// Plain-value ranking loss, for reporting outside the tape.
pub fn ranking_value(pred: &[f64], target: &[f64]) -> f64 {
    let s = pred.len();
    assert!(s >= 2);
    let mut total = 0.0;
    for i in 0..s {
        for j in 0..s {
            if i != j {
                total += (1.0 - sign(target[i] - target[j]) * (pred[i] - pred[j])).max(0.0);
            }
        }
    }
    total / ((s * s - s) as f64)
}
