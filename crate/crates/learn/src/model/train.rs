//! Two-stage training: supervised estimator fitting (MSE + ranking loss),
//! then unsupervised generator training against the frozen estimator.

use super::{depth_tensor, qubit_pairs, CostEstimator, GraphTensors, MixerGenerator, SampleMode};
use crate::error::{LearnError, Result};
use crate::nn::{adam_step, Tape, Tensor};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One supervised sample: encoded problem, encoded mixer, depth, label.
#[derive(Debug, Clone)]
pub struct EstimatorSample {
    pub problem: std::sync::Arc<GraphTensors>,
    pub mixer: GraphTensors,
    pub p: usize,
    pub label: f64,
}

#[derive(Debug, Clone)]
pub struct EstimatorTrainOptions {
    pub epochs: usize,
    pub lr: f64,
    pub lambda_e: f64,
    pub lambda_r: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for EstimatorTrainOptions {
    fn default() -> Self {
        EstimatorTrainOptions {
            epochs: 250,
            lr: 1e-4,
            lambda_e: 1.0,
            lambda_r: 1.0,
            batch_size: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    /// Mean combined loss per epoch.
    pub loss_trace: Vec<f64>,
    /// True when the ranking term was skipped (fewer than two samples).
    pub ranking_skipped: bool,
}

/// Stage-1 supervised training. The ranking loss is computed over each
/// mini-batch; a single-sample dataset trains on MSE alone.
pub fn train_estimator(
    estimator: &mut CostEstimator,
    samples: &[EstimatorSample],
    opts: &EstimatorTrainOptions,
) -> Result<TrainReport> {
    if samples.is_empty() {
        return Err(LearnError::Input("estimator training needs a nonempty dataset".into()));
    }
    if opts.epochs == 0 || opts.batch_size == 0 {
        return Err(LearnError::Input("epochs and batch_size must be ≥ 1".into()));
    }
    let ranking_skipped = samples.len() < 2 || opts.lambda_r == 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut loss_trace = Vec::with_capacity(opts.epochs);

    for epoch in 0..opts.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(opts.batch_size) {
            let mut tape = Tape::new();
            let ids = estimator.model.leaves(&mut tape);
            let mut preds = Vec::with_capacity(chunk.len());
            let mut targets = Vec::with_capacity(chunk.len());
            for &k in chunk {
                let s = &samples[k];
                let pf = tape.leaf(s.problem.feats.clone());
                let pa = tape.leaf(s.problem.adj.clone());
                let mf = tape.leaf(s.mixer.feats.clone());
                let ma = tape.leaf(s.mixer.adj.clone());
                let xp = tape.leaf(depth_tensor(s.p)?);
                preds.push(estimator.forward_on_tape(&mut tape, &ids, pf, pa, mf, ma, xp));
                targets.push(s.label);
            }
            let stacked = tape.stack_scalars(&preds);
            let target = Tensor::from_vec(targets.len(), 1, targets);
            let mse = tape.mse_loss(stacked, target.clone());
            let mut loss = tape.scale(mse, opts.lambda_e);
            if !ranking_skipped && chunk.len() >= 2 {
                let rank = tape.ranking_loss(stacked, target)?;
                let scaled = tape.scale(rank, opts.lambda_r);
                loss = tape.add(loss, scaled);
            }
            let loss_value = tape.value(loss).data[0];
            if !loss_value.is_finite() {
                return Err(LearnError::Numeric(format!(
                    "non-finite training loss at epoch {epoch}; trace: {loss_trace:?}"
                )));
            }
            let grads = tape.backward(loss);
            for (name, id) in &ids {
                if let Some(g) = &grads[*id] {
                    adam_step(
                        estimator.model.params.get_mut(name).expect("known parameter"),
                        g,
                        estimator.model.adam.get_mut(name).expect("known state"),
                        opts.lr,
                    )?;
                }
            }
            epoch_loss += loss_value;
            batches += 1;
        }
        loss_trace.push(epoch_loss / batches as f64);
    }
    Ok(TrainReport { loss_trace, ranking_skipped })
}

/// One stage-2 task: a problem at a target depth.
#[derive(Debug, Clone)]
pub struct GeneratorTask {
    pub problem: std::sync::Arc<GraphTensors>,
    pub p: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratorTrainOptions {
    pub epochs: usize,
    pub lr: f64,
    pub tau: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for GeneratorTrainOptions {
    fn default() -> Self {
        GeneratorTrainOptions { epochs: 250, lr: 1e-4, tau: 1.0, batch_size: 16, seed: 0 }
    }
}

/// Stage-2 unsupervised training: minimize the frozen estimator's predicted
/// cost of the generated soft mixers. Gradients flow through the soft
/// encodings (type probabilities as node features, shared-parameter
/// probabilities as edge weights); the estimator is observed, never updated.
pub fn train_generator(
    generator: &mut MixerGenerator,
    estimator: &CostEstimator,
    tasks: &[GeneratorTask],
    opts: &GeneratorTrainOptions,
) -> Result<TrainReport> {
    if tasks.is_empty() {
        return Err(LearnError::Input("generator training needs at least one task".into()));
    }
    if opts.tau <= 0.0 {
        return Err(LearnError::Input("temperature must be positive".into()));
    }
    // Type probabilities embed into the first two feature slots of G_M.
    let width = mixgen_core::mixer::FEATURE_WIDTH;
    let mut embed = Tensor::zeros(2, width);
    embed.data[0] = 1.0;
    embed.data[width + 1] = 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    let mut loss_trace = Vec::with_capacity(opts.epochs);

    for epoch in 0..opts.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(opts.batch_size) {
            let mut tape = Tape::new();
            let gen_ids = generator.model.leaves(&mut tape);
            let est_ids = estimator.model.leaves(&mut tape);
            let mut preds = Vec::with_capacity(chunk.len());
            for &k in chunk {
                let task = &tasks[k];
                let n = task.problem.num_qubits;
                let pf = tape.leaf(task.problem.feats.clone());
                let pa = tape.leaf(task.problem.adj.clone());
                let xp = tape.leaf(depth_tensor(task.p)?);
                let (type_probs, edge_probs) = generator.forward_on_tape(
                    &mut tape,
                    &gen_ids,
                    pf,
                    pa,
                    &task.problem.qubit_nodes,
                    xp,
                    SampleMode::Gumbel { tau: opts.tau },
                    &mut rng,
                );
                let embed_id = tape.leaf(embed.clone());
                let mix_feats = tape.matmul(type_probs, embed_id);
                let mix_adj = tape.pairs_to_symmetric(edge_probs, &qubit_pairs(n), n);
                preds.push(estimator.forward_on_tape(
                    &mut tape, &est_ids, pf, pa, mix_feats, mix_adj, xp,
                ));
            }
            let stacked = tape.stack_scalars(&preds);
            let loss = tape.mean_rows(stacked);
            let loss_value = tape.value(loss).data[0];
            if !loss_value.is_finite() {
                return Err(LearnError::Numeric(format!(
                    "non-finite generator loss at epoch {epoch}; trace: {loss_trace:?}"
                )));
            }
            let grads = tape.backward(loss);
            for (name, id) in &gen_ids {
                if let Some(g) = &grads[*id] {
                    adam_step(
                        generator.model.params.get_mut(name).expect("known parameter"),
                        g,
                        generator.model.adam.get_mut(name).expect("known state"),
                        opts.lr,
                    )?;
                }
            }
            epoch_loss += loss_value;
            batches += 1;
        }
        loss_trace.push(epoch_loss / batches as f64);
    }
    Ok(TrainReport { loss_trace, ranking_skipped: true })
}
