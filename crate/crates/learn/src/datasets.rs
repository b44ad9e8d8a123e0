//! Instance sampling, estimator-label generation and JSON-lines dataset
//! serialization with a manifest for exact regeneration.

use crate::error::{LearnError, Result};
use mixgen_core::mixer::{fg_spec, grouping_pool, ng_spec, MixerSpec, OpType};
use mixgen_core::problems::{ProblemInstance, ProblemKind, WeightedGraph};
use mixgen_core::simulator::{optimize, CircuitSpec, OptimizeOptions};
use mixgen_core::statevector::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

/// SplitMix64-style mixing of a base seed with context words, so every
/// record draws from an independent, order-free stream.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = base;
    for &p in parts {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        state = z ^ (z >> 31);
    }
    state
}

/// Uniform random 3-regular simple graph (pairing model with rejection)
/// with i.i.d. U[0,1) edge weights.
pub fn sample_w3r(n: usize, rng: &mut ChaCha8Rng) -> Result<WeightedGraph> {
    if n < 4 || n % 2 != 0 {
        return Err(LearnError::Input(format!("3-regular graphs need even n ≥ 4, got {n}")));
    }
    'outer: loop {
        // Three half-edge stubs per vertex, random perfect matching.
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue 'outer; // self-loop or multi-edge: reject and retry
            }
            edges.push((a, b, 0.0));
        }
        for e in edges.iter_mut() {
            e.2 = rng.gen::<f64>();
        }
        return Ok(WeightedGraph::new(n, edges).expect("validated by construction"));
    }
}

/// 1D ring TFIM with J ~ U[0.5, 1.5] per edge and shared h ~ U[0.1, 2].
pub fn sample_tfim_1d(n: usize, rng: &mut ChaCha8Rng) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(LearnError::Input("TFIM needs n ≥ 2".into()));
    }
    let couplings: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let h = rng.gen_range(0.1..2.0);
    Ok(ProblemInstance::tfim_ring(&couplings, h)?)
}

pub fn sample_instance(kind: ProblemKind, n: usize, rng: &mut ChaCha8Rng) -> Result<ProblemInstance> {
    match kind {
        ProblemKind::MaxCut => Ok(ProblemInstance::maxcut(sample_w3r(n, rng)?)),
        ProblemKind::Tfim => sample_tfim_1d(n, rng),
    }
}

/// Optimization protocol behind each label.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LabelProtocol {
    pub restarts: usize,
    pub epochs: usize,
    pub lr: f64,
}

impl Default for LabelProtocol {
    fn default() -> Self {
        LabelProtocol { restarts: 10, epochs: 40, lr: 0.15 }
    }
}

/// Minimum loss over `restarts` independently seeded optimization runs.
pub fn build_label(
    instance: &ProblemInstance,
    mixer: &MixerSpec,
    p: usize,
    protocol: &LabelProtocol,
    seed: u64,
) -> Result<f64> {
    if protocol.restarts == 0 {
        return Err(LearnError::Input("restarts must be ≥ 1".into()));
    }
    let circuit = CircuitSpec::uniform(instance.cost_hamiltonian(), mixer.clone(), p)?;
    let psi0 = StateVector::plus_state(instance.num_qubits());
    let opts = OptimizeOptions { epochs: protocol.epochs, lr: protocol.lr, ..Default::default() };
    let mut best = f64::INFINITY;
    for r in 0..protocol.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[r as u64]));
        let report = optimize(&circuit, &psi0, &opts, &mut rng)?;
        best = best.min(report.best_loss);
    }
    Ok(best)
}

pub const DATASET_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetConfig {
    pub kind: ProblemKind,
    /// Number of problem instances S.
    pub instances: usize,
    pub n: usize,
    pub depths: Vec<usize>,
    pub types_per_instance: usize,
    pub groupings_per_type: usize,
    pub protocol: LabelProtocol,
    pub seed: u64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            kind: ProblemKind::MaxCut,
            instances: 100,
            n: 6,
            depths: vec![2, 12, 22, 42, 62, 82, 92],
            types_per_instance: 4,
            groupings_per_type: 5,
            protocol: LabelProtocol::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub config: DatasetConfig,
    pub records: usize,
    pub data_file: String,
}

/// One labeled sample: problem instance, mixer text form, depth, label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub schema_version: u32,
    pub index: usize,
    pub instance: serde_json::Value,
    pub mixer: String,
    pub p: usize,
    pub label: f64,
    pub label_seed: u64,
}

impl DatasetRecord {
    pub fn instance(&self) -> Result<ProblemInstance> {
        Ok(ProblemInstance::from_json(&self.instance.to_string())?)
    }

    pub fn mixer_spec(&self) -> Result<MixerSpec> {
        Ok(MixerSpec::parse(&self.mixer)?)
    }
}

/// Everything about record k except its label, derived deterministically
/// from the config.
struct RecordPlan {
    index: usize,
    instance: ProblemInstance,
    mixer: MixerSpec,
    p: usize,
    label_seed: u64,
}

fn plan_records(cfg: &DatasetConfig) -> Result<Vec<RecordPlan>> {
    let pool = grouping_pool(cfg.n).map_err(LearnError::Core)?;
    let mut plans = Vec::new();
    let mut index = 0usize;
    for i in 0..cfg.instances {
        let mut graph_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[1, i as u64]));
        let instance = sample_instance(cfg.kind, cfg.n, &mut graph_rng)?;
        for t in 0..cfg.types_per_instance {
            // The first type string is the all-X workhorse; the rest are
            // uniform over {X, Y}^N.
            let types: Vec<OpType> = if t == 0 {
                vec![OpType::X; cfg.n]
            } else {
                let mut trng =
                    ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[2, i as u64, t as u64]));
                (0..cfg.n)
                    .map(|_| if trng.gen_bool(0.5) { OpType::X } else { OpType::Y })
                    .collect()
            };
            // Groupings: for the all-X string the FG and NG partitions are
            // pinned so the depth behavior of both extremes is always
            // represented; the remainder is drawn from the pool without
            // replacement.
            let mut grng =
                ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[3, i as u64, t as u64]));
            let mut groupings: Vec<Vec<usize>> = Vec::new();
            if t == 0 {
                groupings.push(fg_spec(cfg.n).groups().to_vec());
                groupings.push(ng_spec(cfg.n).groups().to_vec());
            }
            let want = cfg.groupings_per_type.min(pool.len());
            let mut guard = 0usize;
            while groupings.len() < want {
                let cand = pool[grng.gen_range(0..pool.len())].clone();
                if !groupings.contains(&cand) {
                    groupings.push(cand);
                }
                guard += 1;
                if guard > 100 * cfg.groupings_per_type {
                    break;
                }
            }
            groupings.truncate(want);
            for rgs in groupings {
                let mixer = MixerSpec::new(types.clone(), rgs).map_err(LearnError::Core)?;
                for &p in &cfg.depths {
                    plans.push(RecordPlan {
                        index,
                        instance: instance.clone(),
                        mixer: mixer.clone(),
                        p,
                        label_seed: derive_seed(cfg.seed, &[4, index as u64]),
                    });
                    index += 1;
                }
            }
        }
    }
    Ok(plans)
}

/// Expected record count for a config: S × types × groupings × |depths|.
pub fn expected_record_count(cfg: &DatasetConfig) -> usize {
    let pool_cap = grouping_pool(cfg.n).map(|p| p.len()).unwrap_or(usize::MAX);
    cfg.instances
        * cfg.types_per_instance
        * cfg.groupings_per_type.min(pool_cap)
        * cfg.depths.len()
}

/// Build (or resume) a labeled dataset under `out_dir`: `data.jsonl` plus
/// `manifest.json`. Labels are generated in parallel but written in index
/// order, so regeneration with the same config is byte-identical.
pub fn build_estimator_dataset(cfg: &DatasetConfig, out_dir: &Path) -> Result<DatasetManifest> {
    std::fs::create_dir_all(out_dir)?;
    let data_path = out_dir.join("data.jsonl");
    let manifest_path = out_dir.join("manifest.json");

    let plans = plan_records(cfg)?;
    let done = if data_path.exists() {
        let file = std::fs::File::open(&data_path)?;
        std::io::BufReader::new(file).lines().count()
    } else {
        0
    };
    if done > plans.len() {
        return Err(LearnError::Input(format!(
            "existing data.jsonl has {done} records but the config plans {}; wrong directory?",
            plans.len()
        )));
    }

    let remaining: Vec<&RecordPlan> = plans[done..].iter().collect();
    let records: Vec<DatasetRecord> = remaining
        .par_iter()
        .map(|plan| -> Result<DatasetRecord> {
            let label =
                build_label(&plan.instance, &plan.mixer, plan.p, &cfg.protocol, plan.label_seed)?;
            Ok(DatasetRecord {
                schema_version: DATASET_SCHEMA_VERSION,
                index: plan.index,
                instance: serde_json::from_str(&plan.instance.to_json())?,
                mixer: plan.mixer.to_string(),
                p: plan.p,
                label,
                label_seed: plan.label_seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(&data_path)?;
    for record in &records {
        writeln!(file, "{}", serde_json::to_string(record)?)?;
    }
    file.flush()?;

    let manifest = DatasetManifest {
        schema_version: DATASET_SCHEMA_VERSION,
        config: cfg.clone(),
        records: plans.len(),
        data_file: "data.jsonl".to_string(),
    };
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Load a dataset directory written by [`build_estimator_dataset`].
pub fn load_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<DatasetRecord>)> {
    let manifest: DatasetManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    if manifest.schema_version != DATASET_SCHEMA_VERSION {
        return Err(LearnError::Input(format!(
            "dataset schema {} unsupported",
            manifest.schema_version
        )));
    }
    let file = std::fs::File::open(dir.join(&manifest.data_file))?;
    let mut records = Vec::with_capacity(manifest.records);
    for line in std::io::BufReader::new(file).lines() {
        let record: DatasetRecord = serde_json::from_str(&line?)?;
        records.push(record);
    }
    if records.len() != manifest.records {
        return Err(LearnError::Input(format!(
            "dataset incomplete: {} of {} records present (rerun generation to resume)",
            records.len(),
            manifest.records
        )));
    }
    Ok((manifest, records))
}

/// Sampled instances for held-out evaluation, seeded independently of any
/// training dataset.
pub fn sample_instances(
    kind: ProblemKind,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ProblemInstance>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[7, i as u64]));
            sample_instance(kind, n, &mut rng)
        })
        .collect()
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}
