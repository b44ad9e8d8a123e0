//! The learned mixer source, pluggable into the core strategy registry.

use super::{GraphTensors, MixerGenerator, SampleMode};
use mixgen_core::mixer::{encode_problem, MixerSpec};
use mixgen_core::problems::ProblemInstance;
use mixgen_core::strategy::MixerStrategy;
use mixgen_core::{CoreError, Result as CoreResult};
use rand_chacha::ChaCha8Rng;

/// Resolves mixers by running the trained generator on the encoded problem.
/// Inference is deterministic (argmax, the τ → 0 limit).
pub struct GeneratorStrategy {
    generator: MixerGenerator,
}

impl GeneratorStrategy {
    pub fn new(generator: MixerGenerator) -> Self {
        GeneratorStrategy { generator }
    }

    pub fn from_checkpoint(path: &std::path::Path) -> CoreResult<Self> {
        let generator = MixerGenerator::load(path)
            .map_err(|e| CoreError::Input(format!("loading generator checkpoint: {e}")))?;
        Ok(GeneratorStrategy { generator })
    }
}

impl MixerStrategy for GeneratorStrategy {
    fn name(&self) -> &str {
        "mgnet"
    }

    fn mixer(
        &self,
        instance: &ProblemInstance,
        depth: usize,
        rng: &mut ChaCha8Rng,
    ) -> CoreResult<MixerSpec> {
        let encoded = encode_problem(instance)?;
        let problem = GraphTensors::from_encoded(&encoded);
        self.generator
            .hard_spec(&problem, depth, SampleMode::Deterministic, rng)
            .map_err(|e| CoreError::Input(format!("generator inference: {e}")))
    }
}
