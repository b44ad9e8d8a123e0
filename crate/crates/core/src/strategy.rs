//! Mixer-source strategies behind a common trait, registered by name and
//! selected at runtime from configuration or the command line.
//!
//! The built-in sources (`fg`, `ng`, `pg`, `ma`, `adapt`, `file:<spec>`)
//! live here; learned sources register themselves on top.

use crate::error::{CoreError, Result};
use crate::mixer::{fg_spec, ng_spec, pg_spec, MixerSpec};
use crate::problems::{adapt_qaoa, default_adapt_pool, ma_qaoa_spec, ProblemInstance};
use crate::simulator::{optimize, CircuitSpec, OptimizeOptions, OptimizeReport};
use crate::statevector::StateVector;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Settings for one solve: optimizer configuration plus restart count; the
/// best restart (by minimum loss along the run) wins.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub optimizer: OptimizeOptions,
    pub restarts: usize,
    /// ADAPT stopping threshold on the selection score.
    pub adapt_grad_threshold: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            optimizer: OptimizeOptions::default(),
            restarts: 10,
            adapt_grad_threshold: 1e-4,
        }
    }
}

/// Result of solving one instance with one mixer source.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub circuit: CircuitSpec,
    pub report: OptimizeReport,
    /// The resolved mixer, when the source produces one spec for all layers.
    pub mixer: Option<MixerSpec>,
    /// Best loss over restarts (equals `report.best_loss`).
    pub loss: f64,
}

/// A named way of choosing the mixer for a (problem, depth) pair.
pub trait MixerStrategy: Send + Sync {
    fn name(&self) -> &str;

    /// Resolve the mixer spec for this instance and depth.
    fn mixer(&self, instance: &ProblemInstance, depth: usize, rng: &mut ChaCha8Rng)
        -> Result<MixerSpec>;

    /// Build, optimize and report. The default route resolves the mixer,
    /// builds the uniform circuit and minimizes ⟨H_C⟩ over `restarts`
    /// seeded runs; adaptive strategies override this wholesale.
    fn solve(
        &self,
        instance: &ProblemInstance,
        depth: usize,
        opts: &SolveOptions,
        rng: &mut ChaCha8Rng,
    ) -> Result<SolveOutcome> {
        let spec = self.mixer(instance, depth, rng)?;
        let circuit = CircuitSpec::uniform(instance.cost_hamiltonian(), spec.clone(), depth)?;
        let psi0 = StateVector::plus_state(instance.num_qubits());
        if opts.restarts == 0 {
            return Err(CoreError::input("restarts must be ≥ 1"));
        }
        let mut best: Option<OptimizeReport> = None;
        for _ in 0..opts.restarts {
            let report = optimize(&circuit, &psi0, &opts.optimizer, rng)?;
            let better = best.as_ref().map_or(true, |b| report.best_loss < b.best_loss);
            if better {
                best = Some(report);
            }
        }
        let report = best.expect("restarts ≥ 1");
        let loss = report.best_loss;
        Ok(SolveOutcome { circuit, report, mixer: Some(spec), loss })
    }
}

/// Strategies keyed by name. `resolve` also understands the `file:<spec>`
/// form for literal mixer text.
pub struct StrategyRegistry {
    strategies: BTreeMap<String, Box<dyn MixerStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { strategies: BTreeMap::new() }
    }

    /// Registry with the non-learned built-ins.
    pub fn with_builtins() -> Self {
        let mut reg = StrategyRegistry::empty();
        reg.register(Box::new(FgStrategy));
        reg.register(Box::new(NgStrategy));
        reg.register(Box::new(PgStrategy));
        reg.register(Box::new(MaStrategy));
        reg.register(Box::new(AdaptStrategy));
        reg
    }

    pub fn register(&mut self, strategy: Box<dyn MixerStrategy>) {
        self.strategies.insert(strategy.name().to_string(), strategy);
    }

    pub fn names(&self) -> Vec<&str> {
        self.strategies.keys().map(|s| s.as_str()).collect()
    }

    /// Look up a source string: a registered name or `file:<types>/<rgs>`.
    pub fn resolve(&self, source: &str) -> Result<Box<dyn MixerStrategy + '_>> {
        if let Some(text) = source.strip_prefix("file:") {
            let spec = MixerSpec::parse(text)?;
            return Ok(Box::new(FixedSpecStrategy { spec }));
        }
        match self.strategies.get(source) {
            Some(s) => Ok(Box::new(BorrowedStrategy(s.as_ref()))),
            None => Err(CoreError::input(format!(
                "unknown mixer source `{source}`; known: {} or file:<types>/<rgs>",
                self.names().join(", ")
            ))),
        }
    }
}

struct BorrowedStrategy<'a>(&'a dyn MixerStrategy);

impl MixerStrategy for BorrowedStrategy<'_> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn mixer(&self, instance: &ProblemInstance, depth: usize, rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        self.0.mixer(instance, depth, rng)
    }
    fn solve(
        &self,
        instance: &ProblemInstance,
        depth: usize,
        opts: &SolveOptions,
        rng: &mut ChaCha8Rng,
    ) -> Result<SolveOutcome> {
        self.0.solve(instance, depth, opts, rng)
    }
}

struct FgStrategy;

impl MixerStrategy for FgStrategy {
    fn name(&self) -> &str {
        "fg"
    }
    fn mixer(&self, instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        Ok(fg_spec(instance.num_qubits()))
    }
}

struct NgStrategy;

impl MixerStrategy for NgStrategy {
    fn name(&self) -> &str {
        "ng"
    }
    fn mixer(&self, instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        Ok(ng_spec(instance.num_qubits()))
    }
}

struct PgStrategy;

impl MixerStrategy for PgStrategy {
    fn name(&self) -> &str {
        "pg"
    }
    fn mixer(&self, instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        pg_spec(&instance.graph)
    }
}

struct MaStrategy;

impl MixerStrategy for MaStrategy {
    fn name(&self) -> &str {
        "ma"
    }
    fn mixer(&self, instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        Ok(ma_qaoa_spec(instance.num_qubits()))
    }
}

/// A literal `<types>/<rgs>` spec from the command line or a file.
pub struct FixedSpecStrategy {
    pub spec: MixerSpec,
}

impl MixerStrategy for FixedSpecStrategy {
    fn name(&self) -> &str {
        "file"
    }
    fn mixer(&self, instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        if self.spec.num_qubits() != instance.num_qubits() {
            return Err(CoreError::Dimension {
                left: instance.num_qubits(),
                right: self.spec.num_qubits(),
            });
        }
        Ok(self.spec.clone())
    }
}

struct AdaptStrategy;

impl MixerStrategy for AdaptStrategy {
    fn name(&self) -> &str {
        "adapt"
    }
    fn mixer(&self, _instance: &ProblemInstance, _depth: usize, _rng: &mut ChaCha8Rng)
        -> Result<MixerSpec> {
        Err(CoreError::Unsupported(
            "adapt selects per-layer pool operators; use solve()".into(),
        ))
    }
    fn solve(
        &self,
        instance: &ProblemInstance,
        depth: usize,
        opts: &SolveOptions,
        _rng: &mut ChaCha8Rng,
    ) -> Result<SolveOutcome> {
        // Selection and the warm-started re-optimizations are deterministic,
        // so a single construction suffices.
        let pool = default_adapt_pool(instance.num_qubits());
        let out = adapt_qaoa(instance, &pool, depth, opts.adapt_grad_threshold, &opts.optimizer)?;
        let loss = out.report.best_loss;
        Ok(SolveOutcome { circuit: out.circuit, report: out.report, mixer: None, loss })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::WeightedGraph;
    use rand::SeedableRng;

    fn toy_instance() -> ProblemInstance {
        ProblemInstance::maxcut(WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap())
    }

    #[test]
    fn builtins_resolve_by_name() {
        let reg = StrategyRegistry::with_builtins();
        assert_eq!(reg.names(), vec!["adapt", "fg", "ma", "ng", "pg"]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = toy_instance();
        let fg = reg.resolve("fg").unwrap().mixer(&inst, 2, &mut rng).unwrap();
        assert_eq!(fg.to_string(), "XXX/0-0-0");
        let ng = reg.resolve("ng").unwrap().mixer(&inst, 2, &mut rng).unwrap();
        assert_eq!(ng.to_string(), "XXX/0-1-2");
        let pg = reg.resolve("pg").unwrap().mixer(&inst, 2, &mut rng).unwrap();
        assert_eq!(pg.to_string(), "XXX/0-1-0");
        let ma = reg.resolve("ma").unwrap().mixer(&inst, 2, &mut rng).unwrap();
        assert_eq!(ma, ng);
    }

    #[test]
    fn file_source_round_trips() {
        let reg = StrategyRegistry::with_builtins();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let inst = toy_instance();
        let s = reg.resolve("file:XYX/0-1-0").unwrap();
        let spec = s.mixer(&inst, 1, &mut rng).unwrap();
        assert_eq!(spec.to_string(), "XYX/0-1-0");
        assert!(reg.resolve("file:XYX/0-2-0").is_err());
        assert!(reg.resolve("bogus").is_err());
    }

    #[test]
    fn default_solve_reports_parameter_count() {
        let reg = StrategyRegistry::with_builtins();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = toy_instance();
        let opts = SolveOptions {
            optimizer: OptimizeOptions { epochs: 5, ..Default::default() },
            restarts: 2,
            ..Default::default()
        };
        let out = reg.resolve("ng").unwrap().solve(&inst, 2, &opts, &mut rng).unwrap();
        // p·(1 + K) = 2·(1 + 3)
        assert_eq!(out.circuit.num_parameters(), 8);
        assert_eq!(out.report.loss_trace.len(), 5);
    }
}
