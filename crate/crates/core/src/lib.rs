//! QAOA workbench core: symbolic Pauli algebra with Lie-closure and
//! effective-dimension diagnostics, an exact statevector engine with
//! analytic gradients, problem models with classical baselines, and the
//! generalized mixer model (typed operators + parameter-grouping
//! partitions) behind a runtime strategy registry.

pub mod dense;
pub mod designs;
pub mod error;
pub mod mixer;
pub mod pauli;
pub mod problems;
pub mod simulator;
pub mod statevector;
pub mod strategy;

pub use error::{CoreError, Result};
