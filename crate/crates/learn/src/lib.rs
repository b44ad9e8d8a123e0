//! Learning side of the workbench: a minimal tape autodiff layer, the cost
//! estimator and mixer generator networks with their two-stage training,
//! and the dataset pipeline that labels mixers by optimizing real circuits.

pub mod datasets;
pub mod error;
pub mod model;
pub mod nn;

pub use error::{LearnError, Result};
