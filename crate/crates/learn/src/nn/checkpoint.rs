//! Versioned JSON checkpoints: named tensors plus a shape manifest. Loading
//! rejects any shape mismatch against the expected manifest.

use super::Tensor;
use crate::error::{LearnError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TensorRecord {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    format_version: u32,
    tensors: BTreeMap<String, TensorRecord>,
}

pub fn save_checkpoint(path: &Path, tensors: &BTreeMap<String, Tensor>) -> Result<()> {
    let file = CheckpointFile {
        format_version: FORMAT_VERSION,
        tensors: tensors
            .iter()
            .map(|(k, t)| {
                (k.clone(), TensorRecord { rows: t.rows, cols: t.cols, data: t.data.clone() })
            })
            .collect(),
    };
    let json = serde_json::to_string(&file)?;
    std::fs::write(path, json)?;
    Ok(())
}

/// Load a checkpoint, validating names and shapes against `expected`.
pub fn load_checkpoint(
    path: &Path,
    expected: &BTreeMap<String, (usize, usize)>,
) -> Result<BTreeMap<String, Tensor>> {
    let text = std::fs::read_to_string(path)?;
    let file: CheckpointFile = serde_json::from_str(&text)?;
    if file.format_version != FORMAT_VERSION {
        return Err(LearnError::Input(format!(
            "checkpoint format {} unsupported (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    let mut out = BTreeMap::new();
    for (name, &(rows, cols)) in expected {
        let rec = file.tensors.get(name).ok_or_else(|| {
            LearnError::Input(format!("checkpoint missing tensor `{name}`"))
        })?;
        if (rec.rows, rec.cols) != (rows, cols) || rec.data.len() != rows * cols {
            return Err(LearnError::Shape(format!(
                "tensor `{name}`: checkpoint {}×{}, model expects {rows}×{cols}",
                rec.rows, rec.cols
            )));
        }
        out.insert(name.clone(), Tensor::from_vec(rows, cols, rec.data.clone()));
    }
    Ok(out)
}
