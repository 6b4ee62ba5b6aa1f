//! Datasets, class tags, seeded streams and splitting.

mod dataset;
mod seed;
mod split;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

pub use dataset::{Class, ClassCounts, Dataset};
pub use seed::{SeedSpec, StreamRng};
pub use split::{stratified_split, Fold, SplitMode, SplitSpec};

use crate::error::{Error, Result};

/// Class balance summary. `ir` is `None` when the minority class is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceReport {
    pub majority_count: usize,
    pub minority_count: usize,
    pub ir: Option<f64>,
}

pub fn imbalance_report(d: &Dataset) -> Result<ImbalanceReport> {
    if d.is_empty() {
        return Err(Error::invalid("imbalance of an empty dataset is undefined"));
    }
    let counts = d.counts_for(d.minority_class());
    Ok(ImbalanceReport {
        majority_count: counts.majority,
        minority_count: counts.minority,
        ir: (counts.minority > 0).then(|| counts.majority as f64 / counts.minority as f64),
    })
}

// Slack for comparing an imbalance ratio against a target read from text.
const IR_SLACK: f64 = 1e-9;

/// Removes minority rows at random until `floor(majority / target_ir)` remain.
///
/// Only ever removes minority rows, so the target must be at least the current
/// ratio. Surviving rows keep their original order.
pub fn make_imbalanced(d: &Dataset, target_ir: f64, seed: SeedSpec) -> Result<Dataset> {
    let report = imbalance_report(d)?;
    let current = report
        .ir
        .ok_or_else(|| Error::invalid("dataset has no minority rows"))?;
    if !target_ir.is_finite() || target_ir < current * (1.0 - IR_SLACK) {
        return Err(Error::invalid(format!(
            "target imbalance ratio {target_ir} is below the current ratio {current:.4}"
        )));
    }
    let minority = d.minority_class();
    let minority_rows = d.indices_of(minority);
    let keep = ((report.majority_count as f64 / target_ir) * (1.0 + IR_SLACK)).floor() as usize;
    let keep = keep.min(minority_rows.len());
    if keep == minority_rows.len() {
        return Ok(d.clone());
    }
    let mut rng = seed.rng();
    let chosen = sample(&mut rng, minority_rows.len(), minority_rows.len() - keep);
    let drop: Vec<usize> = chosen.iter().map(|p| minority_rows[p]).collect();
    Ok(d.without(&drop))
}
