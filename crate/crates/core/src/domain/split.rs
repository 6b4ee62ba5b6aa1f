use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Class, Dataset, SeedSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SplitMode {
    /// One train/test split with this fraction of rows held out.
    Holdout { test_fraction: f64 },
    /// k-fold cross-validation.
    KFold { n_folds: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn holdout(test_fraction: f64) -> Self {
        SplitSpec {
            mode: SplitMode::Holdout { test_fraction },
            stratified: true,
        }
    }

    pub fn k_fold(n_folds: usize) -> Self {
        SplitSpec {
            mode: SplitMode::KFold { n_folds },
            stratified: true,
        }
    }

    pub fn describe(&self) -> String {
        let kind = if self.stratified { "stratified " } else { "" };
        match self.mode {
            SplitMode::Holdout { test_fraction } => format!("{kind}holdout (test fraction {test_fraction})"),
            SplitMode::KFold { n_folds } => format!("{kind}{n_folds}-fold cross-validation"),
        }
    }
}

/// One train/test partition. Row indices refer to the dataset that was split.
#[derive(Debug, Clone)]
pub struct Fold {
    pub train: Dataset,
    pub test: Dataset,
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
}

/// Splits `d` into one holdout fold or `n_folds` cross-validation folds.
///
/// Rows keep their original relative order inside every part. In stratified
/// mode each class is shuffled and dealt out separately, so every test part
/// keeps the class ratio to within one row.
pub fn stratified_split(d: &Dataset, spec: &SplitSpec, seed: SeedSpec) -> Result<Vec<Fold>> {
    if d.is_empty() {
        return Err(Error::invalid("cannot split an empty dataset"));
    }
    let mut rng = seed.rng();
    let groups: Vec<Vec<usize>> = if spec.stratified {
        [Class::Positive, Class::Negative]
            .into_iter()
            .map(|c| d.indices_of(c))
            .filter(|g| !g.is_empty())
            .collect()
    } else {
        vec![(0..d.n_rows()).collect()]
    };
    let groups: Vec<Vec<usize>> = groups
        .into_iter()
        .map(|mut g| {
            g.shuffle(&mut rng);
            g
        })
        .collect();

    let n_parts;
    let mut part_of = vec![0usize; d.n_rows()];
    match spec.mode {
        SplitMode::Holdout { test_fraction } => {
            if !(test_fraction > 0.0 && test_fraction < 1.0) {
                return Err(Error::invalid(format!("test fraction {test_fraction} is not in (0, 1)")));
            }
            n_parts = 1;
            // part 0 = test, part 1 = train
            for g in &groups {
                let n_test = (g.len() as f64 * test_fraction).round() as usize;
                for (pos, &i) in g.iter().enumerate() {
                    part_of[i] = if pos < n_test { 0 } else { 1 };
                }
            }
        }
        SplitMode::KFold { n_folds } => {
            if n_folds < 2 {
                return Err(Error::invalid("cross-validation needs at least 2 folds"));
            }
            if let Some(g) = groups.iter().find(|g| g.len() < n_folds) {
                return Err(Error::invalid(format!(
                    "a class has {} rows, fewer than {n_folds} folds",
                    g.len()
                )));
            }
            n_parts = n_folds;
            let mut offset = 0;
            for g in &groups {
                for (pos, &i) in g.iter().enumerate() {
                    part_of[i] = (pos + offset) % n_folds;
                }
                offset = (offset + g.len()) % n_folds;
            }
        }
    }

    Ok((0..n_parts)
        .map(|p| {
            let (test_rows, train_rows): (Vec<usize>, Vec<usize>) = (0..d.n_rows()).partition(|&i| part_of[i] == p);
            Fold {
                train: d.select(&train_rows),
                test: d.select(&test_rows),
                train_rows,
                test_rows,
            }
        })
        .collect())
}
