//! Minimal classifiers and the cross-validated experiment driver.
//!
//! Only the training part of each fold is resampled; the test part is scored
//! as it came out of the split.

mod classifier;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use classifier::{
    knn_predict, logistic_fit, ClassifierKind, ClassifierSpec, KnnPrediction, LogisticModel, Standardizer,
};

use crate::domain::{stratified_split, Class, ClassCounts, Dataset, SeedSpec, SplitSpec};
use crate::error::{Error, Result};
use crate::metrics::{auc_roc, confusion};
use crate::resample::{resample, ResamplePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    Precision,
    Recall,
    F1,
    GMean,
    Auc,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Accuracy,
        Metric::Precision,
        Metric::Recall,
        Metric::F1,
        Metric::GMean,
        Metric::Auc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::F1 => "f1",
            Metric::GMean => "g_mean",
            Metric::Auc => "auc",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "gmean" && *m == Metric::GMean))
            .ok_or_else(|| Error::invalid(format!("unknown metric '{s}'")))
    }
}

/// One value per metric. Metrics whose denominator was zero are 0 and named
/// in `undefined`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub g_mean: f64,
    pub auc: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<Metric>,
}

impl MetricBundle {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Accuracy => self.accuracy,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::F1 => self.f1,
            Metric::GMean => self.g_mean,
            Metric::Auc => self.auc,
        }
    }

    fn from_fn(f: impl Fn(Metric) -> f64) -> Self {
        MetricBundle {
            accuracy: f(Metric::Accuracy),
            precision: f(Metric::Precision),
            recall: f(Metric::Recall),
            f1: f(Metric::F1),
            g_mean: f(Metric::GMean),
            auc: f(Metric::Auc),
            undefined: Vec::new(),
        }
    }
}

/// Scores `predicted` labels and target-class `scores` against `truth`.
pub fn evaluate(truth: &[Class], predicted: &[Class], scores: &[f64], positive: Class) -> Result<MetricBundle> {
    let c = confusion(truth, predicted, positive)?;
    let mut undefined = Vec::new();
    let mut take = |m: Metric, s: crate::metrics::Score| {
        if !s.defined {
            undefined.push(m);
        }
        s.value
    };
    let accuracy = take(Metric::Accuracy, c.accuracy());
    let precision = take(Metric::Precision, c.precision());
    let recall = take(Metric::Recall, c.recall());
    let f1 = take(Metric::F1, c.f1());
    let g_mean = take(Metric::GMean, c.g_mean());
    let auc = match auc_roc(truth, scores, positive) {
        Ok(a) => a,
        Err(_) => {
            undefined.push(Metric::Auc);
            0.0
        }
    };
    Ok(MetricBundle {
        accuracy,
        precision,
        recall,
        f1,
        g_mean,
        auc,
        undefined,
    })
}

/// Fits `spec` on `train` and predicts every row of `test`, returning labels
/// and target-class scores.
pub fn fit_predict(
    train: &Dataset,
    test: &Dataset,
    spec: &ClassifierSpec,
    target: Class,
    seed: SeedSpec,
) -> Result<(Vec<Class>, Vec<f64>)> {
    spec.validate()?;
    match spec.kind {
        ClassifierKind::Knn => {
            let scaler = if spec.standardize {
                Standardizer::fit(train)
            } else {
                Standardizer::identity(train.n_features())
            };
            let scaled = scaler.apply_all(train)?;
            let preds = test
                .rows()
                .map(|r| knn_predict(&scaled, &scaler.apply(r), spec.k, target))
                .collect::<Result<Vec<_>>>()?;
            Ok(preds.iter().map(|p| (p.label, p.score)).unzip())
        }
        ClassifierKind::Logistic => {
            let model = logistic_fit(train, spec, target, seed)?;
            Ok(test.rows().map(|r| (model.predict(r), model.score(r))).unzip())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_counts: ClassCounts,
    /// Training counts after resampling (equal to `train_counts` without a plan).
    pub resampled_counts: ClassCounts,
    pub test_counts: ClassCounts,
    /// Input rows that formed the test part.
    pub test_rows: Vec<usize>,
    pub n_synthetic: usize,
    pub n_removed: usize,
    pub metrics: MetricBundle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// Resampling method name, or "original".
    pub condition: String,
    pub classifier: String,
    /// Which split protocol produced the folds.
    pub split: String,
    pub positive_class: Class,
    pub folds: Vec<FoldReport>,
    pub mean: MetricBundle,
    /// Sample standard deviation (n−1); 0 for a single fold.
    pub std: MetricBundle,
}

impl ExperimentResult {
    pub fn n_folds(&self) -> usize {
        self.folds.len()
    }

    /// One value per fold, in fold order.
    pub fn fold_values(&self, m: Metric) -> Vec<f64> {
        self.folds.iter().map(|f| f.metrics.get(m)).collect()
    }
}

/// Runs the split, resamples each training part with `plan` (or leaves it
/// alone for `None`), fits the classifier and scores the untouched test part.
///
/// Fold `i` draws from `seed.derive(i + 1)`: the resampler gets its stream 0
/// child and the classifier its stream 1 child. The plan's own seed is not
/// used. The minority class of the whole dataset is the positive class.
pub fn run_experiment(
    d: &Dataset,
    plan: Option<&ResamplePlan>,
    clf: &ClassifierSpec,
    split: &SplitSpec,
    seed: SeedSpec,
) -> Result<ExperimentResult> {
    clf.validate()?;
    if let Some(p) = plan {
        p.validate()?;
    }
    let positive = d.minority_class();
    let folds = stratified_split(d, split, seed)?;
    let reports = folds
        .par_iter()
        .enumerate()
        .map(|(i, fold)| {
            let fold_seed = seed.derive(i as u64 + 1);
            let (train, n_synthetic, n_removed) = match plan {
                Some(p) => {
                    let plan = ResamplePlan {
                        seed: fold_seed.derive(0),
                        ..p.clone()
                    };
                    let (out, report) = resample(&fold.train, &plan)?;
                    (out, report.n_synthetic + report.n_quantum_derived, report.n_removed)
                }
                None => (fold.train.clone(), 0, 0),
            };
            let (predicted, scores) = fit_predict(&train, &fold.test, clf, positive, fold_seed.derive(1))?;
            let metrics = evaluate(fold.test.labels(), &predicted, &scores, positive)?;
            Ok(FoldReport {
                fold: i,
                train_counts: fold.train.counts_for(positive),
                resampled_counts: train.counts_for(positive),
                test_counts: fold.test.counts_for(positive),
                test_rows: fold.test_rows.clone(),
                n_synthetic,
                n_removed,
                metrics,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = reports.len() as f64;
    let mean = MetricBundle::from_fn(|m| reports.iter().map(|f| f.metrics.get(m)).sum::<f64>() / n);
    let std = MetricBundle::from_fn(|m| {
        if reports.len() < 2 {
            return 0.0;
        }
        let mu = mean.get(m);
        (reports.iter().map(|f| (f.metrics.get(m) - mu).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    });
    Ok(ExperimentResult {
        condition: plan.map_or("original".to_string(), |p| p.method.to_string()),
        classifier: clf.describe(),
        split: split.describe(),
        positive_class: positive,
        folds: reports,
        mean,
        std,
    })
}
