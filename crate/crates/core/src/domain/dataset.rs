use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class tag. `Positive` is whichever raw label value the schema
/// designates as the positive class; minority/majority is decided from counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Positive,
    Negative,
}

impl Class {
    pub fn other(self) -> Class {
        match self {
            Class::Positive => Class::Negative,
            Class::Negative => Class::Positive,
        }
    }
}

/// Row counts of the two classes, named relative to a fixed minority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub minority: usize,
    pub majority: usize,
}

/// Feature matrix (row-major, finite values only) with one binary label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    feature_names: Vec<String>,
    features: Vec<f64>,
    labels: Vec<Class>,
    positive_label: String,
    negative_label: String,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<Class>) -> Result<Self> {
        let n_features = feature_names.len();
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::invalid(format!(
                    "row {i} has {} values, expected {n_features}",
                    row.len()
                )));
            }
            features.extend_from_slice(row);
        }
        Self::from_flat(feature_names, features, labels)
    }

    /// Builds a dataset from a row-major buffer of `labels.len() * feature_names.len()` values.
    pub fn from_flat(feature_names: Vec<String>, features: Vec<f64>, labels: Vec<Class>) -> Result<Self> {
        if feature_names.is_empty() {
            return Err(Error::invalid("a dataset needs at least one feature"));
        }
        if features.len() != labels.len() * feature_names.len() {
            return Err(Error::invalid(format!(
                "{} feature values do not fill {} rows of {} features",
                features.len(),
                labels.len(),
                feature_names.len()
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite feature value at row {}, column {}",
                pos / feature_names.len(),
                pos % feature_names.len()
            )));
        }
        Ok(Dataset {
            feature_names,
            features,
            labels,
            positive_label: "1".to_string(),
            negative_label: "0".to_string(),
        })
    }

    /// Array-style constructor for host bindings: integer labels, one of which is positive.
    pub fn from_arrays(features: Vec<f64>, n_features: usize, labels: &[i64], positive: i64) -> Result<Self> {
        let mut distinct: Vec<i64> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() > 2 {
            return Err(Error::invalid(format!("labels must be binary, found {} values", distinct.len())));
        }
        let negative = distinct.iter().copied().find(|&v| v != positive).unwrap_or(positive ^ 1);
        let names = (0..n_features).map(|i| format!("f{i}")).collect();
        let tags = labels
            .iter()
            .map(|&l| if l == positive { Class::Positive } else { Class::Negative })
            .collect();
        Ok(Self::from_flat(names, features, tags)?.with_label_names(positive.to_string(), negative.to_string()))
    }

    pub fn with_label_names(mut self, positive: impl Into<String>, negative: impl Into<String>) -> Self {
        self.positive_label = positive.into();
        self.negative_label = negative.into();
        self
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_features();
        &self.features[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features())
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Class {
        self.labels[i]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn positive_label(&self) -> &str {
        &self.positive_label
    }

    pub fn negative_label(&self) -> &str {
        &self.negative_label
    }

    pub fn label_name(&self, class: Class) -> &str {
        match class {
            Class::Positive => &self.positive_label,
            Class::Negative => &self.negative_label,
        }
    }

    pub fn count(&self, class: Class) -> usize {
        self.labels.iter().filter(|&&c| c == class).count()
    }

    /// The class with fewer rows; ties go to the positive class.
    pub fn minority_class(&self) -> Class {
        if self.count(Class::Negative) < self.count(Class::Positive) {
            Class::Negative
        } else {
            Class::Positive
        }
    }

    pub fn majority_class(&self) -> Class {
        self.minority_class().other()
    }

    /// Counts with `minority` naming the given class.
    pub fn counts_for(&self, minority: Class) -> ClassCounts {
        ClassCounts {
            minority: self.count(minority),
            majority: self.count(minority.other()),
        }
    }

    pub fn indices_of(&self, class: Class) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.labels[i] == class).collect()
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let n = self.n_features();
        let mut features = Vec::with_capacity(indices.len() * n);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            feature_names: self.feature_names.clone(),
            features,
            labels,
            positive_label: self.positive_label.clone(),
            negative_label: self.negative_label.clone(),
        }
    }

    /// Copy of this dataset with `indices` removed.
    pub fn without(&self, indices: &[usize]) -> Dataset {
        let mut drop = vec![false; self.n_rows()];
        for &i in indices {
            drop[i] = true;
        }
        let keep: Vec<usize> = (0..self.n_rows()).filter(|&i| !drop[i]).collect();
        self.select(&keep)
    }

    pub(crate) fn push_row(&mut self, row: &[f64], label: Class) -> Result<()> {
        if row.len() != self.n_features() {
            return Err(Error::invalid(format!(
                "row has {} values, expected {}",
                row.len(),
                self.n_features()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite value in appended row"));
        }
        self.features.extend_from_slice(row);
        self.labels.push(label);
        Ok(())
    }
}
