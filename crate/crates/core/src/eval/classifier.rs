use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Class, Dataset, SeedSpec};
use crate::error::{Error, Result};
use crate::resample::neighbors::k_nearest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    #[default]
    Knn,
    Logistic,
}

impl std::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knn" => Ok(ClassifierKind::Knn),
            "logistic" | "lr" => Ok(ClassifierKind::Logistic),
            _ => Err(Error::invalid(format!("unknown classifier '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    pub k: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    /// Centre and scale features with statistics of the (resampled) training rows.
    pub standardize: bool,
    /// Start logistic weights from a seeded U(−0.01, 0.01) draw instead of zeros.
    pub random_init: bool,
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        ClassifierSpec {
            kind: ClassifierKind::Knn,
            k: 5,
            learning_rate: 0.1,
            epochs: 200,
            l2: 1e-4,
            standardize: true,
            random_init: false,
        }
    }
}

impl ClassifierSpec {
    pub fn knn(k: usize) -> Self {
        ClassifierSpec { k, ..Self::default() }
    }

    pub fn logistic() -> Self {
        ClassifierSpec {
            kind: ClassifierKind::Logistic,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::invalid("knn k must be at least 1"));
        }
        if !(self.learning_rate > 0.0) || self.epochs < 1 || !(self.l2 >= 0.0) {
            return Err(Error::invalid("logistic needs learning_rate > 0, epochs ≥ 1 and l2 ≥ 0"));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self.kind {
            ClassifierKind::Knn => format!("knn(k={})", self.k),
            ClassifierKind::Logistic => format!(
                "logistic(lr={}, epochs={}, l2={})",
                self.learning_rate, self.epochs, self.l2
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnPrediction {
    pub label: Class,
    /// Fraction of the k votes cast for the target class.
    pub score: f64,
    pub k_used: usize,
    pub k_clamped: bool,
}

/// Majority vote among the k nearest training rows. A tied vote goes to the
/// class of the single nearest row.
pub fn knn_predict(train: &Dataset, x: &[f64], k: usize, target: Class) -> Result<KnnPrediction> {
    if train.is_empty() {
        return Err(Error::invalid("knn needs a non-empty training set"));
    }
    if k < 1 {
        return Err(Error::invalid("knn k must be at least 1"));
    }
    if x.len() != train.n_features() {
        return Err(Error::invalid("query has the wrong number of features"));
    }
    let k_used = k.min(train.n_rows());
    let all: Vec<usize> = (0..train.n_rows()).collect();
    let nn = k_nearest(train, x, &all, None, k_used);
    let votes = nn.iter().filter(|&&i| train.label(i) == target).count();
    let label = match (2 * votes).cmp(&k_used) {
        std::cmp::Ordering::Greater => target,
        std::cmp::Ordering::Less => target.other(),
        std::cmp::Ordering::Equal => train.label(nn[0]),
    };
    Ok(KnnPrediction {
        label,
        score: votes as f64 / k_used as f64,
        k_used,
        k_clamped: k_used < k,
    })
}

/// Per-feature mean and population standard deviation; constant features
/// get scale 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    pub fn fit(d: &Dataset) -> Self {
        let n = d.n_rows().max(1) as f64;
        let means: Vec<f64> = (0..d.n_features()).map(|c| d.rows().map(|r| r[c]).sum::<f64>() / n).collect();
        let scales = (0..d.n_features())
            .map(|c| {
                let var = d.rows().map(|r| (r[c] - means[c]).powi(2)).sum::<f64>() / n;
                if var > 0.0 {
                    var.sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { means, scales }
    }

    pub fn identity(n_features: usize) -> Self {
        Standardizer {
            means: vec![0.0; n_features],
            scales: vec![1.0; n_features],
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.means.iter().zip(&self.scales))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn apply_all(&self, d: &Dataset) -> Result<Dataset> {
        let rows = d.rows().map(|r| self.apply(r)).collect();
        Ok(Dataset::new(d.feature_names().to_vec(), rows, d.labels().to_vec())?
            .with_label_names(d.positive_label(), d.negative_label()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Class scored as 1.
    pub target: Class,
    pub standardizer: Standardizer,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Full-batch gradient descent on the mean log-loss plus (l2/2)·|w|²; the
/// bias is not penalised.
pub fn logistic_fit(train: &Dataset, spec: &ClassifierSpec, target: Class, seed: SeedSpec) -> Result<LogisticModel> {
    spec.validate()?;
    if train.count(target) == 0 || train.count(target.other()) == 0 {
        return Err(Error::invalid("logistic fit needs both classes in the training set"));
    }
    let standardizer = if spec.standardize {
        Standardizer::fit(train)
    } else {
        Standardizer::identity(train.n_features())
    };
    let xs: Vec<Vec<f64>> = train.rows().map(|r| standardizer.apply(r)).collect();
    let ys: Vec<f64> = train.labels().iter().map(|&c| if c == target { 1.0 } else { 0.0 }).collect();
    let p = train.n_features();
    let mut w = if spec.random_init {
        let mut rng = seed.rng();
        (0..p).map(|_| rng.gen_range(-0.01..0.01)).collect()
    } else {
        vec![0.0; p]
    };
    let mut b = 0.0;
    let n = xs.len() as f64;
    let mut grad = vec![0.0; p];
    for _ in 0..spec.epochs {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            let z: f64 = b + x.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>();
            let err = sigmoid(z) - y;
            for (g, xi) in grad.iter_mut().zip(x) {
                *g += err * xi;
            }
            grad_b += err;
        }
        for (wi, g) in w.iter_mut().zip(&grad) {
            *wi -= spec.learning_rate * (g / n + spec.l2 * *wi);
        }
        b -= spec.learning_rate * grad_b / n;
    }
    Ok(LogisticModel {
        weights: w,
        bias: b,
        target,
        standardizer,
    })
}

impl LogisticModel {
    /// Probability of the target class.
    pub fn score(&self, x: &[f64]) -> f64 {
        let x = self.standardizer.apply(x);
        sigmoid(self.bias + x.iter().zip(&self.weights).map(|(a, c)| a * c).sum::<f64>())
    }

    pub fn predict(&self, x: &[f64]) -> Class {
        if self.score(x) >= 0.5 {
            self.target
        } else {
            self.target.other()
        }
    }
}
