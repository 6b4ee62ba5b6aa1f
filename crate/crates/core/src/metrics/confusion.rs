use serde::{Deserialize, Serialize};

use crate::domain::Class;
use crate::error::{Error, Result};

/// A ratio that may have had a zero denominator. Undefined ratios carry
/// `value = 0` and `defined = false` so metric grids never abort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub defined: bool,
}

impl Score {
    fn ratio(num: f64, den: f64) -> Score {
        if den > 0.0 {
            Score {
                value: num / den,
                defined: true,
            }
        } else {
            Score {
                value: 0.0,
                defined: false,
            }
        }
    }
}

/// Cell counts with the given class treated as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> Score {
        Score::ratio(self.tp as f64, (self.tp + self.fp) as f64)
    }

    /// Sensitivity / true positive rate.
    pub fn recall(&self) -> Score {
        Score::ratio(self.tp as f64, (self.tp + self.fn_) as f64)
    }

    pub fn specificity(&self) -> Score {
        Score::ratio(self.tn as f64, (self.tn + self.fp) as f64)
    }

    pub fn accuracy(&self) -> Score {
        Score::ratio((self.tp + self.tn) as f64, self.total() as f64)
    }

    pub fn f1(&self) -> Score {
        let (p, r) = (self.precision(), self.recall());
        let f = f1_from(p.value, r.value);
        Score {
            value: f,
            defined: p.defined && r.defined && p.value + r.value > 0.0,
        }
    }

    pub fn g_mean(&self) -> Score {
        let (sens, spec) = (self.recall(), self.specificity());
        Score {
            value: (sens.value * spec.value).sqrt(),
            defined: sens.defined && spec.defined,
        }
    }
}

/// Harmonic mean 2PR/(P+R); 0 when P + R = 0.
pub fn f1_from(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// sqrt(sensitivity × specificity).
pub fn g_mean_from(sensitivity: f64, specificity: f64) -> f64 {
    (sensitivity * specificity).sqrt()
}

pub fn confusion(y_true: &[Class], y_pred: &[Class], positive: Class) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!(
            "{} true labels against {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut c = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == positive, p == positive) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Percentage change of a technique's F1 over the unresampled baseline;
/// `None` when the baseline is zero.
pub fn improvement_pct(f1_technique: f64, f1_original: f64) -> Option<f64> {
    (f1_original != 0.0).then(|| (f1_technique - f1_original) / f1_original * 100.0)
}
