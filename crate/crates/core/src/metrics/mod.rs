//! Confusion-matrix metrics, ROC AUC, the F1 improvement figure and the
//! exact Wilcoxon signed-rank test.

mod auc;
mod confusion;
mod wilcoxon;

pub use auc::auc_roc;
pub use confusion::{confusion, f1_from, g_mean_from, improvement_pct, ConfusionMatrix, Score};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonOutcome, WilcoxonResult, EXACT_CAP};
