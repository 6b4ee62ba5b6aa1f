use crate::domain::Class;
use crate::error::{Error, Result};

/// Average 1-based ranks, ties sharing the mean of the positions they span.
pub(crate) fn average_ranks(values: &[f64], tie: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && tie(values[order[end]], values[order[start]]) {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// ROC AUC as the probability that a random positive outscores a random
/// negative, ties counting ½ (Mann–Whitney form).
pub fn auc_roc(y_true: &[Class], scores: &[f64], positive: Class) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::invalid("labels and scores differ in length"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::invalid("NaN score"));
    }
    let n_pos = y_true.iter().filter(|&&c| c == positive).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid("AUC needs both classes present"));
    }
    let ranks = average_ranks(scores, |a, b| a == b);
    let rank_sum: f64 = ranks.iter().zip(y_true).filter(|(_, &c)| c == positive).map(|(r, _)| r).sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}
