use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::auc::average_ranks;
use crate::error::{Error, Result};

/// Largest retained-pair count for which the exact p-value is enumerated.
pub const EXACT_CAP: usize = 20;

// Differences are a − b of values read from text, so equal-looking
// differences can disagree in the last bits.
const TIE_TOL: f64 = 1e-12;

fn tied(x: f64, y: f64) -> bool {
    (x - y).abs() <= TIE_TOL * x.abs().max(y.abs()).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Pairs left after dropping zero differences.
    pub n_pairs: usize,
    pub n_zeros_dropped: usize,
    /// a − b for every input pair, in input order.
    pub differences: Vec<f64>,
    /// Input positions of the retained pairs.
    pub retained: Vec<usize>,
    /// Average ranks of |d| for the retained pairs, aligned with `retained`.
    pub ranks: Vec<f64>,
    pub signed_ranks: Vec<f64>,
    pub w_plus: f64,
    pub w_minus: f64,
    pub w: f64,
    /// Sizes of groups of tied |d| (size ≥ 2 only).
    pub tie_groups: Vec<usize>,
    /// Two-sided exact p; absent above [`EXACT_CAP`] pairs.
    pub p_exact: Option<f64>,
    /// Tie-corrected normal approximation.
    pub z: f64,
    pub p_approx: f64,
    /// |z| / √n.
    pub effect_size_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WilcoxonOutcome {
    Tested(WilcoxonResult),
    /// Every difference was zero; the test has nothing to rank.
    Undefined { n_zeros_dropped: usize },
}

impl WilcoxonOutcome {
    pub fn result(&self) -> Option<&WilcoxonResult> {
        match self {
            WilcoxonOutcome::Tested(r) => Some(r),
            WilcoxonOutcome::Undefined { .. } => None,
        }
    }
}

/// Paired two-sided signed-rank test of `a` against `b`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonOutcome> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::invalid(format!(
            "signed-rank test needs two equal, non-empty samples (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::invalid("signed-rank samples must be finite"));
    }
    let differences: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let retained: Vec<usize> = (0..a.len())
        .filter(|&i| differences[i].abs() > TIE_TOL * a[i].abs().max(b[i].abs()).max(1.0))
        .collect();
    let n_zeros_dropped = a.len() - retained.len();
    if retained.is_empty() {
        return Ok(WilcoxonOutcome::Undefined { n_zeros_dropped });
    }
    let n = retained.len();
    let magnitudes: Vec<f64> = retained.iter().map(|&i| differences[i].abs()).collect();
    let ranks = average_ranks(&magnitudes, tied);
    let signed_ranks: Vec<f64> = retained
        .iter()
        .zip(&ranks)
        .map(|(&i, &r)| if differences[i] > 0.0 { r } else { -r })
        .collect();
    let w_plus: f64 = signed_ranks.iter().filter(|r| **r > 0.0).sum();
    let w_minus: f64 = -signed_ranks.iter().filter(|r| **r < 0.0).sum::<f64>();
    let w = w_plus.min(w_minus);

    let tie_groups = tie_group_sizes(&ranks);
    let p_exact = (n <= EXACT_CAP).then(|| exact_p(&ranks, w));

    let nf = n as f64;
    let tie_term: f64 = tie_groups.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    let z = if variance > 0.0 {
        (w_plus - nf * (nf + 1.0) / 4.0) / variance.sqrt()
    } else {
        0.0
    };
    let normal = Normal::standard();
    let p_approx = (2.0 * (1.0 - normal.cdf(z.abs()))).min(1.0);

    Ok(WilcoxonOutcome::Tested(WilcoxonResult {
        n_pairs: n,
        n_zeros_dropped,
        differences,
        retained,
        ranks,
        signed_ranks,
        w_plus,
        w_minus,
        w,
        tie_groups,
        p_exact,
        z,
        p_approx,
        effect_size_r: z.abs() / nf.sqrt(),
    }))
}

fn tie_group_sizes(ranks: &[f64]) -> Vec<usize> {
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let j = (i..sorted.len()).find(|&j| sorted[j] != sorted[i]).unwrap_or(sorted.len());
        if j - i > 1 {
            groups.push(j - i);
        }
        i = j;
    }
    groups
}

/// P(W+ ≤ w) under random signs over the observed (average) ranks, doubled
/// and capped at 1. Ranks are multiples of ½, so the distribution is counted
/// exactly in half-rank units.
fn exact_p(ranks: &[f64], w: f64) -> f64 {
    let units: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = units.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &u in &units {
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + u] += counts[s];
            }
        }
        reach += u;
    }
    let limit = (2.0 * w).round() as usize;
    let at_or_below: u64 = counts[..=limit.min(total)].iter().sum();
    let p = 2.0 * at_or_below as f64 / (1u64 << ranks.len()) as f64;
    p.min(1.0)
}

impl WilcoxonResult {
    /// Differences table, rank table and summary table, tab separated.
    pub fn report(&self, a: &[f64], b: &[f64], label_a: &str, label_b: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Paired scores\nfold\t{label_a}\t{label_b}\tdifference");
        for (i, d) in self.differences.iter().enumerate() {
            let _ = writeln!(out, "{}\t{:.3}\t{:.3}\t{:.3}", i + 1, a[i], b[i], d);
        }
        let _ = writeln!(out, "\n# Ranks of |difference|\nfold\tdifference\trank");
        let mut order: Vec<usize> = (0..self.n_pairs).collect();
        order.sort_by(|&x, &y| self.ranks[x].total_cmp(&self.ranks[y]).then(x.cmp(&y)));
        for k in order {
            let i = self.retained[k];
            let _ = writeln!(out, "{}\t{:.3}\t{:.3}", i + 1, self.differences[i], self.ranks[k]);
        }
        if self.n_zeros_dropped > 0 {
            let _ = writeln!(out, "({} zero differences dropped)", self.n_zeros_dropped);
        }
        let p_exact = self.p_exact.map_or("n/a".to_string(), |p| format!("{p:.6}"));
        let _ = writeln!(
            out,
            "\n# Summary\ncomparison\tN\tT+\tT-\tW\tz\tp_exact\tp_approx\tr\n{label_a} vs {label_b}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{:.6}\t{:.3}",
            self.n_pairs, self.w_plus, self.w_minus, self.w, self.z, p_exact, self.p_approx, self.effect_size_r
        );
        out
    }
}
