use crate::domain::Dataset;

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The `k` candidates closest to `query` by squared Euclidean distance,
/// nearest first. Equal distances go to the lower row index. `exclude` is
/// skipped (the query's own row).
pub(crate) fn k_nearest(d: &Dataset, query: &[f64], candidates: &[usize], exclude: Option<usize>, k: usize) -> Vec<usize> {
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .filter(|&&c| Some(c) != exclude)
        .map(|&c| (sq_dist(query, d.row(c)), c))
        .collect();
    let k = k.min(scored.len());
    if k == 0 {
        return Vec::new();
    }
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < scored.len() {
        scored.select_nth_unstable_by(k - 1, cmp);
        scored.truncate(k);
    }
    scored.sort_by(cmp);
    scored.into_iter().map(|(_, c)| c).collect()
}
