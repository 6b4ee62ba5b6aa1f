use super::neighbors::k_nearest;
use super::smote::smote_with;
use super::{CleaningPhase, Method, Origin, Provenance, ResamplePlan, ResampleReport};
use crate::domain::{Class, Dataset};
use crate::error::{Error, Result};

const ENN_K: usize = 3;

/// Edited nearest neighbours: drops every row whose 3 nearest neighbours
/// vote for the other class. Votes are taken on the input; removals are
/// applied together. Returns the cleaned data and the removed indices.
pub fn enn_clean(d: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    if d.n_rows() < ENN_K + 1 {
        return Err(Error::invalid(format!(
            "edited nearest neighbours needs at least {} rows, got {}",
            ENN_K + 1,
            d.n_rows()
        )));
    }
    let all: Vec<usize> = (0..d.n_rows()).collect();
    let removed: Vec<usize> = all
        .iter()
        .copied()
        .filter(|&i| {
            let agree = k_nearest(d, d.row(i), &all, Some(i), ENN_K)
                .into_iter()
                .filter(|&j| d.label(j) == d.label(i))
                .count();
            2 * agree < ENN_K
        })
        .collect();
    Ok((d.without(&removed), removed))
}

/// Removes the majority-class member of every Tomek link (a mutual nearest
/// neighbour pair with opposite labels).
pub fn tomek_clean(d: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    tomek_clean_removing(d, d.majority_class())
}

/// As [`tomek_clean`], naming the class to remove from each link. After
/// balancing the counts tie, so callers pass the original majority.
pub fn tomek_clean_removing(d: &Dataset, remove: Class) -> Result<(Dataset, Vec<usize>)> {
    if d.n_rows() < 2 {
        return Ok((d.clone(), Vec::new()));
    }
    let all: Vec<usize> = (0..d.n_rows()).collect();
    let nearest: Vec<usize> = all.iter().map(|&i| k_nearest(d, d.row(i), &all, Some(i), 1)[0]).collect();
    let removed: Vec<usize> = all
        .iter()
        .copied()
        .filter(|&i| {
            let j = nearest[i];
            d.label(i) == remove && d.label(j) != remove && nearest[j] == i
        })
        .collect();
    Ok((d.without(&removed), removed))
}

fn smote_then(
    d: &Dataset,
    plan: &ResamplePlan,
    method: Method,
    cleaner: &str,
    clean: impl Fn(&Dataset, Class) -> Result<(Dataset, Vec<usize>)>,
) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let (oversampled, mut report) = smote_with(d, plan, minority, method)?;
    let (out, removed) = clean(&oversampled, minority.other())?;

    // Renumber surviving synthetic rows; drop those the cleaner removed.
    let mut shift = vec![0usize; oversampled.n_rows()];
    let mut gone = vec![false; oversampled.n_rows()];
    for &r in &removed {
        gone[r] = true;
    }
    let mut n_gone = 0;
    for (r, s) in shift.iter_mut().enumerate() {
        *s = n_gone;
        n_gone += gone[r] as usize;
    }
    report.provenance = report
        .provenance
        .iter()
        .filter(|p| !gone[p.row])
        .map(|p| Provenance {
            row: p.row - shift[p.row],
            origin: p.origin,
        })
        .collect();
    report.n_synthetic = report
        .provenance
        .iter()
        .filter(|p| matches!(p.origin, Origin::Interpolated { .. }))
        .count();
    report.removed_rows = removed.iter().copied().filter(|&r| r < d.n_rows()).collect();
    report.n_removed = removed.len();
    report.cleaning = Some(CleaningPhase {
        cleaner: cleaner.into(),
        counts_before_cleaning: report.counts_after,
        removed_rows: removed,
    });
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}

pub(crate) fn smote_enn(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    smote_then(d, plan, Method::SmoteEnn, "enn", |x, _| enn_clean(x))
}

pub(crate) fn smote_tomek(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    smote_then(d, plan, Method::SmoteTomek, "tomek", tomek_clean_removing)
}
