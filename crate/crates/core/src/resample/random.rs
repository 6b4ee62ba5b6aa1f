use rand::seq::index::sample;
use rand::Rng;

use super::{Method, Origin, Provenance, ResamplePlan, ResampleReport};
use crate::domain::Dataset;
use crate::error::{Error, Result};

/// Duplicates minority rows, drawn with replacement, until the target is met.
pub fn random_oversample(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let pool = d.indices_of(minority);
    if pool.is_empty() {
        return Err(Error::invalid("random oversampling needs at least one minority row"));
    }
    let mut report = ResampleReport::new(Method::Ros, plan, d, minority);
    let (needed, overshoot) = plan.target.needed(report.counts_before);
    report.overshoot = overshoot;
    let mut out = d.clone();
    let mut rng = plan.seed.rng();
    for _ in 0..needed {
        let parent = pool[rng.gen_range(0..pool.len())];
        out.push_row(d.row(parent), minority)?;
        report.provenance.push(Provenance {
            row: out.n_rows() - 1,
            origin: Origin::Duplicate { parent },
        });
    }
    report.n_synthetic = needed;
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}

/// Drops majority rows uniformly at random until both classes are equal.
pub fn random_undersample(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let majority_rows = d.indices_of(minority.other());
    if majority_rows.is_empty() {
        return Err(Error::invalid("random undersampling needs at least one majority row"));
    }
    let mut report = ResampleReport::new(Method::Rus, plan, d, minority);
    let excess = majority_rows.len() - report.counts_before.minority;
    let mut rng = plan.seed.rng();
    let mut removed: Vec<usize> = sample(&mut rng, majority_rows.len(), excess)
        .into_iter()
        .map(|i| majority_rows[i])
        .collect();
    removed.sort_unstable();
    let out = d.without(&removed);
    report.n_removed = removed.len();
    report.removed_rows = removed;
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}
