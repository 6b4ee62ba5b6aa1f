use rand::seq::SliceRandom;
use rand::Rng;

use super::neighbors::k_nearest;
use super::{Method, Origin, Provenance, ResamplePlan, ResampleReport};
use crate::domain::{Class, Dataset, StreamRng};
use crate::error::{Error, Result};

pub(crate) fn require_minority(d: &Dataset, minority: Class) -> Result<Vec<usize>> {
    let rows = d.indices_of(minority);
    if rows.len() < 2 {
        return Err(Error::invalid(format!(
            "interpolation needs at least 2 minority rows, found {}",
            rows.len()
        )));
    }
    Ok(rows)
}

/// Interpolates toward minority neighbours. Each seed draws its neighbour
/// with `gen_range(0..k)` and then λ with `gen::<f64>()`.
pub(crate) struct Interpolator<'a> {
    d: &'a Dataset,
    minority: Class,
    pool: Vec<usize>,
    k: usize,
    cache: Vec<Option<Vec<usize>>>,
}

impl<'a> Interpolator<'a> {
    /// Clamps `k` to the pool size minus one and records that in `report`.
    pub(crate) fn new(d: &'a Dataset, minority: Class, report: &mut ResampleReport) -> Result<Self> {
        let pool = require_minority(d, minority)?;
        let k = report.k_requested.min(pool.len() - 1);
        report.k_used = k;
        report.k_clamped = k < report.k_requested;
        Ok(Interpolator {
            d,
            minority,
            pool,
            k,
            cache: vec![None; d.n_rows()],
        })
    }

    pub(crate) fn pool(&self) -> &[usize] {
        &self.pool
    }

    fn neighbors(&mut self, parent: usize) -> &[usize] {
        if self.cache[parent].is_none() {
            let nn = k_nearest(self.d, self.d.row(parent), &self.pool, Some(parent), self.k);
            self.cache[parent] = Some(nn);
        }
        self.cache[parent].as_deref().unwrap_or_default()
    }

    /// Appends one synthetic row grown from `parent` to `out`.
    pub(crate) fn emit(
        &mut self,
        parent: usize,
        rng: &mut StreamRng,
        out: &mut Dataset,
        report: &mut ResampleReport,
    ) -> Result<()> {
        let k = self.k;
        let neighbor = self.neighbors(parent)[rng.gen_range(0..k)];
        let lambda: f64 = rng.gen();
        let (x, z) = (self.d.row(parent), self.d.row(neighbor));
        let row: Vec<f64> = x.iter().zip(z).map(|(a, b)| a + lambda * (b - a)).collect();
        out.push_row(&row, self.minority)?;
        report.provenance.push(Provenance {
            row: out.n_rows() - 1,
            origin: Origin::Interpolated { parent, neighbor, lambda },
        });
        report.n_synthetic += 1;
        Ok(())
    }

    /// `count` rows from parents taken round-robin over a seeded shuffle.
    pub(crate) fn round_robin(
        &mut self,
        parents: &[usize],
        count: usize,
        rng: &mut StreamRng,
        out: &mut Dataset,
        report: &mut ResampleReport,
    ) -> Result<()> {
        let mut order = parents.to_vec();
        order.shuffle(rng);
        for j in 0..count {
            self.emit(order[j % order.len()], rng, out, report)?;
        }
        Ok(())
    }
}

/// SMOTE on `d` with a fixed minority class. The QI pipeline calls this on the
/// dataset it has already extended, so the class must not be re-derived.
pub(crate) fn smote_with(
    d: &Dataset,
    plan: &ResamplePlan,
    minority: Class,
    method: Method,
) -> Result<(Dataset, ResampleReport)> {
    let mut report = ResampleReport::new(method, plan, d, minority);
    let mut interp = Interpolator::new(d, minority, &mut report)?;
    let (needed, overshoot) = plan.target.needed(report.counts_before);
    report.overshoot = overshoot;
    let mut out = d.clone();
    let mut rng = plan.seed.rng();
    let parents = interp.pool().to_vec();
    interp.round_robin(&parents, needed, &mut rng, &mut out, &mut report)?;
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}

pub fn smote(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    smote_with(d, plan, d.minority_class(), Method::Smote)
}

/// Majority-class rows among each minority row's k nearest over all rows.
/// Returns (k actually used, counts aligned with `pool`).
fn majority_neighbor_counts(d: &Dataset, pool: &[usize], minority: Class, k: usize) -> (usize, Vec<usize>) {
    let all: Vec<usize> = (0..d.n_rows()).collect();
    let k = k.min(d.n_rows() - 1);
    let counts = pool
        .iter()
        .map(|&i| {
            k_nearest(d, d.row(i), &all, Some(i), k)
                .into_iter()
                .filter(|&j| d.label(j) != minority)
                .count()
        })
        .collect();
    (k, counts)
}

/// Borderline-SMOTE: only minority rows whose neighbourhood is at least half
/// but not entirely majority (DANGER) seed new rows.
pub fn borderline_smote(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let mut report = ResampleReport::new(Method::BorderlineSmote, plan, d, minority);
    let mut interp = Interpolator::new(d, minority, &mut report)?;
    let (k_all, m) = majority_neighbor_counts(d, interp.pool(), minority, plan.k_neighbors);
    let danger: Vec<usize> = interp
        .pool()
        .iter()
        .zip(&m)
        .filter(|(_, &mi)| 2 * mi >= k_all && mi < k_all)
        .map(|(&i, _)| i)
        .collect();
    let seeds = if danger.is_empty() {
        report.fallback = Some("no DANGER minority rows; plain SMOTE used".into());
        interp.pool().to_vec()
    } else {
        danger
    };
    let (needed, overshoot) = plan.target.needed(report.counts_before);
    report.overshoot = overshoot;
    let mut out = d.clone();
    let mut rng = plan.seed.rng();
    interp.round_robin(&seeds, needed, &mut rng, &mut out, &mut report)?;
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}

/// Splits `total` in proportion to `weights` (largest remainder, ties to the
/// lower position) so the parts sum to `total` exactly.
pub(crate) fn apportion(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut parts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let short = total - parts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(short) {
        parts[i] += 1;
    }
    parts
}

/// ADASYN: rows with more majority neighbours get proportionally more
/// synthetic children.
pub fn adasyn(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let mut report = ResampleReport::new(Method::Adasyn, plan, d, minority);
    let mut interp = Interpolator::new(d, minority, &mut report)?;
    let (k_all, m) = majority_neighbor_counts(d, interp.pool(), minority, plan.k_neighbors);
    let (needed, overshoot) = plan.target.needed(report.counts_before);
    report.overshoot = overshoot;
    let mut out = d.clone();
    let mut rng = plan.seed.rng();
    let r: Vec<f64> = m.iter().map(|&mi| mi as f64 / k_all as f64).collect();
    if r.iter().all(|&ri| ri == 0.0) {
        report.fallback = Some("no minority row has majority neighbours; plain SMOTE used".into());
        let parents = interp.pool().to_vec();
        interp.round_robin(&parents, needed, &mut rng, &mut out, &mut report)?;
    } else {
        let g = apportion(&r, needed);
        let pool = interp.pool().to_vec();
        for (&parent, &gi) in pool.iter().zip(&g) {
            for _ in 0..gi {
                interp.emit(parent, &mut rng, &mut out, &mut report)?;
            }
        }
    }
    report.counts_after = out.counts_for(minority);
    Ok((out, report))
}
