//! QI-SMOTE and the classical resamplers behind one `resample` entry point.
//!
//! Every method returns a new dataset plus a [`ResampleReport`]. Original rows
//! come first in input order; generated rows follow in generation order.
//! Provenance `row` fields index the returned dataset. `parent` / `neighbor`
//! index the dataset the interpolation read from: the input for the classical
//! methods, and the input plus its quantum-derived rows (a prefix of the
//! output) for QI-SMOTE.

mod clean;
pub(crate) mod neighbors;
mod qi;
mod random;
mod smote;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use clean::{enn_clean, tomek_clean, tomek_clean_removing};
pub use qi::qi_smote;
pub use random::{random_oversample, random_undersample};
pub use smote::{adasyn, borderline_smote, smote};

use crate::domain::{Class, ClassCounts, Dataset, SeedSpec};
use crate::error::{Error, Result};
use crate::quantum::Topology;
use crate::vqe::{HamiltonianMode, InitialParams, OptimizerKind, VqeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    QiSmote,
    Smote,
    BorderlineSmote,
    Adasyn,
    Ros,
    Rus,
    SmoteEnn,
    SmoteTomek,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::QiSmote,
        Method::Smote,
        Method::BorderlineSmote,
        Method::Adasyn,
        Method::Ros,
        Method::Rus,
        Method::SmoteEnn,
        Method::SmoteTomek,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::QiSmote => "qi_smote",
            Method::Smote => "smote",
            Method::BorderlineSmote => "borderline_smote",
            Method::Adasyn => "adasyn",
            Method::Ros => "ros",
            Method::Rus => "rus",
            Method::SmoteEnn => "smote_enn",
            Method::SmoteTomek => "smote_tomek",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let m = match key.as_str() {
            "qi_smote" | "qismote" => Method::QiSmote,
            "smote" => Method::Smote,
            "borderline_smote" | "b_smote" | "bsmote" => Method::BorderlineSmote,
            "adasyn" => Method::Adasyn,
            "ros" | "random_oversample" => Method::Ros,
            "rus" | "random_undersample" => Method::Rus,
            "smote_enn" => Method::SmoteEnn,
            "smote_tomek" | "tomek_smote" => Method::SmoteTomek,
            _ => return Err(Error::invalid(format!("unknown resampling method '{s}'"))),
        };
        Ok(m)
    }
}

/// How many rows an oversampler should add.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceTarget {
    /// Grow the minority class to the majority count.
    #[default]
    Equalize,
    /// Add exactly this many interpolated (or duplicated) rows.
    Extra(usize),
}

impl BalanceTarget {
    /// Rows to generate and the overshoot left when the minority already
    /// exceeds the majority.
    pub(crate) fn needed(self, counts: ClassCounts) -> (usize, usize) {
        match self {
            BalanceTarget::Equalize => (
                counts.majority.saturating_sub(counts.minority),
                counts.minority.saturating_sub(counts.majority),
            ),
            BalanceTarget::Extra(n) => (n, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub method: Method,
    pub k_neighbors: usize,
    pub target: BalanceTarget,
    pub seed: SeedSpec,
    pub vqe: VqeConfig,
    pub hamiltonian_mode: HamiltonianMode,
    pub topology: Topology,
}

impl ResamplePlan {
    pub fn new(method: Method) -> Self {
        ResamplePlan {
            method,
            k_neighbors: 5,
            target: BalanceTarget::Equalize,
            seed: SeedSpec::default(),
            vqe: VqeConfig::default(),
            hamiltonian_mode: HamiltonianMode::OuterProduct,
            topology: Topology::Linear,
        }
    }

    pub fn with_seed(mut self, seed: SeedSpec) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_target(mut self, target: BalanceTarget) -> Self {
        self.target = target;
        self
    }

    /// Builds a plan from flat `key = value` pairs. Unknown keys are rejected.
    ///
    /// Keys: `method`, `k`, `seed`, `extra`, `vqe_iters`, `vqe_tol`,
    /// `hamiltonian`, `optimizer`, `init`, `topology` (dashes and underscores
    /// are interchangeable).
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> Result<Self> {
        let mut plan = ResamplePlan::new(Method::QiSmote);
        let mut method_set = false;
        for (k, v) in pairs {
            let (key, value) = (k.as_ref().replace('-', "_"), v.as_ref().trim());
            let bad = |what: &str| Error::invalid(format!("bad value '{value}' for {what}"));
            match key.as_str() {
                "method" => {
                    plan.method = value.parse()?;
                    method_set = true;
                }
                "k" | "k_neighbors" => plan.k_neighbors = value.parse().map_err(|_| bad("k"))?,
                "seed" => plan.seed = SeedSpec::new(value.parse().map_err(|_| bad("seed"))?),
                "extra" => plan.target = BalanceTarget::Extra(value.parse().map_err(|_| bad("extra"))?),
                "vqe_iters" => plan.vqe.max_iterations = value.parse().map_err(|_| bad("vqe_iters"))?,
                "vqe_tol" => plan.vqe.tolerance = value.parse().map_err(|_| bad("vqe_tol"))?,
                "hamiltonian" => plan.hamiltonian_mode = value.parse()?,
                "optimizer" => {
                    plan.vqe.optimizer = match value {
                        "cobyla" | "cobyla_like" => OptimizerKind::CobylaLike,
                        "nelder_mead" => OptimizerKind::NelderMead,
                        _ => return Err(bad("optimizer")),
                    }
                }
                "init" => {
                    plan.vqe.initial_params = match value {
                        "zeros" => InitialParams::Zeros,
                        "uniform" | "seeded_uniform" => InitialParams::SeededUniform,
                        _ => return Err(bad("init")),
                    }
                }
                "topology" => {
                    plan.topology = match value {
                        "linear" => Topology::Linear,
                        "ring" => Topology::Ring,
                        _ => return Err(bad("topology")),
                    }
                }
                other => return Err(Error::invalid(format!("unknown plan key '{other}'"))),
            }
        }
        if !method_set {
            return Err(Error::invalid("plan needs a method"));
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors < 1 {
            return Err(Error::invalid("k_neighbors must be at least 1"));
        }
        self.vqe.validate()
    }
}

/// Where a generated row came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// parent + λ (neighbor − parent).
    Interpolated { parent: usize, neighbor: usize, lambda: f64 },
    Duplicate { parent: usize },
    /// Decoded from the VQE-evolved state of this minority row.
    QuantumDerived { parent: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub row: usize,
    #[serde(flatten)]
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumAudit {
    pub source_row: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub vqe_evaluations: usize,
    /// The evolved state had no real part; magnitudes were used instead.
    pub real_part_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningPhase {
    pub cleaner: String,
    pub counts_before_cleaning: ClassCounts,
    /// Rows of the oversampled dataset that were removed.
    pub removed_rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampleReport {
    pub method: Method,
    /// Class that `counts_*` call minority (fixed from the input).
    pub minority_class: Class,
    /// Interpolated or duplicated rows added.
    pub n_synthetic: usize,
    /// QI-SMOTE rows decoded from evolved states.
    pub n_quantum_derived: usize,
    pub n_removed: usize,
    pub counts_before: ClassCounts,
    pub counts_after: ClassCounts,
    pub k_requested: usize,
    pub k_used: usize,
    pub k_clamped: bool,
    /// Set when a method fell back to plain SMOTE, with the reason.
    pub fallback: Option<String>,
    /// Minority rows beyond the majority count that were kept, not trimmed.
    pub overshoot: usize,
    pub provenance: Vec<Provenance>,
    /// Input rows removed by undersampling.
    pub removed_rows: Vec<usize>,
    pub cleaning: Option<CleaningPhase>,
    pub quantum_audit: Vec<QuantumAudit>,
}

impl ResampleReport {
    pub(crate) fn new(method: Method, plan: &ResamplePlan, d: &Dataset, minority: Class) -> Self {
        let counts = d.counts_for(minority);
        ResampleReport {
            method,
            minority_class: minority,
            n_synthetic: 0,
            n_quantum_derived: 0,
            n_removed: 0,
            counts_before: counts,
            counts_after: counts,
            k_requested: plan.k_neighbors,
            k_used: plan.k_neighbors,
            k_clamped: false,
            fallback: None,
            overshoot: 0,
            provenance: Vec::new(),
            removed_rows: Vec::new(),
            cleaning: None,
            quantum_audit: Vec::new(),
        }
    }

    /// Output row indices that were generated rather than copied from the input.
    pub fn generated_rows(&self) -> Vec<usize> {
        self.provenance.iter().map(|p| p.row).collect()
    }
}

/// Runs the plan's method on `d`. The input is never modified.
pub fn resample(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    plan.validate()?;
    match plan.method {
        Method::QiSmote => qi_smote(d, plan),
        Method::Smote => smote(d, plan),
        Method::BorderlineSmote => borderline_smote(d, plan),
        Method::Adasyn => adasyn(d, plan),
        Method::Ros => random_oversample(d, plan),
        Method::Rus => random_undersample(d, plan),
        Method::SmoteEnn => clean::smote_enn(d, plan),
        Method::SmoteTomek => clean::smote_tomek(d, plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("B-SMOTE".parse::<Method>().unwrap(), Method::BorderlineSmote);
        assert!("svm_smote".parse::<Method>().is_err());
    }

    #[test]
    fn plan_from_pairs() {
        let plan = ResamplePlan::from_pairs(&[("method", "smote"), ("k", "3"), ("seed", "7"), ("vqe-iters", "50")]).unwrap();
        assert_eq!(plan.method, Method::Smote);
        assert_eq!(plan.k_neighbors, 3);
        assert_eq!(plan.seed, SeedSpec::new(7));
        assert_eq!(plan.vqe.max_iterations, 50);
        assert!(ResamplePlan::from_pairs(&[("method", "smote"), ("colour", "red")]).is_err());
        assert!(ResamplePlan::from_pairs(&[("k", "3")]).is_err());
        assert!(ResamplePlan::from_pairs(&[("method", "smote"), ("k", "0")]).is_err());
    }

    #[test]
    fn targets() {
        let c = ClassCounts { minority: 30, majority: 100 };
        assert_eq!(BalanceTarget::Equalize.needed(c), (70, 0));
        assert_eq!(BalanceTarget::Extra(5).needed(c), (5, 0));
        let over = ClassCounts { minority: 120, majority: 100 };
        assert_eq!(BalanceTarget::Equalize.needed(over), (0, 20));
    }
}
