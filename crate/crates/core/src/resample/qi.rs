use rayon::prelude::*;

use super::smote::{require_minority, smote_with};
use super::{Method, Origin, Provenance, QuantumAudit, ResamplePlan, ResampleReport};
use crate::domain::Dataset;
use crate::error::{Error, Result};
use crate::quantum::{decode_state_to_features, EncodingCircuit, NormBounds, DEFAULT_QUBIT_CAP};
use crate::vqe::{build_ising_hamiltonian, minimize, HamiltonianMode, HamiltonianSpec};

/// QI-SMOTE: one quantum-derived row per minority row, then SMOTE over the
/// enlarged minority to reach the target.
///
/// Each minority row is encoded, a VQE run pulls its state toward the
/// ground state of the chosen Hamiltonian, and the evolved state's real part
/// is decoded back through the training bounds. Quantum rows count as
/// minority when the SMOTE phase sizes its gap; if they already overshoot
/// the majority nothing is trimmed.
pub fn qi_smote(d: &Dataset, plan: &ResamplePlan) -> Result<(Dataset, ResampleReport)> {
    let minority = d.minority_class();
    let pool = require_minority(d, minority)?;
    let n = d.n_features();
    if n > DEFAULT_QUBIT_CAP {
        return Err(Error::Capacity {
            requested: n,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    let bounds = NormBounds::from_dataset(d)?;
    let circuit = EncodingCircuit {
        topology: plan.topology,
        qubit_cap: DEFAULT_QUBIT_CAP,
    };
    let ising = match plan.hamiltonian_mode {
        HamiltonianMode::Ising => Some(build_ising_hamiltonian(&d.select(&pool), &bounds)?),
        HamiltonianMode::OuterProduct => None,
    };

    // Independent per row; each run seeds its own stream from the row index.
    let derived: Vec<(Vec<f64>, QuantumAudit)> = pool
        .par_iter()
        .map(|&row| {
            let psi = circuit.encode(d.row(row), &bounds)?;
            let h = match &ising {
                Some(h) => h.clone(),
                None => HamiltonianSpec::outer_product(psi)?,
            };
            let outcome = minimize(&h, n, &plan.vqe, plan.seed.derive(row as u64))?;
            let (real, fallback) = match outcome.evolved_state.real_part_renormalized() {
                Ok(s) => (s, false),
                Err(Error::DegenerateState(_)) => (outcome.evolved_state.magnitudes_renormalized()?, true),
                Err(e) => return Err(e),
            };
            let features = decode_state_to_features(&real, &bounds)?;
            Ok((
                features,
                QuantumAudit {
                    source_row: row,
                    initial_energy: outcome.initial_energy(),
                    final_energy: outcome.best_energy,
                    vqe_evaluations: outcome.evaluations,
                    real_part_fallback: fallback,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut enlarged = d.clone();
    let mut quantum_provenance = Vec::with_capacity(derived.len());
    let mut audit = Vec::with_capacity(derived.len());
    for (features, a) in derived {
        enlarged.push_row(&features, minority)?;
        quantum_provenance.push(Provenance {
            row: enlarged.n_rows() - 1,
            origin: Origin::QuantumDerived { parent: a.source_row },
        });
        audit.push(a);
    }

    let (out, smote_report) = smote_with(&enlarged, plan, minority, Method::QiSmote)?;
    let mut report = ResampleReport::new(Method::QiSmote, plan, d, minority);
    report.n_quantum_derived = quantum_provenance.len();
    report.n_synthetic = smote_report.n_synthetic;
    report.k_used = smote_report.k_used;
    report.k_clamped = smote_report.k_clamped;
    report.overshoot = smote_report.overshoot;
    report.counts_after = smote_report.counts_after;
    report.provenance = quantum_provenance;
    report.provenance.extend(smote_report.provenance);
    report.quantum_audit = audit;
    Ok((out, report))
}
