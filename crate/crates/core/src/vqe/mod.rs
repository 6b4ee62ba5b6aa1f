//! Hamiltonians, the RY+CZ ansatz and the variational minimisation loop.

mod ansatz;
mod hamiltonian;
pub mod optimizer;

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use ansatz::{ansatz_state, ansatz_state_from, AnsatzParams, DEFAULT_LAYERS};
pub use hamiltonian::{build_ising_hamiltonian, HamiltonianMode, HamiltonianSpec};

use crate::domain::SeedSpec;
use crate::error::{Error, Result};
use crate::quantum::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialParams {
    #[default]
    Zeros,
    /// Uniform in (−0.1, 0.1), drawn from the run's seed.
    SeededUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    #[default]
    CobylaLike,
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    /// Objective-evaluation budget per minimisation.
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_params: InitialParams,
    pub optimizer: OptimizerKind,
    pub n_layers: usize,
    /// Starting trust radius (cobyla-like) or simplex edge (Nelder–Mead).
    pub initial_step: f64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            max_iterations: 100,
            tolerance: 1e-6,
            initial_params: InitialParams::Zeros,
            optimizer: OptimizerKind::CobylaLike,
            n_layers: DEFAULT_LAYERS,
            initial_step: 0.5,
        }
    }
}

impl VqeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.n_layers < 1 || !(self.initial_step > 0.0) {
            return Err(Error::invalid("ansatz needs ≥ 1 layer and a positive initial step"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeOutcome {
    pub best_params: AnsatzParams,
    pub best_energy: f64,
    pub evolved_state: StateVector,
    pub evaluations: usize,
    /// Best energy after each objective evaluation; never increases.
    pub energy_trace: Vec<f64>,
}

impl VqeOutcome {
    pub fn initial_energy(&self) -> f64 {
        self.energy_trace[0]
    }

    /// Two-column `iteration best_energy` table.
    pub fn trace_table(&self) -> String {
        let mut out = String::from("iteration\tbest_energy\n");
        for (i, e) in self.energy_trace.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}", i + 1, e);
        }
        out
    }
}

/// Minimises ⟨ψ(θ)|H|ψ(θ)⟩ over the ansatz parameters.
pub fn minimize(h: &HamiltonianSpec, n_qubits: usize, cfg: &VqeConfig, seed: SeedSpec) -> Result<VqeOutcome> {
    cfg.validate()?;
    if h.n_qubits() != n_qubits {
        return Err(Error::invalid(format!(
            "{n_qubits}-qubit ansatz against a {}-qubit hamiltonian",
            h.n_qubits()
        )));
    }
    let n_params = cfg.n_layers * n_qubits;
    let x0: Vec<f64> = match cfg.initial_params {
        InitialParams::Zeros => vec![0.0; n_params],
        InitialParams::SeededUniform => {
            let mut rng = seed.rng();
            (0..n_params).map(|_| rng.gen_range(-0.1..0.1)).collect()
        }
    };
    let objective = |x: &[f64]| -> f64 {
        AnsatzParams::new(cfg.n_layers, n_qubits, x.to_vec())
            .and_then(|p| ansatz_state(&p))
            .and_then(|s| h.expectation(&s))
            .unwrap_or(f64::INFINITY)
    };
    let result = match cfg.optimizer {
        OptimizerKind::CobylaLike => {
            optimizer::linear_trust_region(objective, &x0, cfg.max_iterations, cfg.initial_step, cfg.tolerance)
        }
        OptimizerKind::NelderMead => {
            optimizer::nelder_mead(objective, &x0, cfg.max_iterations, cfg.initial_step, cfg.tolerance)
        }
    };
    let best_params = AnsatzParams::new(cfg.n_layers, n_qubits, result.x)?;
    let evolved_state = ansatz_state(&best_params)?;
    Ok(VqeOutcome {
        best_params,
        best_energy: result.f,
        evolved_state,
        evaluations: result.evaluations,
        energy_trace: result.trace,
    })
}
