use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::StateVector;

pub const DEFAULT_LAYERS: usize = 2;

/// RY angles for every (layer, qubit), layer-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    n_layers: usize,
    n_qubits: usize,
    values: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(n_layers: usize, n_qubits: usize, values: Vec<f64>) -> Result<Self> {
        if n_layers == 0 || n_qubits == 0 {
            return Err(Error::invalid("ansatz needs at least one layer and one qubit"));
        }
        if values.len() != n_layers * n_qubits {
            return Err(Error::invalid(format!(
                "{} parameters for {n_layers} layers × {n_qubits} qubits",
                values.len()
            )));
        }
        Ok(AnsatzParams {
            n_layers,
            n_qubits,
            values,
        })
    }

    pub fn zeros(n_layers: usize, n_qubits: usize) -> Result<Self> {
        Self::new(n_layers, n_qubits, vec![0.0; n_layers * n_qubits])
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Each layer: RY(θ_{l,i}) on every qubit, then CZ on (i, i+1).
pub fn ansatz_state(params: &AnsatzParams) -> Result<StateVector> {
    let n = params.n_qubits;
    let mut s = StateVector::zero(n)?;
    for layer in params.values.chunks_exact(n) {
        for (q, &theta) in layer.iter().enumerate() {
            s.ry(q, theta)?;
        }
        for q in 0..n.saturating_sub(1) {
            s.cz(q, q + 1)?;
        }
    }
    Ok(s)
}

/// Default two-layer ansatz from a flat parameter slice.
pub fn ansatz_state_from(values: &[f64], n_qubits: usize) -> Result<StateVector> {
    ansatz_state(&AnsatzParams::new(DEFAULT_LAYERS, n_qubits, values.to_vec())?)
}
