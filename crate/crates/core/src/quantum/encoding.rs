use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::state::{StateVector, DEFAULT_QUBIT_CAP};
use crate::domain::Dataset;
use crate::error::{Error, Result};

/// Per-feature (min, max) used to map features onto rotation angles and back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl NormBounds {
    pub fn new(mins: Vec<f64>, maxs: Vec<f64>) -> Result<Self> {
        if mins.len() != maxs.len() || mins.is_empty() {
            return Err(Error::invalid("bounds need one (min, max) pair per feature"));
        }
        if mins.iter().zip(&maxs).any(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::invalid("every bound needs finite min ≤ max"));
        }
        Ok(NormBounds { mins, maxs })
    }

    /// Column-wise extremes over every row of `d`.
    pub fn from_dataset(d: &Dataset) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::invalid("bounds of an empty dataset"));
        }
        let n = d.n_features();
        let mut mins = vec![f64::INFINITY; n];
        let mut maxs = vec![f64::NEG_INFINITY; n];
        for row in d.rows() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Self::new(mins, maxs)
    }

    pub fn len(&self) -> usize {
        self.mins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mins.is_empty()
    }

    pub fn min(&self, i: usize) -> f64 {
        self.mins[i]
    }

    pub fn max(&self, i: usize) -> f64 {
        self.maxs[i]
    }

    /// Position of `v` inside feature `i`'s range, clamped to [0, 1]; 0 for a
    /// constant feature.
    pub fn unit(&self, i: usize, v: f64) -> f64 {
        let span = self.maxs[i] - self.mins[i];
        if span <= 0.0 {
            0.0
        } else {
            ((v - self.mins[i]) / span).clamp(0.0, 1.0)
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{n} features against bounds for {}", self.len())))
        }
    }
}

/// One RY angle per feature, each in [0, π].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingAngles(Vec<f64>);

impl EncodingAngles {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.iter().any(|a| !(0.0..=PI).contains(a)) {
            return Err(Error::invalid("encoding angles must lie in [0, π]"));
        }
        Ok(EncodingAngles(angles))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn normalize_features(features: &[f64], bounds: &NormBounds) -> Result<EncodingAngles> {
    bounds.check_len(features.len())?;
    Ok(EncodingAngles(
        features.iter().enumerate().map(|(i, &f)| PI * bounds.unit(i, f)).collect(),
    ))
}

/// Which qubit pairs and triples the entangling layers connect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Nearest-neighbour chain (i, i+1) and sliding windows (i, i+1, i+2).
    #[default]
    Linear,
    /// The chain closed from the last qubit back to the first.
    Ring,
}

impl Topology {
    fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if self == Topology::Ring && n >= 3 {
            pairs.push((n - 1, 0));
        }
        pairs
    }

    fn triples(self, n: usize) -> Vec<(usize, usize, usize)> {
        match self {
            Topology::Linear => (0..n.saturating_sub(2)).map(|i| (i, i + 1, i + 2)).collect(),
            Topology::Ring if n >= 3 => (0..n).map(|i| (i, (i + 1) % n, (i + 2) % n)).collect(),
            Topology::Ring => Vec::new(),
        }
    }
}

/// Superposition + rotation + entanglement circuit applied to one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCircuit {
    pub topology: Topology,
    pub qubit_cap: usize,
}

impl Default for EncodingCircuit {
    fn default() -> Self {
        EncodingCircuit {
            topology: Topology::Linear,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

impl EncodingCircuit {
    /// H on every qubit, RY(θ_i) on qubit i, then the CNOT chain, the CZ
    /// chain and the Toffoli windows, in that order.
    pub fn run(&self, angles: &EncodingAngles) -> Result<StateVector> {
        let n = angles.0.len();
        let mut s = StateVector::zero_with_cap(n, self.qubit_cap)?;
        for q in 0..n {
            s.hadamard(q)?;
        }
        for (q, &theta) in angles.0.iter().enumerate() {
            s.ry(q, theta)?;
        }
        let pairs = self.topology.pairs(n);
        for &(c, t) in &pairs {
            s.cnot(c, t)?;
        }
        for &(c, t) in &pairs {
            s.cz(c, t)?;
        }
        for (a, b, t) in self.topology.triples(n) {
            s.toffoli(a, b, t)?;
        }
        Ok(s)
    }

    pub fn encode(&self, features: &[f64], bounds: &NormBounds) -> Result<StateVector> {
        if features.len() > self.qubit_cap {
            return Err(Error::Capacity {
                requested: features.len(),
                cap: self.qubit_cap,
            });
        }
        self.run(&normalize_features(features, bounds)?)
    }
}

/// Encodes one sample with the default (linear, capped) circuit.
pub fn encode_sample(features: &[f64], bounds: &NormBounds) -> Result<StateVector> {
    EncodingCircuit::default().encode(features, bounds)
}

/// Maps a state back to feature space through each qubit's marginal:
/// θ'_i = 2·asin(√p_i), then denormalise through the bounds.
pub fn decode_state_to_features(state: &StateVector, bounds: &NormBounds) -> Result<Vec<f64>> {
    bounds.check_len(state.n_qubits())?;
    Ok(state
        .qubit_marginals()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let theta = (2.0 * p.sqrt().asin()).clamp(0.0, PI);
            let f = bounds.min(i) + theta / PI * (bounds.max(i) - bounds.min(i));
            f.clamp(bounds.min(i), bounds.max(i))
        })
        .collect())
}
