use serde::{Deserialize, Serialize};

use crate::domain::Dataset;
use crate::error::{Error, Result};
use crate::quantum::{NormBounds, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianMode {
    /// H = |Ψ⟩⟨Ψ| built from the encoded sample.
    #[default]
    OuterProduct,
    /// H = Σ_{i<j} w_ij Z_i Z_j + Σ_i b_i Z_i fitted on the minority block.
    Ising,
}

impl std::str::FromStr for HamiltonianMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outer_product" | "outer" => Ok(HamiltonianMode::OuterProduct),
            "ising" => Ok(HamiltonianMode::Ising),
            other => Err(Error::invalid(format!("unknown hamiltonian mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for HamiltonianMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HamiltonianMode::OuterProduct => "outer_product",
            HamiltonianMode::Ising => "ising",
        })
    }
}

/// A Hamiltonian kept in a form whose expectation is computable straight from
/// amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    OuterProduct { reference: StateVector },
    Ising { couplings: Vec<Vec<f64>>, biases: Vec<f64> },
}

impl HamiltonianSpec {
    pub fn outer_product(psi: StateVector) -> Result<Self> {
        if !psi.is_normalized(1e-10) {
            return Err(Error::invalid(format!(
                "reference state has squared norm {}, expected 1",
                psi.norm_sqr()
            )));
        }
        Ok(HamiltonianSpec::OuterProduct { reference: psi })
    }

    /// Couplings must be square, symmetric and zero on the diagonal.
    pub fn ising(couplings: Vec<Vec<f64>>, biases: Vec<f64>) -> Result<Self> {
        let n = biases.len();
        if n == 0 || couplings.len() != n || couplings.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("ising couplings must be n×n with n biases, n ≥ 1"));
        }
        for i in 0..n {
            if couplings[i][i] != 0.0 {
                return Err(Error::invalid("ising couplings need a zero diagonal"));
            }
            for j in 0..i {
                if couplings[i][j] != couplings[j][i] {
                    return Err(Error::invalid("ising couplings must be symmetric"));
                }
            }
        }
        if couplings.iter().flatten().chain(&biases).any(|v| !v.is_finite()) {
            return Err(Error::invalid("ising weights must be finite"));
        }
        Ok(HamiltonianSpec::Ising { couplings, biases })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            HamiltonianSpec::OuterProduct { reference } => reference.n_qubits(),
            HamiltonianSpec::Ising { biases, .. } => biases.len(),
        }
    }

    /// ⟨s|H|s⟩.
    pub fn expectation(&self, s: &StateVector) -> Result<f64> {
        if s.n_qubits() != self.n_qubits() {
            return Err(Error::invalid(format!(
                "{}-qubit state against a {}-qubit hamiltonian",
                s.n_qubits(),
                self.n_qubits()
            )));
        }
        Ok(match self {
            HamiltonianSpec::OuterProduct { reference } => reference.inner(s)?.norm_sqr(),
            HamiltonianSpec::Ising { couplings, biases } => {
                let n = biases.len();
                s.amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(idx, a)| {
                        let z = |q: usize| if idx >> q & 1 == 1 { -1.0 } else { 1.0 };
                        let mut e = 0.0;
                        for i in 0..n {
                            e += biases[i] * z(i);
                            for j in i + 1..n {
                                e += couplings[i][j] * z(i) * z(j);
                            }
                        }
                        e * a.norm_sqr()
                    })
                    .sum()
            }
        })
    }

    /// Σ|w_ij| + Σ|b_i| over i<j; every expectation lies within ± this.
    pub fn ising_scale(&self) -> Option<f64> {
        match self {
            HamiltonianSpec::Ising { couplings, biases } => {
                let n = biases.len();
                let w: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| couplings[i][j].abs()).sum();
                Some(w + biases.iter().map(|b| b.abs()).sum::<f64>())
            }
            HamiltonianSpec::OuterProduct { .. } => None,
        }
    }
}

/// Fits Ising weights on a block of minority rows.
///
/// Features are scaled into [-1, 1] through `bounds`; `w_ij` is the sample
/// covariance (n−1 denominator) of scaled features i and j, `b_i` the mean of
/// scaled feature i.
pub fn build_ising_hamiltonian(minority_block: &Dataset, bounds: &NormBounds) -> Result<HamiltonianSpec> {
    let rows = minority_block.n_rows();
    if rows < 2 {
        return Err(Error::invalid(format!("ising fit needs at least 2 minority rows, got {rows}")));
    }
    let n = minority_block.n_features();
    if n != bounds.len() {
        return Err(Error::invalid("feature count does not match the bounds"));
    }
    let scaled: Vec<Vec<f64>> = minority_block
        .rows()
        .map(|r| r.iter().enumerate().map(|(i, &v)| 2.0 * bounds.unit(i, v) - 1.0).collect())
        .collect();
    let means: Vec<f64> = (0..n).map(|i| scaled.iter().map(|r| r[i]).sum::<f64>() / rows as f64).collect();
    let mut couplings = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let cov = scaled.iter().map(|r| (r[i] - means[i]) * (r[j] - means[j])).sum::<f64>() / (rows - 1) as f64;
            couplings[i][j] = cov;
            couplings[j][i] = cov;
        }
    }
    HamiltonianSpec::ising(couplings, means)
}
