use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 20;

/// Dense statevector over `n_qubits` qubits.
///
/// Bit `b` of a basis index is the value of qubit `b`, so qubit 0 is the least
/// significant bit. Gates act in place by sweeping index pairs; no operator
/// matrix is ever built.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n` qubits, with the default cap.
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 || n > cap {
            return Err(Error::Capacity { requested: n, cap });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits: n, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two ≥ 2. No
    /// normalisation is imposed.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} amplitudes is not a power of two ≥ 2")));
        }
        if len > 1 << DEFAULT_QUBIT_CAP {
            return Err(Error::Capacity {
                requested: len.trailing_zeros() as usize,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Computational basis state |index⟩.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        if index >= s.dim() {
            return Err(Error::invalid(format!("basis index {index} out of range")));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(format!(
                "inner product of {}- and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check(&self, q: usize) -> Result<()> {
        if q < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex {
                index: q,
                n_qubits: self.n_qubits,
            })
        }
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<()> {
        for &q in qubits {
            self.check(q)?;
        }
        for (i, a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(a) {
                return Err(Error::invalid(format!("gate qubits {qubits:?} are not distinct")));
            }
        }
        Ok(())
    }

    pub fn hadamard(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        let bit = 1 << q;
        for i in 0..self.dim() {
            if i & bit == 0 {
                let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = (a + b) * FRAC_1_SQRT_2;
                self.amplitudes[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    pub fn ry(&mut self, q: usize, angle: f64) -> Result<()> {
        self.check(q)?;
        if !angle.is_finite() {
            return Err(Error::invalid(format!("rotation angle {angle} is not finite")));
        }
        let (s, c) = (angle / 2.0).sin_cos();
        let bit = 1 << q;
        for i in 0..self.dim() {
            if i & bit == 0 {
                let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = a * c - b * s;
                self.amplitudes[i | bit] = a * s + b * c;
            }
        }
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_distinct(&[control, target])?;
        let (cb, tb) = (1 << control, 1 << target);
        for i in 0..self.dim() {
            if i & cb != 0 && i & tb == 0 {
                self.amplitudes.swap(i, i | tb);
            }
        }
        Ok(())
    }

    pub fn cz(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_distinct(&[control, target])?;
        let mask = (1 << control) | (1 << target);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
        Ok(())
    }

    pub fn toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<()> {
        self.check_distinct(&[c1, c2, target])?;
        let mask = (1 << c1) | (1 << c2);
        let tb = 1 << target;
        for i in 0..self.dim() {
            if i & mask == mask && i & tb == 0 {
                self.amplitudes.swap(i, i | tb);
            }
        }
        Ok(())
    }

    /// Probability that each qubit reads 1.
    pub fn qubit_marginals(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.n_qubits];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let w = a.norm_sqr();
            for (q, pq) in p.iter_mut().enumerate() {
                if i >> q & 1 == 1 {
                    *pq += w;
                }
            }
        }
        p.iter().map(|v| v.clamp(0.0, 1.0)).collect()
    }

    /// Drops the imaginary parts and renormalises.
    pub fn real_part_renormalized(&self) -> Result<StateVector> {
        let norm = self.amplitudes.iter().map(|a| a.re * a.re).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::DegenerateState(format!("real part has norm {norm:e}")));
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| Complex64::new(a.re / norm, 0.0)).collect(),
        })
    }

    /// Real state built from amplitude magnitudes, renormalised.
    pub fn magnitudes_renormalized(&self) -> Result<StateVector> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-12 {
            return Err(Error::DegenerateState("zero state".into()));
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| Complex64::new(a.norm() / norm, 0.0)).collect(),
        })
    }

    /// Tab-separated `index bitstring re im` table, one basis state per line.
    /// Bitstrings print qubit n-1 first.
    pub fn to_table(&self) -> String {
        let mut out = String::from("index\tbitstring\tre\tim\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{:0width$b}\t{}\t{}", i, a.re, a.im, width = self.n_qubits);
        }
        out
    }
}
