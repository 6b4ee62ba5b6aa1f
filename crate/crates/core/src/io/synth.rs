use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Class, Dataset, SeedSpec, StreamRng};
use crate::error::{Error, Result};

/// A two-class Gaussian blob dataset. Index 0 of `class_means` /
/// `class_scales` is the majority (negative) class, index 1 the minority.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_majority: usize,
    pub n_minority: usize,
    pub n_features: usize,
    pub class_means: [Vec<f64>; 2],
    pub class_scales: [Vec<f64>; 2],
    pub seed: SeedSpec,
}

impl SynthSpec {
    /// Means 0 and 2, unit scales.
    pub fn new(n_majority: usize, n_minority: usize, n_features: usize, seed: SeedSpec) -> Self {
        SynthSpec {
            n_majority,
            n_minority,
            n_features,
            class_means: [vec![0.0; n_features], vec![2.0; n_features]],
            class_scales: [vec![1.0; n_features], vec![1.0; n_features]],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_majority == 0 || self.n_minority == 0 || self.n_features == 0 {
            return Err(Error::invalid("class counts and feature count must be positive"));
        }
        for v in self.class_means.iter().chain(&self.class_scales) {
            if v.len() != self.n_features {
                return Err(Error::invalid(format!(
                    "mean/scale vector has {} entries for {} features",
                    v.len(),
                    self.n_features
                )));
            }
        }
        if self.class_means.iter().flatten().any(|m| !m.is_finite())
            || self.class_scales.iter().flatten().any(|s| !(s.is_finite() && *s >= 0.0))
        {
            return Err(Error::invalid("means must be finite and scales finite and non-negative"));
        }
        Ok(())
    }
}

/// Standard normals by Box–Muller. Each pair of uniforms (u1, u2) yields
/// r·cos(2πu2) and then r·sin(2πu2), with r = √(−2 ln(1 − u1)).
pub struct NormalStream {
    rng: StreamRng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: SeedSpec) -> Self {
        NormalStream {
            rng: seed.rng(),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = self.rng.gen();
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Majority rows first, then minority rows; values drawn row by row,
/// feature by feature. The minority class is labelled positive ("1").
pub fn gen_gaussian_binary(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut normals = NormalStream::new(spec.seed);
    let mut rows = Vec::with_capacity(spec.n_majority + spec.n_minority);
    let mut labels = Vec::with_capacity(rows.capacity());
    for (class_idx, (count, class)) in [(spec.n_majority, Class::Negative), (spec.n_minority, Class::Positive)]
        .into_iter()
        .enumerate()
    {
        let (means, scales) = (&spec.class_means[class_idx], &spec.class_scales[class_idx]);
        for _ in 0..count {
            rows.push((0..spec.n_features).map(|f| means[f] + scales[f] * normals.sample()).collect());
            labels.push(class);
        }
    }
    let names = (0..spec.n_features).map(|i| format!("x{i}")).collect();
    Dataset::new(names, rows, labels)
}
