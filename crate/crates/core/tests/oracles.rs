//! Independent dense and brute-force oracles for the simulator, the Ising
//! objective and the exact signed-rank p-value.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use qsmote::domain::SeedSpec;
use qsmote::metrics::wilcoxon_signed_rank;
use qsmote::quantum::{EncodingCircuit, NormBounds, StateVector, Topology, DEFAULT_QUBIT_CAP};
use qsmote::vqe::{build_ising_hamiltonian, HamiltonianSpec};
use qsmote::{Class, Dataset};
use rand::Rng;

type Matrix = Vec<Vec<f64>>;

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0.0; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// `op` on qubit `q` of `n`; qubit 0 is the rightmost Kronecker factor.
fn on_qubit(op: &Matrix, q: usize, n: usize) -> Matrix {
    let id = identity(2);
    let mut m = vec![vec![1.0]];
    for k in (0..n).rev() {
        m = kron(&m, if k == q { op } else { &id });
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn add_scaled(acc: &mut Matrix, m: &Matrix, w: f64) {
    for (r, row) in acc.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v += w * m[r][c];
        }
    }
}

fn projector(bit: usize) -> Matrix {
    if bit == 0 {
        vec![vec![1.0, 0.0], vec![0.0, 0.0]]
    } else {
        vec![vec![0.0, 0.0], vec![0.0, 1.0]]
    }
}

fn x() -> Matrix {
    vec![vec![0.0, 1.0], vec![1.0, 0.0]]
}

fn z() -> Matrix {
    vec![vec![1.0, 0.0], vec![0.0, -1.0]]
}

/// Controlled-`op`: |0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ op_t.
fn controlled(c: usize, t: usize, op: &Matrix, n: usize) -> Matrix {
    let mut m = on_qubit(&projector(0), c, n);
    add_scaled(&mut m, &mat_mul(&on_qubit(&projector(1), c, n), &on_qubit(op, t, n)), 1.0);
    m
}

fn toffoli(a: &usize, b: &usize, t: &usize, n: usize) -> Matrix {
    let both = mat_mul(&on_qubit(&projector(1), *a, n), &on_qubit(&projector(1), *b, n));
    let mut m = identity(1 << n);
    add_scaled(&mut m, &both, -1.0);
    add_scaled(&mut m, &mat_mul(&both, &on_qubit(&x(), *t, n)), 1.0);
    m
}

fn apply(m: &Matrix, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn dense_encoding(angles: &[f64], ring: bool) -> Vec<f64> {
    let n = angles.len();
    let h = vec![vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2], vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2]];
    let mut v = vec![0.0; 1 << n];
    v[0] = 1.0;
    for q in 0..n {
        v = apply(&on_qubit(&h, q, n), &v);
    }
    for (q, &t) in angles.iter().enumerate() {
        let (s, c) = (t / 2.0).sin_cos();
        v = apply(&on_qubit(&vec![vec![c, -s], vec![s, c]], q, n), &v);
    }
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    if ring && n >= 3 {
        pairs.push((n - 1, 0));
    }
    for &(c, t) in &pairs {
        v = apply(&controlled(c, t, &x(), n), &v);
    }
    for &(c, t) in &pairs {
        v = apply(&controlled(c, t, &z(), n), &v);
    }
    let triples: Vec<(usize, usize, usize)> = if ring && n >= 3 {
        (0..n).map(|i| (i, (i + 1) % n, (i + 2) % n)).collect()
    } else {
        (2..n).map(|i| (i - 2, i - 1, i)).collect()
    };
    for (a, b, t) in &triples {
        v = apply(&toffoli(a, b, t, n), &v);
    }
    v
}

#[test]
fn encoding_matches_dense_product() {
    let mut rng = SeedSpec::new(21).rng();
    for _ in 0..60 {
        let n = rng.gen_range(1..=4);
        let lo: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..0.0)).collect();
        let hi: Vec<f64> = lo.iter().map(|l| l + rng.gen_range(0.5..5.0)).collect();
        let bounds = NormBounds::new(lo.clone(), hi.clone()).unwrap();
        let features: Vec<f64> = (0..n).map(|i| rng.gen_range(lo[i]..hi[i])).collect();
        let angles: Vec<f64> = (0..n).map(|i| PI * (features[i] - lo[i]) / (hi[i] - lo[i])).collect();
        for (topology, ring) in [(Topology::Linear, false), (Topology::Ring, true)] {
            let circuit = EncodingCircuit { topology, qubit_cap: DEFAULT_QUBIT_CAP };
            let s = circuit.encode(&features, &bounds).unwrap();
            let want = dense_encoding(&angles, ring);
            for (a, w) in s.amplitudes().iter().zip(&want) {
                assert!((a.re - w).abs() < 1e-12 && a.im == 0.0, "{a} vs {w}");
            }
        }
    }
}

fn dense_ising(couplings: &[Vec<f64>], biases: &[f64]) -> Matrix {
    let n = biases.len();
    let mut h = vec![vec![0.0; 1 << n]; 1 << n];
    for i in 0..n {
        add_scaled(&mut h, &on_qubit(&z(), i, n), biases[i]);
        for j in i + 1..n {
            add_scaled(&mut h, &mat_mul(&on_qubit(&z(), i, n), &on_qubit(&z(), j, n)), couplings[i][j]);
        }
    }
    h
}

#[test]
fn ising_matches_pauli_z_sum() {
    let mut rng = SeedSpec::new(22).rng();
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let rows: Vec<Vec<f64>> = (0..rng.gen_range(2..12)).map(|_| (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
        let m = rows.len();
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let block = Dataset::new(names, rows.clone(), vec![Class::Positive; m]).unwrap();
        let bounds = NormBounds::from_dataset(&block).unwrap();
        let h = build_ising_hamiltonian(&block, &bounds).unwrap();
        let HamiltonianSpec::Ising { couplings, biases } = &h else { panic!("ising expected") };

        // weights: n−1 covariance and mean of features mapped into [-1, 1]
        let scaled: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                (0..n)
                    .map(|i| {
                        let span = bounds.max(i) - bounds.min(i);
                        if span > 0.0 { 2.0 * (r[i] - bounds.min(i)) / span - 1.0 } else { -1.0 }
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            let mean_i = scaled.iter().map(|r| r[i]).sum::<f64>() / m as f64;
            assert!((biases[i] - mean_i).abs() < 1e-12);
            for j in i + 1..n {
                let mean_j = scaled.iter().map(|r| r[j]).sum::<f64>() / m as f64;
                let exy = scaled.iter().map(|r| r[i] * r[j]).sum::<f64>() / m as f64;
                let cov = (exy - mean_i * mean_j) * m as f64 / (m - 1) as f64;
                assert!((couplings[i][j] - cov).abs() < 1e-12, "{} vs {cov}", couplings[i][j]);
            }
        }

        let dense = dense_ising(couplings, biases);
        let amps: Vec<Complex64> = (0..1 << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let s = StateVector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
        let a = s.amplitudes();
        let want: f64 = (0..a.len()).flat_map(|r| (0..a.len()).map(move |c| (r, c))).map(|(r, c)| (a[r].conj() * a[c] * dense[r][c]).re).sum();
        assert!((h.expectation(&s).unwrap() - want).abs() < 1e-12);
    }
}

/// Two-sided exact p by listing every sign assignment of the ranks.
fn enumerated_p(a: &[f64], b: &[f64]) -> Option<(f64, f64, f64)> {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    if d.is_empty() {
        return None;
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    // doubled average ranks, so every rank is an integer
    let twice: Vec<u64> = abs
        .iter()
        .map(|v| {
            let less = abs.iter().filter(|w| *w < v).count() as u64;
            let equal = abs.iter().filter(|w| *w == v).count() as u64;
            2 * less + equal + 1
        })
        .collect();
    let plus: u64 = twice.iter().zip(&d).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
    let total: u64 = twice.iter().sum();
    let w = plus.min(total - plus);
    let n = d.len();
    let hits = (0u64..1 << n).filter(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| twice[i]).sum::<u64>() <= w).count();
    let p = (2.0 * hits as f64 / (1u64 << n) as f64).min(1.0);
    Some((p, plus as f64 / 2.0, (total - plus) as f64 / 2.0))
}

#[test]
fn exact_p_matches_enumeration() {
    let mut rng = SeedSpec::new(23).rng();
    for _ in 0..400 {
        let n = rng.gen_range(1..=14);
        // eighths keep differences exact, so ties are genuine
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..12) as f64 / 8.0).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0..12) as f64 / 8.0).collect();
        let got = wilcoxon_signed_rank(&a, &b).unwrap();
        match (enumerated_p(&a, &b), got.result()) {
            (None, None) => {}
            (Some((p, wp, wm)), Some(r)) => {
                assert_eq!(r.p_exact, Some(p), "{a:?} {b:?}");
                assert_eq!((r.w_plus, r.w_minus), (wp, wm));
            }
            (want, have) => panic!("{want:?} vs {have:?}"),
        }
    }
}
