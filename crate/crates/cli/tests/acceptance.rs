//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use qsmote::domain::SeedSpec;
use qsmote::io::{gen_gaussian_binary, load_csv, CsvSchema, SynthSpec};
use qsmote::metrics::{auc_roc, f1_from};
use qsmote::quantum::{encode_sample, NormBounds, StateVector};
use qsmote::resample::{adasyn, borderline_smote, smote, Origin};
use qsmote::vqe::{build_ising_hamiltonian, minimize, HamiltonianSpec, InitialParams, VqeConfig};
use qsmote::{resample, Class, Dataset, Method, ResamplePlan};
use rand::Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn qsmote(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsmote"))
        .args(args)
        .env_remove("QSMOTE_SEED")
        .output()
        .expect("run qsmote")
}

fn qsmote_json(args: &[&str]) -> Result<Value, String> {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = qsmote(&all);
    if !out.status.success() {
        return Err(format!("qsmote {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn as_f64s(v: &Value) -> Vec<f64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_f64).collect()).unwrap_or_default()
}

// ---------------------------------------------------------------- gates --

/// Dense real matrix of a gate on an n-qubit register (qubit 0 is the low bit).
enum Gate {
    H(usize),
    Ry(usize, f64),
    Cnot(usize, usize),
    Cz(usize, usize),
    Toffoli(usize, usize, usize),
}

fn bit(i: usize, q: usize) -> usize {
    i >> q & 1
}

fn dense(g: &Gate, n: usize) -> Vec<Vec<f64>> {
    let dim = 1 << n;
    let one_qubit = |q: usize, m: [[f64; 2]; 2]| {
        let mut out = vec![vec![0.0; dim]; dim];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                if r & !(1 << q) == c & !(1 << q) {
                    *cell = m[bit(r, q)][bit(c, q)];
                }
            }
        }
        out
    };
    let permutation = |f: &dyn Fn(usize) -> usize| {
        let mut out = vec![vec![0.0; dim]; dim];
        for c in 0..dim {
            out[f(c)][c] = 1.0;
        }
        out
    };
    match *g {
        Gate::H(q) => one_qubit(q, [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]),
        Gate::Ry(q, t) => {
            let (s, c) = (t / 2.0).sin_cos();
            one_qubit(q, [[c, -s], [s, c]])
        }
        Gate::Cnot(c, t) => permutation(&|i| if bit(i, c) == 1 { i ^ 1 << t } else { i }),
        Gate::Toffoli(a, b, t) => permutation(&|i| if bit(i, a) & bit(i, b) == 1 { i ^ 1 << t } else { i }),
        Gate::Cz(a, b) => {
            let mut out = permutation(&|i| i);
            for (i, row) in out.iter_mut().enumerate() {
                if bit(i, a) & bit(i, b) == 1 {
                    row[i] = -1.0;
                }
            }
            out
        }
    }
}

fn apply(g: &Gate, s: &mut StateVector) {
    match *g {
        Gate::H(q) => s.hadamard(q),
        Gate::Ry(q, t) => s.ry(q, t),
        Gate::Cnot(c, t) => s.cnot(c, t),
        Gate::Cz(a, b) => s.cz(a, b),
        Gate::Toffoli(a, b, t) => s.toffoli(a, b, t),
    }
    .expect("valid gate")
}

fn gates_for(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::H(q));
        for t in [0.0, 0.3, -1.7, PI, 2.5 * PI] {
            gates.push(Gate::Ry(q, t));
        }
        for t in 0..n {
            if t != q {
                gates.push(Gate::Cnot(q, t));
                gates.push(Gate::Cz(q, t));
                for u in 0..n {
                    if u != q && u != t {
                        gates.push(Gate::Toffoli(q, t, u));
                    }
                }
            }
        }
    }
    gates
}

fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let other = |rng: &mut dyn rand::RngCore, not: &[usize]| loop {
        let t = rng.gen_range(0..n);
        if !not.contains(&t) {
            return t;
        }
    };
    match rng.gen_range(0..5) {
        0 => Gate::H(q),
        1 => Gate::Ry(q, rng.gen_range(-2.0 * PI..2.0 * PI)),
        2 if n >= 2 => Gate::Cnot(q, other(rng, &[q])),
        3 if n >= 2 => Gate::Cz(q, other(rng, &[q])),
        4 if n >= 3 => {
            let t = other(rng, &[q]);
            Gate::Toffoli(q, t, other(rng, &[q, t]))
        }
        _ => Gate::Ry(q, rng.gen_range(0.0..PI)),
    }
}

fn gate_fidelity() -> Check {
    let mut exact = 0;
    for n in 1..=3 {
        for g in gates_for(n) {
            let m = dense(&g, n);
            for k in 0..1 << n {
                let mut s = StateVector::basis(n, k).unwrap();
                apply(&g, &mut s);
                for (r, a) in s.amplitudes().iter().enumerate() {
                    ensure(a.re == m[r][k] && a.im == 0.0, || {
                        format!("{n} qubits, basis {k}: amplitude {r} is {a}, matrix says {}", m[r][k])
                    })?;
                }
                exact += 1;
            }
        }
    }
    let mut rng = SeedSpec::new(1).rng();
    let (mut worst_norm, mut worst_dense) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let mut s = StateVector::zero(n).unwrap();
        let mut v = vec![0.0; 1 << n];
        v[0] = 1.0;
        for _ in 0..rng.gen_range(1..=40) {
            let g = random_gate(&mut rng, n);
            apply(&g, &mut s);
            let m = dense(&g, n);
            v = m.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        }
        worst_norm = worst_norm.max((s.norm_sqr() - 1.0).abs());
        for (a, b) in s.amplitudes().iter().zip(&v) {
            worst_dense = worst_dense.max((a.re - b).abs()).max(a.im.abs());
        }
    }
    ensure(worst_norm <= 1e-10, || format!("norm drift {worst_norm:e}"))?;
    ensure(worst_dense <= 1e-10, || format!("dense mismatch {worst_dense:e}"))?;
    Ok(format!(
        "{exact} gate/basis columns exact; 1000 random circuits: norm drift {worst_norm:.1e}, dense gap {worst_dense:.1e}"
    ))
}

// ------------------------------------------------------------- wilcoxon --

fn wilcoxon_reproduction() -> Check {
    let table4 = data("table4_folds.csv");
    let v = qsmote_json(&["wilcoxon", "--input", table4.to_str().unwrap(), "--a", "qi_smote", "--b", "smote_enn"])?;
    let r = &v["result"]["outcome"];
    ensure(r["status"] == "tested", || format!("outcome {r}"))?;
    // fold → rank, as published
    let expected: BTreeMap<usize, f64> =
        [(2, 2.5), (3, 2.5), (6, 2.5), (9, 2.5), (8, 5.0), (1, 6.0), (5, 7.0), (10, 8.0), (7, 9.0), (4, 10.0)].into();
    let retained: Vec<usize> = r["retained"].as_array().unwrap().iter().map(|i| i.as_u64().unwrap() as usize + 1).collect();
    let ranks = as_f64s(&r["ranks"]);
    for (fold, rank) in retained.iter().zip(&ranks) {
        ensure(expected[fold] == *rank, || format!("fold {fold}: rank {rank}, expected {}", expected[fold]))?;
    }
    ensure(retained.len() == 10, || "ten pairs expected".into())?;
    let (wp, wm, w) = (r["w_plus"].as_f64(), r["w_minus"].as_f64(), r["w"].as_f64());
    ensure((wp, wm, w) == (Some(55.0), Some(0.0), Some(0.0)), || format!("W+={wp:?} W-={wm:?} W={w:?}"))?;
    let p = r["p_exact"].as_f64().unwrap_or(f64::NAN);
    ensure(p == 0.001953125, || format!("exact p = {p}"))?;
    let (z, eff) = (r["z"].as_f64().unwrap(), r["effect_size_r"].as_f64().unwrap());
    Ok(format!(
        "ranks match, W+=55 W-=0 W=0, exact p={p}; tie-corrected z={z:.3}, r={eff:.3} (published z=2.891 / r=0.914 flagged as non-matching)"
    ))
}

// ---------------------------------------------------------- improvement --

fn read_grid(path: &Path) -> (Vec<String>, BTreeMap<String, Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').skip(1).map(str::to_string).collect();
    let rows = lines
        .map(|l| {
            let mut cells = l.split(',');
            let name = cells.next().unwrap().to_string();
            (name, cells.map(|c| c.parse().unwrap()).collect())
        })
        .collect();
    (header, rows)
}

fn improvement_reproduction() -> Check {
    let v = qsmote_json(&[
        "improve",
        "--techniques",
        data("f1_techniques.csv").to_str().unwrap(),
        "--original",
        data("f1_original.csv").to_str().unwrap(),
    ])?;
    let (datasets, table1) = read_grid(&data("table1_improvement.csv"));
    let got: BTreeMap<String, Vec<f64>> = v["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["technique"].as_str().unwrap().to_string(), as_f64s(&r["improvement_pct"])))
        .collect();
    let (mut checked, mut worst) = (0, 0.0f64);
    for tech in ["QI-SMOTE", "SMOTE", "ADASYN", "B-SMOTE"] {
        let (want, have) = (&table1[tech], got.get(tech).ok_or(format!("{tech} missing from output"))?);
        for (i, (w, h)) in want.iter().zip(have).enumerate() {
            let gap = (w - h).abs();
            ensure(gap <= 0.05, || format!("{tech} on {}: {h:.3}% vs published {w}%", datasets[i]))?;
            worst = worst.max(gap);
            checked += 1;
        }
    }
    let others = table1
        .iter()
        .filter(|(t, _)| got.contains_key(*t))
        .flat_map(|(t, w)| w.iter().zip(&got[t]).map(|(a, b)| (a - b).abs() <= 0.05))
        .filter(|ok| *ok)
        .count();
    Ok(format!("{checked} cells within 0.05 pp (worst {worst:.4}); {others} of all printed cells agree"))
}

// ---------------------------------------------------------- f1 fixture --

fn f1_consistency() -> Check {
    let text = fs::read_to_string(data("table_prf.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (p, r, f) = (col("precision"), col("recall"), col("f1"));
    let (mut n, mut worst) = (0, 0.0f64);
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let num = |i: usize| cells[i].parse::<f64>().unwrap();
        let gap = (f1_from(num(p), num(r)) - num(f)).abs();
        ensure(gap <= 0.002, || format!("{} {}: f1({}, {}) is off by {gap:.4}", cells[0], cells[1], cells[p], cells[r]))?;
        worst = worst.max(gap);
        n += 1;
    }
    ensure(n == 60, || format!("{n} fixture rows, expected 60"))?;
    Ok(format!("{n} rows within 0.002 (worst {worst:.4})"))
}

// -------------------------------------------------------- smote geometry --

fn random_fixture(rng: &mut impl Rng, seed: u64) -> Dataset {
    let n_features = rng.gen_range(1..=5);
    let n_minority = rng.gen_range(2..=20);
    let n_majority = rng.gen_range(n_minority + 1..=60);
    let mut spec = SynthSpec::new(n_majority, n_minority, n_features, SeedSpec::new(seed));
    spec.class_means[1] = (0..n_features).map(|_| rng.gen_range(-3.0..3.0)).collect();
    spec.class_scales[1] = (0..n_features).map(|_| rng.gen_range(0.1..4.0)).collect();
    gen_gaussian_binary(&spec).unwrap()
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn smote_geometry() -> Check {
    let mut rng = SeedSpec::new(5).rng();
    let (mut rows, mut worst) = (0usize, 0.0f64);
    for run in 0..1000u64 {
        let d = random_fixture(&mut rng, run);
        let plan = ResamplePlan {
            k_neighbors: rng.gen_range(1..=7),
            ..ResamplePlan::new(Method::Smote).with_seed(SeedSpec::new(run))
        };
        let minority = d.minority_class();
        let runs = [smote(&d, &plan), borderline_smote(&d, &plan), adasyn(&d, &plan)];
        for (which, r) in runs.into_iter().enumerate() {
            let (out, rep) = r.map_err(|e| format!("run {run}: {e}"))?;
            ensure(rep.provenance.len() == rep.n_synthetic, || format!("run {run}: provenance count"))?;
            for p in &rep.provenance {
                let Origin::Interpolated { parent, neighbor, lambda } = p.origin else {
                    return Err(format!("run {run}: non-interpolated origin {:?}", p.origin));
                };
                ensure(parent < d.n_rows() && neighbor < d.n_rows() && parent != neighbor, || {
                    format!("run {run}: bad pair ({parent}, {neighbor})")
                })?;
                ensure(d.label(parent) == minority && d.label(neighbor) == minority, || {
                    format!("run {run}: interpolation left the minority class")
                })?;
                ensure((0.0..=1.0).contains(&lambda), || format!("run {run}: lambda {lambda}"))?;
                let (x, y) = (d.row(parent), d.row(neighbor));
                for (c, v) in out.row(p.row).iter().enumerate() {
                    let gap = (v - (x[c] + lambda * (y[c] - x[c]))).abs();
                    worst = worst.max(gap);
                    ensure(gap <= 1e-9, || format!("run {run}: row {} off the segment by {gap:e}", p.row))?;
                }
                if which == 0 {
                    // The neighbour is among the parent's k nearest minority rows.
                    let mut others: Vec<usize> = d.indices_of(minority).into_iter().filter(|&i| i != parent).collect();
                    others.sort_by(|&a, &b| sq(d.row(a), x).total_cmp(&sq(d.row(b), x)).then(a.cmp(&b)));
                    ensure(others[..rep.k_used].contains(&neighbor), || {
                        format!("run {run}: neighbour {neighbor} not among the {} nearest", rep.k_used)
                    })?;
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} synthetic rows over 1000 fixtures x 3 methods on their segments (worst {worst:.1e})"))
}

// ---------------------------------------------------------------- bench --

fn desk_benchmark() -> Check {
    let v = qsmote_json(&["bench", "--seed", "3"])?;
    let rows = v["result"]["methods"].as_array().unwrap();
    let find = |m: &str| rows.iter().find(|r| r["method"] == m).ok_or(format!("{m} missing"));
    let (s, q) = (find("smote")?, find("qi_smote")?);
    ensure(s["generated"] == 100 && s["rows_out"] == 800, || format!("smote: {s}"))?;
    ensure(q["generated"] == 130 && q["rows_out"] == 830, || format!("qi_smote: {q}"))?;
    let (ts, tq) = (s["seconds"].as_f64().unwrap(), q["seconds"].as_f64().unwrap());
    ensure(ts < 0.1, || format!("smote took {ts} s"))?;
    ensure(tq < 10.0, || format!("qi_smote took {tq} s"))?;
    let peak = q["peak_rss_kb"].as_f64().ok_or("no VmHWM on this platform")?;
    ensure(peak < 50.0 * 1024.0, || format!("peak RSS {peak} kB"))?;
    Ok(format!("smote 100 rows in {ts:.4} s; qi_smote 30+100 rows in {tq:.3} s; peak RSS {:.1} MB", peak / 1024.0))
}

// ------------------------------------------------------------------ vqe --

const GRID: usize = 200;

fn real_amplitudes(s: &StateVector) -> Vec<f64> {
    assert!(s.amplitudes().iter().all(|a| a.im == 0.0), "real circuits give real states");
    s.amplitudes().iter().map(|a| a.re).collect()
}

/// Dense real matrix of the Hamiltonian.
fn dense_h(h: &HamiltonianSpec, n: usize) -> Vec<Vec<f64>> {
    let dim = 1 << n;
    match h {
        HamiltonianSpec::OuterProduct { reference } => {
            let psi = real_amplitudes(reference);
            (0..dim).map(|i| (0..dim).map(|j| psi[i] * psi[j]).collect()).collect()
        }
        HamiltonianSpec::Ising { couplings, biases } => {
            let z = |i: usize, q: usize| 1.0 - 2.0 * bit(i, q) as f64;
            (0..dim)
                .map(|i| {
                    let mut row = vec![0.0; dim];
                    row[i] = (0..n)
                        .map(|a| biases[a] * z(i, a) + (a + 1..n).map(|b| couplings[a][b] * z(i, a) * z(i, b)).sum::<f64>())
                        .sum();
                    row
                })
                .collect()
        }
    }
}

fn ry_apply(v: &mut [f64], q: usize, t: f64) {
    let (s, c) = (t / 2.0).sin_cos();
    for i in 0..v.len() {
        if bit(i, q) == 0 {
            let (a, b) = (v[i], v[i | 1 << q]);
            v[i] = c * a - s * b;
            v[i | 1 << q] = s * a + c * b;
        }
    }
}

fn cz_chain(v: &mut [f64], n: usize) {
    for q in 0..n.saturating_sub(1) {
        for (i, x) in v.iter_mut().enumerate() {
            if bit(i, q) & bit(i, q + 1) == 1 {
                *x = -*x;
            }
        }
    }
}

fn ansatz(params: &[f64], n: usize) -> Vec<f64> {
    let mut v = vec![0.0; 1 << n];
    v[0] = 1.0;
    for layer in params.chunks(n) {
        for (q, &t) in layer.iter().enumerate() {
            ry_apply(&mut v, q, t);
        }
        cz_chain(&mut v, n);
    }
    v
}

fn energy(m: &[Vec<f64>], v: &[f64]) -> f64 {
    m.iter().zip(v).map(|(row, a)| a * row.iter().zip(v).map(|(x, y)| x * y).sum::<f64>()).sum()
}

fn grid_angle(k: usize) -> f64 {
    2.0 * PI * k as f64 / GRID as f64
}

/// Minimum over the 200-point-per-parameter grid of the two-layer ansatz.
fn grid_minimum(h: &[Vec<f64>], n: usize) -> f64 {
    let mut best = f64::INFINITY;
    if n == 1 {
        for a in 0..GRID {
            for b in 0..GRID {
                best = best.min(energy(h, &ansatz(&[grid_angle(a), grid_angle(b)], 1)));
            }
        }
        return best;
    }
    // Two qubits: ψ = W·(u ⊗ v) with W = CZ·RY(b)·CZ and u, v the first-layer
    // single-qubit states. For fixed b, M = Wᵀ·H·W; for fixed u the energy is
    // vᵀQv with a 2×2 Q, scanned over the grid for v.
    let cs: Vec<(f64, f64)> = (0..GRID).map(|k| (grid_angle(k) / 2.0).sin_cos()).map(|(s, c)| (c, s)).collect();
    let dim = 4;
    for b0 in 0..GRID {
        for b1 in 0..GRID {
            // w[c] is column c of W.
            let w: Vec<Vec<f64>> = (0..dim)
                .map(|c| {
                    let mut col = vec![0.0; dim];
                    col[c] = 1.0;
                    cz_chain(&mut col, 2);
                    ry_apply(&mut col, 0, grid_angle(b0));
                    ry_apply(&mut col, 1, grid_angle(b1));
                    cz_chain(&mut col, 2);
                    col
                })
                .collect();
            let hw: Vec<Vec<f64>> = (0..dim)
                .map(|c| (0..dim).map(|r| (0..dim).map(|k| h[r][k] * w[c][k]).sum()).collect())
                .collect();
            let mm: Vec<Vec<f64>> =
                (0..dim).map(|r| (0..dim).map(|c| (0..dim).map(|k| w[r][k] * hw[c][k]).sum()).collect()).collect();
            for &(c0, s0) in &cs {
                let u = [c0, s0];
                // index = bit1·2 + bit0, amplitude = v[bit1]·u[bit0]
                let q = |j: usize, l: usize| -> f64 {
                    let mut t = 0.0;
                    for i in 0..2 {
                        for k in 0..2 {
                            t += mm[j * 2 + i][l * 2 + k] * u[i] * u[k];
                        }
                    }
                    t
                };
                let (q00, q01, q11) = (q(0, 0), q(0, 1) + q(1, 0), q(1, 1));
                for &(c1, s1) in &cs {
                    let e = q00 * c1 * c1 + q01 * c1 * s1 + q11 * s1 * s1;
                    if e < best {
                        best = e;
                    }
                }
            }
        }
    }
    best
}

fn problems(rng: &mut impl Rng, n: usize, seed: u64) -> [HamiltonianSpec; 2] {
    let rows: Vec<Vec<f64>> = (0..8).map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let d = Dataset::new(names, rows, vec![Class::Positive; 8]).unwrap();
    let bounds = NormBounds::from_dataset(&d).unwrap();
    let outer = HamiltonianSpec::outer_product(encode_sample(d.row(seed as usize % 8), &bounds).unwrap()).unwrap();
    [outer, build_ising_hamiltonian(&d, &bounds).unwrap()]
}

fn vqe_oracle() -> Check {
    let mut rng = SeedSpec::new(7).rng();
    let cfg = VqeConfig::default();
    let mut worst = f64::NEG_INFINITY;
    let mut compared = 0;
    for (n, count) in [(1usize, 4u64), (2, 1)] {
        for p in 0..count {
            for h in problems(&mut rng, n, p) {
                let out = minimize(&h, n, &cfg, SeedSpec::new(p)).map_err(|e| e.to_string())?;
                let m = dense_h(&h, n);
                let grid = grid_minimum(&m, n);
                let gap = out.best_energy - grid;
                worst = worst.max(gap);
                ensure(gap <= 1e-3, || format!("n={n}: vqe {} vs grid {grid}", out.best_energy))?;
                let again = energy(&m, &ansatz(out.best_params.values(), n));
                ensure((again - out.best_energy).abs() <= 1e-12, || format!("reported energy {} vs {again}", out.best_energy))?;
                compared += 1;
            }
        }
    }
    let mut monotone = 0;
    for run in 0..100u64 {
        let n = 1 + (run % 2) as usize;
        let h = problems(&mut rng, n, run)[(run / 2 % 2) as usize].clone();
        let cfg = VqeConfig {
            initial_params: if run % 3 == 0 { InitialParams::Zeros } else { InitialParams::SeededUniform },
            ..VqeConfig::default()
        };
        let out = minimize(&h, n, &cfg, SeedSpec::new(run)).map_err(|e| e.to_string())?;
        ensure(out.evaluations <= 100, || format!("run {run}: {} evaluations", out.evaluations))?;
        ensure(out.energy_trace.windows(2).all(|w| w[1] <= w[0]), || format!("run {run}: trace rises"))?;
        monotone += 1;
    }
    Ok(format!(
        "{compared} problems within 1e-3 of the grid (largest vqe - grid {worst:.2e}); {monotone}/100 traces monotone, <= 100 evaluations"
    ))
}

// ------------------------------------------------------------------ auc --

fn auc_exactness() -> Check {
    let mut rng = SeedSpec::new(8).rng();
    let mut ties = 0;
    for fixture in 0..1000 {
        let n = rng.gen_range(2..=50);
        let mut labels: Vec<Class> =
            (0..n).map(|_| if rng.gen_bool(0.4) { Class::Positive } else { Class::Negative }).collect();
        labels[0] = Class::Positive;
        labels[1] = Class::Negative;
        let levels = rng.gen_range(2..=12);
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 / levels as f64).collect();
        let (mut half_wins, mut np, mut nn) = (0u64, 0u64, 0u64);
        for i in 0..n {
            if labels[i] == Class::Positive {
                np += 1;
                for j in 0..n {
                    if labels[j] == Class::Negative {
                        half_wins += match scores[i].partial_cmp(&scores[j]).unwrap() {
                            std::cmp::Ordering::Greater => 2,
                            std::cmp::Ordering::Equal => {
                                ties += 1;
                                1
                            }
                            std::cmp::Ordering::Less => 0,
                        };
                    }
                }
            } else {
                nn += 1;
            }
        }
        let oracle = (half_wins as f64 / 2.0) / (np * nn) as f64;
        let got = auc_roc(&labels, &scores, Class::Positive).map_err(|e| e.to_string())?;
        ensure(got == oracle, || format!("fixture {fixture}: auc {got} vs pair count {oracle}"))?;
    }
    Ok(format!("1000 fixtures bit-identical to pair counting ({ties} tied pairs)"))
}

// ---------------------------------------------------------- directional --

/// Mean F1 of the untouched data and of qi_smote on a 909/91 Gaussian fixture
/// whose minority mean is `shift` on every feature.
fn f1_pair(dir: &Path, shift: &str) -> Result<(f64, f64, PathBuf), String> {
    let csv = dir.join(format!("ir10_{shift}.csv"));
    let per_fold = dir.join(format!("folds_{shift}.json"));
    let c = |p: &Path| p.to_str().unwrap().to_string();
    let gen = qsmote(&[
        "gen", "--n-majority", "909", "--n-minority", "91", "--features", "3", "--minority-mean", shift, "--seed", "2024",
        "-o", &c(&csv),
    ]);
    ensure(gen.status.success(), || "gen failed".into())?;
    let v = qsmote_json(&[
        "compare", "--input", &c(&csv), "--methods", "none,qi_smote", "--metrics", "f1", "--folds", "10", "--classifier",
        "knn", "--seed", "2024", "--per-fold", &c(&per_fold),
    ])?;
    let grid = v["result"]["grid"].as_array().unwrap();
    let f1 = |m: &str| grid.iter().find(|r| r["method"] == m).and_then(|r| r["mean"]["f1"].as_f64()).unwrap();

    let folds: Value = serde_json::from_slice(&fs::read(&per_fold).unwrap()).unwrap();
    for e in folds["experiments"].as_array().unwrap() {
        let vals: Vec<f64> = e["folds"].as_array().unwrap().iter().map(|f| f["metrics"]["f1"].as_f64().unwrap()).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        ensure(vals.len() == 10 && mean == f1(e["condition"].as_str().unwrap()), || "grid does not recompute from folds".into())?;
    }
    Ok((f1("original"), f1("qi_smote"), csv))
}

// The class separation is not pinned. The gating fixture puts the minority
// mean at 1.1, where the untouched kNN F1 is about 0.37 (calibrated on other
// seeds against the published IR = 10 baseline, without looking at qi_smote).
// The easier default fixture (mean 2) is reported alongside but does not gate.
fn directional() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let (base, qi, csv) = f1_pair(dir.path(), "1.1")?;
    ensure(qi >= base, || format!("qi_smote F1 {qi:.4} below original {base:.4}"))?;
    let (easy_base, easy_qi, _) = f1_pair(dir.path(), "2")?;

    let d = load_csv(&csv, &CsvSchema::default()).unwrap();
    for m in Method::ALL {
        let (_, rep) = resample(&d, &ResamplePlan::new(m).with_seed(SeedSpec::new(4))).map_err(|e| e.to_string())?;
        let balanced = match &rep.cleaning {
            Some(phase) => phase.counts_before_cleaning,
            None => rep.counts_after,
        };
        ensure(balanced.minority == balanced.majority, || format!("{m}: {balanced:?}"))?;
    }
    Ok(format!(
        "mean F1 qi_smote {qi:.4} >= original {base:.4}; all 8 resamplers balance exactly (cleaners before cleaning); \
         well-separated fixture for reference: qi_smote {easy_qi:.4} vs original {easy_base:.4}"
    ))
}

// ---------------------------------------------------------- determinism --

fn strip_timing(v: &mut Value) {
    if let Some(rows) = v["result"]["methods"].as_array_mut() {
        for r in rows {
            r.as_object_mut().unwrap().retain(|k, _| k != "seconds" && k != "peak_rss_kb");
        }
    }
    if let Some(o) = v["result"].as_object_mut() {
        o.remove("baseline_rss_kb");
    }
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let table4 = data("table4_folds.csv");
    let (tech, orig) = (data("f1_techniques.csv"), data("f1_original.csv"));
    let d = p("d.csv");
    let setup = qsmote(&["gen", "--n-majority", "120", "--n-minority", "15", "--seed", "5", "-o", &d]);
    ensure(setup.status.success(), || "gen failed".into())?;

    let cases: Vec<(&str, Vec<String>, Vec<String>)> = vec![
        ("gen", vec!["gen".into(), "-o".into(), p("g.csv")], vec![p("g.csv")]),
        ("imbalance", vec!["imbalance".into(), "-i".into(), d.clone(), "--ir".into(), "20".into(), "-o".into(), p("i.csv")], vec![p("i.csv")]),
        (
            "resample",
            vec!["resample".into(), "-i".into(), d.clone(), "-o".into(), p("r.csv"), "--method".into(), "qi_smote".into(), "--hamiltonian".into(), "ising".into()],
            vec![p("r.csv"), p("r.csv.provenance.json")],
        ),
        (
            "resample",
            vec!["resample".into(), "-i".into(), d.clone(), "-o".into(), p("t.csv"), "--method".into(), "smote_tomek".into()],
            vec![p("t.csv"), p("t.csv.provenance.json")],
        ),
        ("evaluate", vec!["evaluate".into(), "-i".into(), d.clone(), "--method".into(), "qi_smote".into(), "--folds".into(), "3".into()], vec![]),
        (
            "evaluate",
            vec!["evaluate".into(), "-i".into(), d.clone(), "--classifier".into(), "logistic".into(), "--test-fraction".into(), "0.3".into()],
            vec![],
        ),
        (
            "compare",
            vec!["compare".into(), "-i".into(), d.clone(), "--methods".into(), "none,smote,adasyn,rus".into(), "--folds".into(), "3".into(), "--per-fold".into(), p("pf.json")],
            vec![p("pf.json")],
        ),
        ("wilcoxon", vec!["wilcoxon".into(), "-i".into(), table4.to_str().unwrap().into()], vec![]),
        (
            "improve",
            vec!["improve".into(), "--techniques".into(), tech.to_str().unwrap().into(), "--original".into(), orig.to_str().unwrap().into()],
            vec![],
        ),
        (
            "scatter",
            vec!["scatter".into(), "-i".into(), p("r.csv"), "--provenance".into(), p("r.csv.provenance.json"), "-o".into(), p("s.csv"), "--svg".into(), p("s.svg")],
            vec![p("s.csv"), p("s.svg")],
        ),
        (
            "bench",
            vec!["bench".into(), "--out-dir".into(), p("bench")],
            vec![p("bench/smote.csv"), p("bench/qi_smote.csv"), p("bench/qi_smote.csv.provenance.json")],
        ),
    ];
    let mut compared = 0;
    for (name, args, files) in &cases {
        let snapshot = |format: &str| -> Result<(Vec<u8>, Vec<Vec<u8>>), String> {
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            let report = p("report.json");
            a.extend(["--seed", "11", "--format", format, "--report", &report]);
            let out = qsmote(&a);
            ensure(out.status.success(), || format!("{name}: {}", String::from_utf8_lossy(&out.stderr)))?;
            let mut stdout = out.stdout;
            let mut report_bytes = fs::read(&report).map_err(|e| e.to_string())?;
            if *name == "bench" {
                let mut v: Value = serde_json::from_slice(&report_bytes).unwrap();
                strip_timing(&mut v);
                report_bytes = v.to_string().into_bytes();
                stdout.clear();
            }
            let mut outputs = vec![report_bytes];
            for f in files {
                outputs.push(fs::read(f).map_err(|e| format!("{name}: {f}: {e}"))?);
            }
            Ok((stdout, outputs))
        };
        for format in ["text", "csv", "json"] {
            let first = snapshot(format)?;
            let second = snapshot(format)?;
            ensure(first == second, || format!("{name} --format {format} differs between runs"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} command/format pairs byte-identical across reruns (bench timing fields excluded)"))
}

fn main() {
    type Entry = (u8, &'static str, fn() -> Check);
    let checks: [Entry; 10] = [
        (1, "gate fidelity", gate_fidelity),
        (2, "signed-rank reproduction", wilcoxon_reproduction),
        (3, "F1 improvement reproduction", improvement_reproduction),
        (4, "F1 internal consistency", f1_consistency),
        (5, "SMOTE geometry", smote_geometry),
        (6, "desk benchmark", desk_benchmark),
        (7, "VQE grid oracle", vqe_oracle),
        (8, "AUC exactness", auc_exactness),
        (9, "directional end-to-end", directional),
        (10, "CLI determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} [{secs:.2}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} [{secs:.2}s]: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
