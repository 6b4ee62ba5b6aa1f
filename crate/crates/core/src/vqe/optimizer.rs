//! Derivative-free local minimisers used by the VQE loop.
//!
//! Both run against a hard evaluation budget and report the best value seen
//! after every evaluation, so their traces are non-increasing by construction.

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    /// Best objective value after each evaluation.
    pub trace: Vec<f64>,
}

struct Counter<F> {
    f: F,
    budget: usize,
    best_x: Vec<f64>,
    best_f: f64,
    trace: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn new(f: F, budget: usize, x0: &[f64]) -> Self {
        Counter {
            f,
            budget,
            best_x: x0.to_vec(),
            best_f: f64::INFINITY,
            trace: Vec::with_capacity(budget),
        }
    }

    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.trace.len() >= self.budget {
            return None;
        }
        let mut v = (self.f)(x);
        if v.is_nan() {
            v = f64::INFINITY;
        }
        if v < self.best_f {
            self.best_f = v;
            self.best_x.copy_from_slice(x);
        }
        self.trace.push(self.best_f);
        Some(v)
    }

    fn finish(self) -> OptimResult {
        OptimResult {
            x: self.best_x,
            f: self.best_f,
            evaluations: self.trace.len(),
            trace: self.trace,
        }
    }
}

type Point = (Vec<f64>, f64);

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn farthest(verts: &[Point], from: &[f64]) -> (usize, f64) {
    verts
        .iter()
        .enumerate()
        .map(|(j, v)| (j, dist(&v.0, from)))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
}

/// Gauss–Jordan inverse with partial pivoting; `None` when (near) singular.
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i != col {
                let factor = m[i][col];
                if factor != 0.0 {
                    for j in 0..2 * n {
                        m[i][j] -= factor * m[col][j];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn promote_best(base: &mut Point, verts: &mut [Point]) {
    if let Some(j) = (0..verts.len()).min_by(|&a, &b| verts[a].1.total_cmp(&verts[b].1)) {
        if verts[j].1 < base.1 {
            std::mem::swap(base, &mut verts[j]);
        }
    }
}

/// Unconstrained COBYLA-style search: a linear model interpolated on a simplex
/// of n+1 points, one evaluation per trial point, and a trust radius that only
/// shrinks when a step fails on an acceptable simplex.
///
/// Stops when the budget is spent or the radius would fall below `rho_end`.
pub fn linear_trust_region<F: FnMut(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    budget: usize,
    rho_begin: f64,
    rho_end: f64,
) -> OptimResult {
    let m = x0.len();
    let mut c = Counter::new(f, budget, x0);
    let Some(f0) = c.eval(x0) else { return c.finish() };
    if m == 0 {
        return c.finish();
    }
    let mut rho = rho_begin.max(rho_end);
    let mut base: Point = (x0.to_vec(), f0);
    let mut verts: Vec<Point> = Vec::with_capacity(m);

    'outer: loop {
        // (Re)build an axis-aligned simplex around the base point.
        if verts.len() < m {
            verts.clear();
            for k in 0..m {
                let mut x = base.0.clone();
                x[k] += rho;
                let Some(fx) = c.eval(&x) else { break 'outer };
                verts.push((x, fx));
            }
            promote_best(&mut base, &mut verts);
        }

        let edges: Vec<Vec<f64>> = verts
            .iter()
            .map(|v| v.0.iter().zip(&base.0).map(|(a, b)| a - b).collect())
            .collect();
        let Some(inv) = invert(&edges) else {
            verts.clear();
            continue;
        };
        let df: Vec<f64> = verts.iter().map(|v| v.1 - base.1).collect();
        let grad: Vec<f64> = (0..m).map(|i| (0..m).map(|k| inv[i][k] * df[k]).sum()).collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();

        let mut poor = true;
        if gnorm.is_finite() && gnorm > 0.0 {
            let trial: Vec<f64> = base.0.iter().zip(&grad).map(|(x, g)| x - rho * g / gnorm).collect();
            let Some(ft) = c.eval(&trial) else { break };
            let predicted = rho * gnorm;
            let actual = base.1 - ft;
            if ft < base.1 {
                let (j, _) = farthest(&verts, &trial);
                verts[j] = std::mem::replace(&mut base, (trial, ft));
            } else {
                let (j, d) = farthest(&verts, &base.0);
                if d > rho {
                    verts[j] = (trial, ft);
                } else if let Some(w) = (0..m).max_by(|&a, &b| verts[a].1.total_cmp(&verts[b].1)) {
                    if ft < verts[w].1 {
                        verts[w] = (trial, ft);
                    }
                }
            }
            poor = actual < 0.1 * predicted;
        }
        if !poor {
            continue;
        }

        // Fix the simplex geometry before giving up on this radius.
        let (j, d) = farthest(&verts, &base.0);
        if d > 2.0 * rho {
            let edges: Vec<Vec<f64>> = verts
                .iter()
                .map(|v| v.0.iter().zip(&base.0).map(|(a, b)| a - b).collect())
                .collect();
            let mut dir: Vec<f64> = match invert(&edges) {
                Some(inv) => (0..m).map(|i| inv[i][j]).collect(),
                None => (0..m).map(|i| if i == j { 1.0 } else { 0.0 }).collect(),
            };
            let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            let slope: f64 = dir.iter().zip(&grad).map(|(a, b)| a * b).sum();
            let sign = if slope > 0.0 { -1.0 } else { 1.0 };
            for v in dir.iter_mut() {
                *v *= sign * rho / n;
            }
            let x: Vec<f64> = base.0.iter().zip(&dir).map(|(a, b)| a + b).collect();
            let Some(fx) = c.eval(&x) else { break };
            verts[j] = (x, fx);
            promote_best(&mut base, &mut verts);
            continue;
        }

        if rho <= rho_end {
            break;
        }
        rho *= 0.5;
        if rho <= 1.5 * rho_end {
            rho = rho_end;
        }
    }
    c.finish()
}

/// Classic Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
/// Stops when the simplex's value spread drops below `tolerance`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], budget: usize, step: f64, tolerance: f64) -> OptimResult {
    let m = x0.len();
    let mut c = Counter::new(f, budget, x0);
    let Some(f0) = c.eval(x0) else { return c.finish() };
    if m == 0 {
        return c.finish();
    }
    let mut simplex: Vec<Point> = vec![(x0.to_vec(), f0)];
    for k in 0..m {
        let mut x = x0.to_vec();
        x[k] += step;
        let Some(fx) = c.eval(&x) else { return c.finish() };
        simplex.push((x, fx));
    }
    let along = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> { from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect() };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[m].1 - simplex[0].1 < tolerance {
            break;
        }
        let centroid: Vec<f64> = (0..m).map(|i| simplex[..m].iter().map(|p| p.0[i]).sum::<f64>() / m as f64).collect();
        let worst = simplex[m].clone();
        let xr = along(&worst.0, &centroid, 2.0);
        let Some(fr) = c.eval(&xr) else { break };
        if fr < simplex[0].1 {
            let xe = along(&worst.0, &centroid, 3.0);
            let Some(fe) = c.eval(&xe) else { break };
            simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
        } else {
            let (xc, outside) = if fr < worst.1 {
                (along(&worst.0, &centroid, 1.5), true)
            } else {
                (along(&worst.0, &centroid, 0.5), false)
            };
            let Some(fc) = c.eval(&xc) else { break };
            if (outside && fc <= fr) || (!outside && fc < worst.1) {
                simplex[m] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    let x = along(&best, &p.0, 0.5);
                    let Some(fx) = c.eval(&x) else { return c.finish() };
                    *p = (x, fx);
                }
            }
        }
    }
    c.finish()
}
