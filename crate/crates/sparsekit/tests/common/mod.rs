//! Shared test oracles. Everything here is coded independently of the
//! library kernels it checks: its own Gaussian elimination, its own
//! determinant, its own enumeration loops.

#![allow(dead_code)]

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use sparsekit::linalg::Matrix;

/// Triple-loop matrix product.
pub fn naive_matmul(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = 0.0;
            for k in 0..a.cols() {
                s += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    out
}

/// Gaussian elimination with partial pivoting; `None` when the system is
/// numerically singular.
pub fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let scale = m
        .iter()
        .flatten()
        .fold(1.0_f64, |acc, &v| acc.max(v.abs()));
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if pivot_val <= 1e-10 * scale {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// Determinant by elimination with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < m - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Brute-force LP minimum over the vertices of `{x : rows x <= rhs}`.
///
/// Every size-`n` subset of rows is solved as an equality system and kept if
/// it satisfies all constraints; the best objective wins. Only valid for
/// LPs whose minimum is attained at a vertex (bounded feasible regions).
pub fn vertex_enumeration_min(
    c: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
) -> Option<(f64, Vec<f64>)> {
    let n = c.len();
    let m = rows.len();
    assert!(m >= n);
    let scale = rhs.iter().fold(1.0_f64, |acc, &v| acc.max(v.abs()));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for subset in combinations(m, n) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&r| rows[r].clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&r| rhs[r]).collect();
        let Some(x) = solve_square(&a, &b) else {
            continue;
        };
        let feasible = rows.iter().zip(rhs).all(|(row, &bound)| {
            let lhs: f64 = row.iter().zip(&x).map(|(&a, &b)| a * b).sum();
            lhs <= bound + 1e-9 * scale.max(1.0)
        });
        if !feasible {
            continue;
        }
        let obj: f64 = c.iter().zip(&x).map(|(&ci, &xi)| ci * xi).sum();
        if best.as_ref().map_or(true, |(bb, _)| obj < *bb) {
            best = Some((obj, x));
        }
    }
    best
}

/// Enumeration oracle for the Dantzig selector at tiny scale:
/// `min |beta|_1` subject to `|v - M beta|_inf <= bound`, `M = X'X`,
/// `v = X'y`.
///
/// Candidate optima have a zero set `Z` and `p - |Z|` active constraint
/// rows; enumerating all `(Z, rows)` pairs covers every vertex of the
/// lifted LP.
pub fn ds_enumeration_min_l1(x: &Matrix, y: &[f64], bound: f64) -> f64 {
    let n = x.rows();
    let p = x.cols();
    // Naive M = X'X and v = X'y.
    let mut m = vec![vec![0.0; p]; p];
    let mut v = vec![0.0; p];
    for a in 0..p {
        for b in 0..p {
            let mut s = 0.0;
            for i in 0..n {
                s += x.get(i, a) * x.get(i, b);
            }
            m[a][b] = s;
        }
        let mut s = 0.0;
        for i in 0..n {
            s += x.get(i, a) * y[i];
        }
        v[a] = s;
    }
    // Constraint rows a'beta <= b: (+M_j, bound + v_j) and (-M_j, bound - v_j).
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * p);
    let mut rhs: Vec<f64> = Vec::with_capacity(2 * p);
    for j in 0..p {
        rows.push(m[j].clone());
        rhs.push(bound + v[j]);
        rows.push(m[j].iter().map(|&t| -t).collect());
        rhs.push(bound - v[j]);
    }
    let scale = rhs.iter().fold(1.0_f64, |acc, &t| acc.max(t.abs()));

    let mut best = f64::INFINITY;
    for zero_mask in 0..(1u32 << p) {
        let free: Vec<usize> = (0..p).filter(|j| zero_mask & (1 << j) == 0).collect();
        let k = free.len();
        for active in combinations(2 * p, k) {
            let a: Vec<Vec<f64>> = active
                .iter()
                .map(|&r| free.iter().map(|&j| rows[r][j]).collect())
                .collect();
            let b: Vec<f64> = active.iter().map(|&r| rhs[r]).collect();
            let beta_free = if k == 0 {
                Vec::new()
            } else {
                match solve_square(&a, &b) {
                    Some(sol) => sol,
                    None => continue,
                }
            };
            let mut beta = vec![0.0; p];
            for (&j, &val) in free.iter().zip(&beta_free) {
                beta[j] = val;
            }
            let feasible = rows.iter().zip(&rhs).all(|(row, &bb)| {
                let lhs: f64 = row.iter().zip(&beta).map(|(&ai, &bi)| ai * bi).sum();
                lhs <= bb + 1e-9 * scale.max(1.0)
            });
            if !feasible {
                continue;
            }
            let l1: f64 = beta.iter().map(|t| t.abs()).sum();
            if l1 < best {
                best = l1;
            }
        }
    }
    best
}

/// Basis-pursuit oracle at tiny scale: `min |beta|_1` s.t. `X beta = y` by
/// enumerating supports of size `n` (plus smaller supports via singularity
/// skips handled by larger enumeration below).
pub fn bp_enumeration_min_l1(x: &Matrix, y: &[f64]) -> f64 {
    let n = x.rows();
    let p = x.cols();
    let mut best = f64::INFINITY;
    for support in combinations(p, n.min(p)) {
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| support.iter().map(|&j| x.get(i, j)).collect())
            .collect();
        let Some(coef) = solve_square(&a, y) else {
            continue;
        };
        let l1: f64 = coef.iter().map(|t| t.abs()).sum();
        if l1 < best {
            best = l1;
        }
    }
    best
}

/// All eigenvalues of a small symmetric matrix by bisection on sign changes
/// of `det(A - lambda I)`. Assumes distinct eigenvalues (random matrices).
pub fn eigenvalues_det_bisection(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    let radius = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).abs()).sum::<f64>())
        .fold(0.0_f64, f64::max)
        + 1.0;
    let char_det = |lambda: f64| -> f64 {
        let shifted: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| a.get(i, j) - if i == j { lambda } else { 0.0 })
                    .collect()
            })
            .collect();
        determinant(&shifted)
    };
    let grid = 20_000;
    let mut roots = Vec::new();
    let mut prev_lambda = -radius;
    let mut prev_val = char_det(prev_lambda);
    for g in 1..=grid {
        let lambda = -radius + 2.0 * radius * g as f64 / grid as f64;
        let val = char_det(lambda);
        if prev_val == 0.0 {
            roots.push(prev_lambda);
        } else if prev_val.signum() != val.signum() && val != 0.0 {
            let (mut lo, mut hi) = (prev_lambda, lambda);
            let mut flo = prev_val;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fmid = char_det(mid);
                if fmid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo.signum() == fmid.signum() {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_lambda = lambda;
        prev_val = val;
    }
    roots
}

/// One-sided Mann-Whitney z statistic for H1: samples in `b` tend to be
/// larger than samples in `a` (normal approximation, no tie correction —
/// the inputs are continuous).
pub fn mann_whitney_greater_z(b: &[f64], a: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut u = 0.0;
    for &bv in b {
        for &av in a {
            if bv > av {
                u += 1.0;
            } else if bv == av {
                u += 0.5;
            }
        }
    }
    let mean = na * nb / 2.0;
    let sd = (na * nb * (na + nb + 1.0) / 12.0).sqrt();
    (u - mean) / sd
}

/// Critical value of the standard normal at the one-sided 5% level.
pub const Z_CRIT_05: f64 = 1.6448536269514722;

/// Sum-formula Pearson correlation (deliberately a different algebraic
/// route than the library's centered formula).
pub fn pearson_naive(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| a * b).sum();
    let sxx: f64 = x.iter().map(|&a| a * a).sum();
    let syy: f64 = y.iter().map(|&b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Random matrix with i.i.d. standard-normal entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize, p: usize) -> Matrix {
    let data: Vec<f64> = (0..n * p).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::new(n, p, data).unwrap()
}

/// Random orthonormal matrix: Gram-Schmidt on a square Gaussian draw, with
/// one re-orthogonalization pass.
pub fn gaussian_orthonormal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: f64 = cols[j].iter().zip(&cols[k]).map(|(&a, &b)| a * b).sum();
                let prev = cols[k].clone();
                for (cj, &ck) in cols[j].iter_mut().zip(&prev) {
                    *cj -= proj * ck;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|&v| v * v).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let mut m = Matrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Random LP with a bounded nonempty feasible region: a box plus random
/// halfspaces that all contain a deliberately chosen interior point.
pub fn random_bounded_lp<R: Rng>(
    rng: &mut R,
    n_vars: usize,
    extra_rows: usize,
) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let interior: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..extra_rows {
        let row: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let at_interior: f64 = row.iter().zip(&interior).map(|(&a, &b)| a * b).sum();
        rows.push(row);
        rhs.push(at_interior + rng.gen_range(0.1..1.1));
    }
    // Box |x_j| <= 2 keeps everything bounded.
    for j in 0..n_vars {
        let mut row = vec![0.0; n_vars];
        row[j] = 1.0;
        rows.push(row);
        rhs.push(2.0);
        let mut row = vec![0.0; n_vars];
        row[j] = -1.0;
        rows.push(row);
        rhs.push(2.0);
    }
    let c: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (c, rows, rhs)
}

/// Closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric form),
/// ascending.
pub fn eig3(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return d;
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (detb / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    let mut out = [lo, mid, hi];
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Independent enumeration of delta_3: recursive subset walk plus the
/// closed-form 3x3 eigenvalues — a different loop and a different
/// eigensolver than the library path.
pub fn delta3_independent(x: &Matrix) -> (f64, Vec<usize>) {
    let p = x.cols();
    let cols: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    fn rec(start: usize, chosen: &mut Vec<usize>, cols: &[Vec<f64>], best: &mut (f64, Vec<usize>)) {
        if chosen.len() == 3 {
            let mut g = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    g[a][b] = cols[chosen[a]]
                        .iter()
                        .zip(&cols[chosen[b]])
                        .map(|(&u, &v)| u * v)
                        .sum();
                }
            }
            let eigs = eig3(&g);
            let delta = (eigs[2] - 1.0).max(1.0 - eigs[0]);
            if delta > best.0 {
                *best = (delta, chosen.clone());
            }
            return;
        }
        for j in start..cols.len() {
            chosen.push(j);
            rec(j + 1, chosen, cols, best);
            chosen.pop();
        }
    }
    rec(0, &mut Vec::new(), &cols, &mut best);
    best
}

pub fn soft_threshold(t: f64, lambda: f64) -> f64 {
    if t > lambda {
        t - lambda
    } else if t < -lambda {
        t + lambda
    } else {
        0.0
    }
}

pub fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (&x, &y)| m.max((x - y).abs()))
}
