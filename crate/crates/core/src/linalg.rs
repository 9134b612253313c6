//! Small dense/tridiagonal linear algebra: Sturm bisection for symmetric
//! tridiagonal eigenvalues, inverse iteration for eigenvectors, a pivoting
//! tridiagonal solver, and a dense LU for the implicit hierarchy stepper.

use crate::error::{CdmeError, Result};

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off)
/// strictly below `lambda`, via the Sturm sequence of LDL^T pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of (diag, off), ascending, by bisection
/// inside the Gershgorin interval.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if k > n {
        return Err(CdmeError::InvalidParameter(format!(
            "asked for {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let scale = (hi - lo).max(1.0);
    lo -= 1e-8 * scale + 1.0;
    hi += 1e-8 * scale + 1.0;

    let mut eigenvalues = Vec::with_capacity(k);
    for idx in 0..k {
        let mut a = lo;
        let mut b = hi;
        // Invariant: count(a) <= idx < count(b).
        for _ in 0..128 {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) <= idx {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= f64::EPSILON * (a.abs().max(b.abs()) + 1.0) {
                break;
            }
        }
        let lambda = 0.5 * (a + b);
        if !lambda.is_finite() {
            return Err(CdmeError::EigensolveFailed(format!(
                "bisection for eigenvalue {idx} diverged"
            )));
        }
        eigenvalues.push(lambda);
    }
    Ok(eigenvalues)
}

/// Eigenvector of (diag, off) for an eigenvalue estimate, by inverse
/// iteration with a pivoting tridiagonal solve. Normalized to unit Euclidean
/// norm with a positive first significant component.
pub fn tridiag_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(1.0f64, |m, &x| m.max(x.abs()));
    // Small shift keeps the shifted matrix invertible without hurting
    // convergence (the iteration still converges to the nearest eigenvector).
    let shifted: Vec<f64> = diag
        .iter()
        .map(|&d| d - lambda - 1e-12 * scale)
        .collect();
    let sub = off.to_vec();
    let sup = off.to_vec();

    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i * 2654435761) % 97) as f64 / 97.0)
        .collect();
    normalize(&mut v);
    let mut residual = f64::MAX;
    for _ in 0..8 {
        v = solve_tridiag(&sub, &shifted, &sup, &v)?;
        normalize(&mut v);
        residual = tridiag_residual(diag, off, lambda, &v);
        if residual <= 1e-11 * scale.max(1.0) {
            break;
        }
    }
    if residual > 1e-6 * scale.max(1.0) {
        return Err(CdmeError::EigensolveFailed(format!(
            "inverse iteration stalled at residual {residual:.3e} for eigenvalue {lambda:.6e}"
        )));
    }
    // Deterministic sign.
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
    }
    Ok(v)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn tridiag_residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut max_r = 0.0f64;
    for i in 0..n {
        let mut r = (diag[i] - lambda) * v[i];
        if i > 0 {
            r += off[i - 1] * v[i - 1];
        }
        if i < n - 1 {
            r += off[i] * v[i + 1];
        }
        max_r = max_r.max(r.abs());
    }
    max_r
}

/// Solve a general tridiagonal system by LU with partial pivoting (the
/// pivoted factor picks up one extra superdiagonal). `sub` and `sup` have
/// length n-1.
pub fn solve_tridiag(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        if diag[0].abs() < 1e-300 {
            return Err(CdmeError::EigensolveFailed(
                "singular tridiagonal system".into(),
            ));
        }
        return Ok(vec![rhs[0] / diag[0]]);
    }
    assert_eq!(sub.len(), n - 1);
    assert_eq!(sup.len(), n - 1);

    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let dl = sub;
    let mut du2 = vec![0.0; n - 2];
    let mut b = rhs.to_vec();

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() < 1e-300 {
                return Err(CdmeError::EigensolveFailed(
                    "singular tridiagonal system".into(),
                ));
            }
            let m = dl[i] / d[i];
            d[i + 1] -= m * du[i];
            b[i + 1] -= m * b[i];
        } else {
            // Swap rows i and i+1, then eliminate.
            let m = d[i] / dl[i];
            d[i] = dl[i];
            let old_d_next = d[i + 1];
            d[i + 1] = du[i] - m * old_d_next;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du2[i];
            }
            du[i] = old_d_next;
            let old_b = b[i];
            b[i] = b[i + 1];
            b[i + 1] = old_b - m * b[i];
        }
    }
    if d[n - 1].abs() < 1e-300 {
        return Err(CdmeError::EigensolveFailed(
            "singular tridiagonal system".into(),
        ));
    }

    // Back substitution with two superdiagonals.
    let mut x = vec![0.0; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for i in (0..n - 2).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

/// Dense LU factorization with partial pivoting.
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

pub fn lu_factor(matrix: Vec<f64>, n: usize) -> Result<LuFactors> {
    assert_eq!(matrix.len(), n * n);
    let mut lu = matrix;
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[col * n + col].abs();
        for row in col + 1..n {
            let v = lu[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-300 {
            return Err(CdmeError::EigensolveFailed("singular dense system".into()));
        }
        if pivot != col {
            perm.swap(col, pivot);
            for j in 0..n {
                lu.swap(col * n + j, pivot * n + j);
            }
        }
        let d = lu[col * n + col];
        for row in col + 1..n {
            let m = lu[row * n + col] / d;
            lu[row * n + col] = m;
            for j in col + 1..n {
                lu[row * n + j] -= m * lu[col * n + j];
            }
        }
    }
    Ok(LuFactors { n, lu, perm })
}

impl LuFactors {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut y: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 1..n {
            for j in 0..i {
                y[i] -= self.lu[i * n + j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.lu[i * n + j] * y[j];
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }
}
