//! Uniform-grid trapezoid quadrature on [0,1] and Gauss-Hermite rules for
//! standard-normal expectations.
//!
//! The trapezoid rule on a uniform grid integrates cos(q pi x) exactly for
//! 0 < q < 2(m-1), so it is exact on products of the Neumann cosine modes;
//! the basis tests rely on this.

use crate::error::{CdmeError, Result};
use crate::linalg;

/// Uniform grid on [0,1] including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn uniform(m: usize) -> Result<Grid> {
        if m < 2 {
            return Err(CdmeError::InvalidParameter(format!(
                "grid needs at least 2 points, got {m}"
            )));
        }
        let h = 1.0 / (m - 1) as f64;
        Ok(Grid {
            points: (0..m).map(|i| i as f64 * h).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.points.len() - 1) as f64
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Trapezoid weight of node i (h at interior nodes, h/2 at the ends).
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.h();
        if i == 0 || i == self.points.len() - 1 {
            0.5 * h
        } else {
            h
        }
    }

    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.points.len());
        let h = self.h();
        let interior: f64 = values[1..values.len() - 1].iter().sum();
        h * (0.5 * (values[0] + values[values.len() - 1]) + interior)
    }

    /// Discrete L^2([0,1]) inner product with trapezoid weights.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), self.points.len());
        assert_eq!(b.len(), self.points.len());
        let h = self.h();
        let mut s = 0.5 * (a[0] * b[0] + a[a.len() - 1] * b[b.len() - 1]);
        for i in 1..a.len() - 1 {
            s += a[i] * b[i];
        }
        h * s
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.inner(a, a).sqrt()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points.iter().map(|&x| f(x)).collect()
    }
}

/// Gauss-Hermite rule for the standard normal weight: nodes x_i and weights
/// w_i with sum w_i = 1 and E[f(Z)] ~ sum_i w_i f(x_i), exact for polynomials
/// of degree < 2n.
///
/// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite recurrence
/// (diagonal 0, off-diagonal sqrt(k)).
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(CdmeError::InvalidParameter(
            "gauss_hermite needs n >= 1".into(),
        ));
    }
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let nodes = linalg::lowest_eigenvalues(&diag, &off, n)?;
    let mut weights = Vec::with_capacity(n);
    for &x in &nodes {
        let v = linalg::tridiag_eigenvector(&diag, &off, x)?;
        weights.push(v[0] * v[0]);
    }
    // The first-component squares sum to 1 exactly in theory; renormalize to
    // absorb the eigensolve roundoff.
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trapezoid_is_exact_on_low_cosines() {
        let grid = Grid::uniform(1024).unwrap();
        for q in 1..20 {
            let vals = grid.sample(|x| (q as f64 * std::f64::consts::PI * x).cos());
            assert!(grid.trapezoid(&vals).abs() < 1e-14, "q = {q}");
        }
        let ones = grid.sample(|_| 1.0);
        assert_abs_diff_eq!(grid.trapezoid(&ones), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_hermite_matches_normal_moments() {
        let (nodes, weights) = gauss_hermite(21).unwrap();
        // E[Z^k] for k = 0, 1, 2, 4, 6: 1, 0, 1, 3, 15
        let moment = |k: i32| -> f64 {
            nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| w * x.powi(k))
                .sum()
        };
        assert_abs_diff_eq!(moment(0), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(moment(1), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(moment(2), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(moment(4), 3.0, epsilon = 1e-11);
        assert_abs_diff_eq!(moment(6), 15.0, epsilon = 1e-10);
    }

    #[test]
    fn gauss_hermite_nodes_stay_inside_default_fd_domain() {
        let (nodes, _) = gauss_hermite(21).unwrap();
        assert!(nodes.iter().all(|x| x.abs() < 6.0));
    }
}
