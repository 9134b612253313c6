//! Degradation, creation and initial-position rate functions on [0,1].
//!
//! Each rate is either a closed form (constant or cosine series, the latter
//! matching the Neumann eigenbasis so projections are exact) or grid samples
//! interpolated linearly.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CdmeError, Result};
use crate::quad::Grid;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFn {
    Constant { value: f64 },
    /// coeffs[0] + sum_q coeffs[q] * cos(q pi x)
    CosineSeries { coeffs: Vec<f64> },
    /// Piecewise-linear interpolation of (x, value) samples; xs strictly
    /// increasing and spanning [0,1].
    GridSamples { xs: Vec<f64>, values: Vec<f64> },
}

impl RateFn {
    pub fn constant(value: f64) -> RateFn {
        RateFn::Constant { value }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RateFn::Constant { value } => *value,
            RateFn::CosineSeries { coeffs } => {
                let mut s = 0.0;
                for (q, a) in coeffs.iter().enumerate() {
                    s += if q == 0 { *a } else { a * (q as f64 * PI * x).cos() };
                }
                s
            }
            RateFn::GridSamples { xs, values } => {
                if x <= xs[0] {
                    return values[0];
                }
                if x >= xs[xs.len() - 1] {
                    return values[values.len() - 1];
                }
                let j = xs.partition_point(|&p| p <= x).min(xs.len() - 1);
                let (x0, x1) = (xs[j - 1], xs[j]);
                let w = (x - x0) / (x1 - x0);
                values[j - 1] * (1.0 - w) + values[j] * w
            }
        }
    }

    pub fn eval_on(&self, grid: &Grid) -> Vec<f64> {
        grid.sample(|x| self.eval(x))
    }

    /// Upper bound for rejection sampling and thinning. Exact for constants
    /// and grid samples, a safe triangle-inequality bound for cosine series.
    pub fn upper_bound(&self) -> f64 {
        match self {
            RateFn::Constant { value } => *value,
            RateFn::CosineSeries { coeffs } => {
                coeffs[0] + coeffs.iter().skip(1).map(|a| a.abs()).sum::<f64>()
            }
            RateFn::GridSamples { values, .. } => values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Integral over [0,1]; exact for closed forms (cos(q pi x) integrates
    /// to zero for q >= 1), trapezoid on the samples otherwise.
    pub fn integral(&self) -> f64 {
        match self {
            RateFn::Constant { value } => *value,
            RateFn::CosineSeries { coeffs } => coeffs[0],
            RateFn::GridSamples { xs, values } => {
                let mut s = 0.0;
                for i in 1..xs.len() {
                    s += 0.5 * (values[i] + values[i - 1]) * (xs[i] - xs[i - 1]);
                }
                s
            }
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, RateFn::GridSamples { .. })
    }

    fn check_shape(&self, name: &str) -> Result<()> {
        match self {
            RateFn::Constant { .. } => Ok(()),
            RateFn::CosineSeries { coeffs } => {
                if coeffs.is_empty() {
                    Err(CdmeError::InvalidParameter(format!(
                        "{name}: cosine series needs at least one coefficient"
                    )))
                } else {
                    Ok(())
                }
            }
            RateFn::GridSamples { xs, values } => {
                if xs.len() != values.len() || xs.len() < 2 {
                    return Err(CdmeError::InvalidParameter(format!(
                        "{name}: grid samples need matching xs/values with >= 2 rows"
                    )));
                }
                if !xs.windows(2).all(|w| w[1] > w[0]) {
                    return Err(CdmeError::InvalidParameter(format!(
                        "{name}: sample abscissae must be strictly increasing"
                    )));
                }
                if xs[0] < -1e-12 || xs[xs.len() - 1] > 1.0 + 1e-12 {
                    return Err(CdmeError::InvalidParameter(format!(
                        "{name}: sample abscissae must lie in [0,1]"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// The three model inputs: per-position degradation rate, creation intensity
/// and the initial-position density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFunctions {
    pub lambda_d: RateFn,
    pub lambda_c: RateFn,
    pub zeta: RateFn,
}

impl RateFunctions {
    /// Pointwise nonnegativity on the grid, and unit mass for zeta
    /// (1e-10 for closed forms, 1e-6 for sampled data).
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        for (name, f) in [
            ("lambda_d", &self.lambda_d),
            ("lambda_c", &self.lambda_c),
            ("zeta", &self.zeta),
        ] {
            f.check_shape(name)?;
            for &x in grid.points() {
                let v = f.eval(x);
                if !v.is_finite() {
                    return Err(CdmeError::NonFinite {
                        context: format!("{name}({x})"),
                    });
                }
                if v < -1e-12 {
                    return Err(CdmeError::InvalidParameter(format!(
                        "{name}({x}) = {v} is negative"
                    )));
                }
            }
        }
        let mass = if self.zeta.is_closed_form() {
            self.zeta.integral()
        } else {
            grid.trapezoid(&self.zeta.eval_on(grid))
        };
        let tol = if self.zeta.is_closed_form() { 1e-10 } else { 1e-6 };
        if (mass - 1.0).abs() > tol {
            return Err(CdmeError::InvalidParameter(format!(
                "zeta integrates to {mass}, expected 1 within {tol}"
            )));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.lambda_c.integral()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_series_eval_and_integral() {
        let f = RateFn::CosineSeries {
            coeffs: vec![1.0, 0.5],
        };
        assert_abs_diff_eq!(f.eval(0.0), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.eval(1.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.integral(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.upper_bound(), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn grid_samples_interpolate_linearly() {
        let f = RateFn::GridSamples {
            xs: vec![0.0, 0.5, 1.0],
            values: vec![0.0, 1.0, 0.0],
        };
        assert_abs_diff_eq!(f.eval(0.25), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.eval(0.75), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.integral(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn validate_rejects_negative_rate_and_unnormalized_zeta() {
        let grid = Grid::uniform(256).unwrap();
        let bad = RateFunctions {
            lambda_d: RateFn::CosineSeries {
                coeffs: vec![0.1, 1.0],
            },
            lambda_c: RateFn::constant(0.0),
            zeta: RateFn::constant(1.0),
        };
        assert!(bad.validate(&grid).is_err());

        let bad_mass = RateFunctions {
            lambda_d: RateFn::constant(1.0),
            lambda_c: RateFn::constant(0.0),
            zeta: RateFn::constant(1.1),
        };
        assert!(bad_mass.validate(&grid).is_err());

        let good = RateFunctions {
            lambda_d: RateFn::constant(1.0),
            lambda_c: RateFn::CosineSeries {
                coeffs: vec![1.0, 0.5],
            },
            zeta: RateFn::constant(1.0),
        };
        assert!(good.validate(&grid).is_ok());
        assert_abs_diff_eq!(good.gamma(), 1.0, epsilon = 1e-15);
    }
}
