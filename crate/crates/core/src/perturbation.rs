//! First-order response of the zero-temperature cloud to a small change of
//! the trap potential `dV(s)`, expressed in units of `E_F` as a function of
//! the reduced effective radius.
//!
//! The Fermi energy shifts by the `k_F`-weighted average of `dV` so that the
//! particle number is unchanged, and the scaled density changes by
//! `(12 / pi^2) (1 - s^2)^(1/2) (dE_F - dV(s))` inside the cloud.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::curve::{linspace, Label, UniversalCurve};
use crate::distributions::zero_t_density;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, Tolerance};

/// Uniform grid size on `s in [0, 1]`.
pub const GRID_POINTS: usize = 2048;
/// Largest accepted `|dV| / E_F`.
pub const SMALLNESS_LIMIT: f64 = 0.1;

const RESPONSE_PREFACTOR: f64 = 12.0 / (PI * PI);
/// `integral_0^1 s^2 (1 - s^2)^(1/2) ds`.
const WEIGHT_NORM: f64 = PI / 16.0;

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A spherically symmetric potential change `dV(s) / E_F` on `[0, 1]`.
#[derive(Clone)]
pub struct PerturbationField {
    values: Vec<f64>,
    analytic: Option<Profile>,
}

impl fmt::Debug for PerturbationField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbationField")
            .field("points", &self.values.len())
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl PerturbationField {
    /// Samples a closed-form field; the closure is kept for exact evaluation.
    pub fn from_fn<F>(f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values = grid().iter().map(|&s| f(s)).collect();
        Self::checked(values, Some(Arc::new(f)))
    }

    /// Takes `GRID_POINTS` values on the uniform grid over `[0, 1]`.
    pub fn from_grid(values: Vec<f64>) -> Result<Self> {
        if values.len() != GRID_POINTS {
            return domain(format!("expected {GRID_POINTS} grid values, got {}", values.len()));
        }
        Self::checked(values, None)
    }

    /// Resamples a table of `(s, dV / E_F)` pairs onto the uniform grid by
    /// linear interpolation. The table must span the whole cloud.
    pub fn from_table(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return domain("perturbation table needs at least two rows");
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return domain("perturbation table radii must be strictly increasing");
        }
        let (first, last) = (points[0].0, points[points.len() - 1].0);
        if first > 0.0 || last < 1.0 {
            return domain(format!("perturbation table covers [{first}, {last}], needs all of [0, 1]"));
        }
        let values = grid().iter().map(|&s| interpolate_table(points, s)).collect();
        Self::checked(values, None)
    }

    fn checked(values: Vec<f64>, analytic: Option<Profile>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return domain("perturbation must be finite on [0, 1]");
        }
        let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max_abs > SMALLNESS_LIMIT {
            return Err(Error::SmallnessGuard { max_abs, limit: SMALLNESS_LIMIT });
        }
        Ok(Self { values, analytic })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `dV(s) / E_F`, exact for closed-form fields, otherwise interpolated.
    pub fn at(&self, s: f64) -> f64 {
        if let Some(f) = &self.analytic {
            return f(s);
        }
        let h = 1.0 / (GRID_POINTS - 1) as f64;
        let x = (s / h).clamp(0.0, (GRID_POINTS - 1) as f64);
        let i = (x.floor() as usize).min(GRID_POINTS - 2);
        let frac = x - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    /// `integral_0^1 dV(s) s^2 (1 - s^2)^(1/2) ds`.
    fn weighted_integral(&self) -> Result<f64> {
        match &self.analytic {
            Some(f) => {
                // s = sin(theta) removes the square-root edge.
                let integrand = |th: f64| {
                    let (s, c) = th.sin_cos();
                    f(s) * s * s * c * c
                };
                Ok(integrate(integrand, 0.0, PI / 2.0, Tolerance::new(1e-15, 1e-14))?.value)
            }
            None => Ok(piecewise_linear_weighted(&self.values)),
        }
    }
}

fn grid() -> Vec<f64> {
    linspace(0.0, 1.0, GRID_POINTS)
}

fn interpolate_table(points: &[(f64, f64)], s: f64) -> f64 {
    let j = points.partition_point(|p| p.0 <= s);
    if j == 0 {
        return points[0].1;
    }
    if j == points.len() {
        return points[j - 1].1;
    }
    let (x0, y0) = points[j - 1];
    let (x1, y1) = points[j];
    y0 + (y1 - y0) * (s - x0) / (x1 - x0)
}

/// Antiderivative of `s^2 (1 - s^2)^(1/2)` vanishing at 0.
fn weight_moment0(s: f64) -> f64 {
    let c = (1.0 - s * s).max(0.0).sqrt();
    (s.asin() - s * c * (1.0 - 2.0 * s * s)) / 8.0
}

/// Antiderivative of `s^3 (1 - s^2)^(1/2)` vanishing at 0.
fn weight_moment1(s: f64) -> f64 {
    let u = (1.0 - s * s).max(0.0);
    let g = |u: f64| u.powf(1.5) / 3.0 - u.powf(2.5) / 5.0;
    g(1.0) - g(u)
}

/// Exact weighted integral of the linear interpolant through `values`.
fn piecewise_linear_weighted(values: &[f64]) -> f64 {
    let n = values.len();
    let h = 1.0 / (n - 1) as f64;
    let mut sum = 0.0;
    let mut w0_prev = 0.0;
    let mut w1_prev = 0.0;
    for i in 0..n - 1 {
        let s0 = i as f64 * h;
        let s1 = if i + 1 == n - 1 { 1.0 } else { (i + 1) as f64 * h };
        let w0 = weight_moment0(s1);
        let w1 = weight_moment1(s1);
        let slope = (values[i + 1] - values[i]) / (s1 - s0);
        let intercept = values[i] - slope * s0;
        sum += intercept * (w0 - w0_prev) + slope * (w1 - w1_prev);
        w0_prev = w0;
        w1_prev = w1;
    }
    sum
}

/// Linear response of the cloud.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseResult {
    /// `dE_F / E_F`.
    pub delta_e_fermi: f64,
    /// `(s, dn R_F^3 / (N lambda))` on the uniform grid.
    pub delta_n: Vec<(f64, f64)>,
}

impl ResponseResult {
    pub fn curve(&self) -> Result<UniversalCurve> {
        UniversalCurve::new(Label::S, Label::Density, self.delta_n.clone())
    }
}

/// `dE_F / E_F` keeping the particle number fixed.
pub fn fermi_energy_shift(field: &PerturbationField) -> Result<f64> {
    Ok(field.weighted_integral()? / WEIGHT_NORM)
}

/// Scaled density change at reduced radius `s` for a given Fermi-energy shift.
pub fn density_change(field: &PerturbationField, delta_e_fermi: f64, s: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    RESPONSE_PREFACTOR * (1.0 - s * s).sqrt() * (delta_e_fermi - field.at(s))
}

/// Fermi-energy shift and density change for `field`.
pub fn density_response(field: &PerturbationField) -> Result<ResponseResult> {
    let delta_e_fermi = fermi_energy_shift(field)?;
    let delta_n = grid().into_iter().map(|s| (s, density_change(field, delta_e_fermi, s))).collect();
    Ok(ResponseResult { delta_e_fermi, delta_n })
}

/// One-shot mean-field correction `dV = u_int * n_0(s)` with the scaled
/// zero-temperature density `n_0`. `u_int = U N lambda / (E_F R_F^3)`.
pub fn mean_field_correction(u_int: f64) -> Result<ResponseResult> {
    if !u_int.is_finite() {
        return domain("interaction strength must be finite");
    }
    let field = PerturbationField::from_fn(move |s| u_int * zero_t_density(s))?;
    density_response(&field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antiderivatives_hit_beta_integrals() {
        assert!((weight_moment0(1.0) - PI / 16.0).abs() < 1e-15);
        assert!((weight_moment1(1.0) - 2.0 / 15.0).abs() < 1e-15);
        assert_eq!(weight_moment0(0.0), 0.0);
        assert!(weight_moment1(0.0).abs() < 1e-16);
    }

    #[test]
    fn constant_shift_moves_fermi_energy_rigidly() {
        for field in [
            PerturbationField::from_fn(|_| 0.03).unwrap(),
            PerturbationField::from_grid(vec![0.03; GRID_POINTS]).unwrap(),
        ] {
            let r = density_response(&field).unwrap();
            assert!((r.delta_e_fermi - 0.03).abs() < 1e-14);
            assert!(r.delta_n.iter().all(|(_, v)| v.abs() < 1e-14));
        }
    }

    #[test]
    fn guard_and_coverage() {
        assert!(matches!(PerturbationField::from_fn(|s| 0.2 * s), Err(Error::SmallnessGuard { .. })));
        assert!(PerturbationField::from_table(&[(0.0, 0.0), (0.9, 0.01)]).is_err());
        assert!(PerturbationField::from_table(&[(0.1, 0.0), (1.0, 0.01)]).is_err());
        assert!(PerturbationField::from_grid(vec![0.0; 10]).is_err());
        assert!(PerturbationField::from_fn(|_| f64::NAN).is_err());
        assert!(mean_field_correction(1.0).is_err());
    }

    #[test]
    fn table_resampling_is_linear() {
        let field = PerturbationField::from_table(&[(0.0, 0.0), (0.5, 0.05), (1.0, 0.0)]).unwrap();
        assert!((field.at(0.25) - 0.025).abs() < 1e-15);
        assert!((field.at(0.75) - 0.025).abs() < 1e-12);
        assert_eq!(field.at(1.0), 0.0);
    }

    #[test]
    fn interpolated_and_closed_form_agree() {
        let eps = 1e-3;
        let exact = PerturbationField::from_fn(move |s| eps * s * s).unwrap();
        let sampled = PerturbationField::from_grid(exact.values().to_vec()).unwrap();
        let a = fermi_energy_shift(&exact).unwrap();
        let b = fermi_energy_shift(&sampled).unwrap();
        assert!((a - eps / 2.0).abs() < 1e-15);
        assert!((a - b).abs() < 1e-7 * eps);
    }
}
