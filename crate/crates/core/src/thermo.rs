//! Reduced equation of state of the trapped gas.
//!
//! With the density of states `E^2 / (2 lambda (hbar omega_r)^3)` the particle
//! number constraint reduces to `6 t^3 f_3(m / t) = 1`, with `t = k_B T / E_F`
//! and `m = mu / E_F`. The energy per particle is `u = 18 t^4 f_4(m / t)` in
//! units of `E_F`, and the heat capacity at fixed `N` and fixed trap
//! frequencies follows by implicit differentiation,
//! `c = 12 f_4 / f_3 - 9 f_3 / f_2`, in units of `k_B`.
//!
//! None of these depend on `N`, `lambda` or `omega_r`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Label, UniversalCurve};
use crate::error::{domain, Error, Result};
use crate::fermi_dirac::{fd_value, FdOrder};

const BISECTION_WIDTH: f64 = 1e-6;
const RESIDUAL_LIMIT: f64 = 1e-12;
/// Below this temperature the leading Sommerfeld terms are exact in double
/// precision; the neglected terms are `O(t^4)`.
const DEGENERATE_LIMIT: f64 = 1e-8;

/// Solved thermodynamic state at one reduced temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoState {
    /// `k_B T / E_F`.
    pub t: f64,
    /// `mu / E_F`.
    pub m: f64,
    /// `U / (N E_F)`.
    pub u: f64,
    /// `C / (N k_B)`.
    pub c: f64,
}

impl ThermoState {
    pub fn at(t: f64) -> Result<Self> {
        check_temperature(t)?;
        if t == 0.0 {
            return Ok(Self { t, m: 1.0, u: 0.75, c: 0.0 });
        }
        if t < DEGENERATE_LIMIT {
            let pi2 = PI * PI;
            return Ok(Self { t, m: sommerfeld_mu(t), u: 0.75 + 0.5 * pi2 * t * t, c: pi2 * t });
        }
        let m = solve_mu(t)?;
        let eta = m / t;
        Ok(Self { t, m, u: energy_at(t, eta), c: heat_capacity_at(eta) })
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("reduced temperature must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// `6 t^3 f_3(m / t) - 1`.
pub fn constraint_residual(t: f64, m: f64) -> f64 {
    6.0 * t.powi(3) * fd_value(FdOrder::Three, m / t) - 1.0
}

/// Reduced chemical potential `mu / E_F` at reduced temperature `t`.
pub fn solve_mu(t: f64) -> Result<f64> {
    check_temperature(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    if t < DEGENERATE_LIMIT {
        return Ok(sommerfeld_mu(t));
    }
    let residual = |m: f64| constraint_residual(t, m);
    // f_3(eta) < e^eta bounds the root from below; f_3(eta) > eta^3 / 6 from above.
    // The absolute offset keeps the upper bracket strict when 5t is below one ulp.
    let mut lo = -t * (6.0 * t.powi(3)).ln() - 5.0 * t;
    let mut hi = 1.0 + 5.0 * t + 1e-6;
    if !(residual(lo) < 0.0 && residual(hi) > 0.0) {
        return Err(Error::Numerical(format!("chemical potential not bracketed at t = {t}")));
    }
    while hi - lo > BISECTION_WIDTH * (1.0 + lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut m = 0.5 * (lo + hi);
    let mut r = residual(m);
    for _ in 0..50 {
        let slope = 6.0 * t * t * fd_value(FdOrder::Two, m / t);
        let next = (m - r / slope).clamp(lo, hi);
        let step = next - m;
        m = next;
        r = residual(m);
        if step.abs() <= 1e-15 * m.abs().max(1.0) || r == 0.0 {
            break;
        }
    }
    if r.abs() > RESIDUAL_LIMIT {
        return Err(Error::Numerical(format!("chemical potential residual {r:e} above {RESIDUAL_LIMIT:e} at t = {t}")));
    }
    Ok(m)
}

/// Low-temperature form `1 - (pi^2 / 3) t^2`.
pub fn sommerfeld_mu(t: f64) -> f64 {
    1.0 - PI * PI / 3.0 * t * t
}

/// Classical (Boltzmann) form `-t ln(6 t^3)`.
pub fn classical_mu(t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("classical chemical potential needs t > 0, got {t}"));
    }
    Ok(-t * (6.0 * t.powi(3)).ln())
}

/// Energy per particle `U / (N E_F)`.
pub fn internal_energy(t: f64) -> Result<f64> {
    Ok(ThermoState::at(t)?.u)
}

/// Heat capacity per particle `C / (N k_B)` at fixed `N` and trap frequencies.
pub fn heat_capacity(t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return domain(format!("heat capacity needs t > 0, got {t}"));
    }
    Ok(ThermoState::at(t)?.c)
}

fn energy_at(t: f64, eta: f64) -> f64 {
    18.0 * t.powi(4) * fd_value(FdOrder::Four, eta)
}

fn heat_capacity_at(eta: f64) -> f64 {
    let f2 = fd_value(FdOrder::Two, eta);
    let f3 = fd_value(FdOrder::Three, eta);
    if eta < 30.0 {
        let f4 = fd_value(FdOrder::Four, eta);
        return 12.0 * f4 / f3 - 9.0 * f3 / f2;
    }
    // Deep in the degenerate regime the two terms cancel to O(1/eta^2).
    // Split each integral into its Sommerfeld polynomial and reflected tail
    // and cancel the polynomial part analytically:
    // 12 P4 P2 - 9 P3^2 = pi^2 eta^4 / 12 + pi^4 eta^2 / 30 + 7 pi^6 / 180.
    let pi2 = PI * PI;
    let e2 = eta * eta;
    let p2 = e2 / 2.0 + pi2 / 6.0;
    let p3 = eta * (e2 + pi2) / 6.0;
    let p4 = e2 * e2 / 24.0 + pi2 * e2 / 12.0 + 7.0 * pi2 * pi2 / 360.0;
    let r2 = -fd_value(FdOrder::Two, -eta);
    let r3 = fd_value(FdOrder::Three, -eta);
    let r4 = -fd_value(FdOrder::Four, -eta);
    let polynomial = pi2 * e2 * e2 / 12.0 + pi2 * pi2 * e2 / 30.0 + 7.0 * pi2.powi(3) / 180.0;
    let numerator = polynomial + 12.0 * (p4 * r2 + r4 * p2 + r4 * r2) - 9.0 * (2.0 * p3 * r3 + r3 * r3);
    numerator / (f3 * f2)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return domain("temperature grid is empty");
    }
    for &t in t_grid {
        check_temperature(t)?;
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("temperature grid must be strictly increasing");
    }
    Ok(())
}

/// Solves every grid point; points are independent and evaluated in parallel.
pub fn thermo_states(t_grid: &[f64]) -> Result<Vec<ThermoState>> {
    check_grid(t_grid)?;
    t_grid.par_iter().map(|&t| ThermoState::at(t)).collect()
}

/// Chemical-potential and heat-capacity curves `(m(t), c(t))`.
pub fn thermo_curve(t_grid: &[f64]) -> Result<(UniversalCurve, UniversalCurve)> {
    let states = thermo_states(t_grid)?;
    let mu = UniversalCurve::new(Label::T, Label::M, states.iter().map(|s| (s.t, s.m)).collect())?;
    let heat = UniversalCurve::new(Label::T, Label::C, states.iter().map(|s| (s.t, s.c)).collect())?;
    Ok((mu, heat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_temperature_state() {
        let s = ThermoState::at(0.0).unwrap();
        assert_eq!((s.m, s.u, s.c), (1.0, 0.75, 0.0));
        assert_eq!(solve_mu(0.0).unwrap(), 1.0);
    }

    #[test]
    fn vanishing_temperature() {
        for t in [1e-9, 1e-20, 1e-38, 1e-300] {
            assert_eq!(solve_mu(t).unwrap(), 1.0);
            assert!((heat_capacity(t).unwrap() / (PI * PI * t) - 1.0).abs() < 1e-15);
        }
        // the series branch joins the full solution
        let (below, above) = (ThermoState::at(0.999e-8).unwrap(), ThermoState::at(1.001e-8).unwrap());
        assert!((below.m - above.m).abs() < 1e-15);
        assert!((below.u - above.u).abs() < 1e-15);
        assert!((below.c / above.c - 0.999 / 1.001).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(solve_mu(-0.1).is_err());
        assert!(solve_mu(f64::NAN).is_err());
        assert!(classical_mu(0.0).is_err());
        assert!(heat_capacity(0.0).is_err());
        assert!(internal_energy(-1.0).is_err());
        assert!(thermo_curve(&[]).is_err());
        assert!(thermo_curve(&[0.5, 0.5]).is_err());
        assert!(thermo_curve(&[-0.5, 0.5]).is_err());
    }

    #[test]
    fn residual_is_tight() {
        for t in [1e-4, 0.01, 0.1, 0.3, 0.5, 0.55, 1.0, 3.0, 50.0, 1e3] {
            let m = solve_mu(t).unwrap();
            assert!(constraint_residual(t, m).abs() <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(sommerfeld_mu(0.0), 1.0);
        assert!((sommerfeld_mu(0.3) - (1.0 - PI * PI * 0.03)).abs() < 1e-15);
        assert!((classical_mu(1.0).unwrap() + 6f64.ln()).abs() < 1e-15);
        assert!(classical_mu(6f64.powf(-1.0 / 3.0)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn degenerate_heat_capacity_branches_agree() {
        // both forms are valid at eta = 30; the direct one loses ~4 digits
        let eta: f64 = 30.0;
        let direct = 12.0 * fd_value(FdOrder::Four, eta) / fd_value(FdOrder::Three, eta)
            - 9.0 * fd_value(FdOrder::Three, eta) / fd_value(FdOrder::Two, eta);
        assert!((heat_capacity_at(eta) - direct).abs() < 1e-10);
        assert!(heat_capacity_at(1e9) > 0.0);
    }

    #[test]
    fn curve_is_ordered() {
        let (mu, heat) = thermo_curve(&[0.0]).unwrap();
        assert_eq!(mu.samples(), &[(0.0, 1.0)]);
        assert_eq!(heat.samples(), &[(0.0, 0.0)]);
        let (mu, _) = thermo_curve(&[0.25, 0.5, 0.75, 1.0]).unwrap();
        assert!(mu.samples().windows(2).all(|w| w[1].1 < w[0].1));
    }
}
