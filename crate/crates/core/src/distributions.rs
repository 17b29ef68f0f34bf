//! Universal spatial and momentum distributions.
//!
//! Densities are reported in scaled form: `n(r) R_F^3 / (N lambda)` as a
//! function of `s = rho / R_F`, and `n(k) K_F^3 / N` as a function of
//! `q = |k| / K_F`. Integrating the phase-space occupancy over momentum gives
//! `(6 / pi^(3/2)) t^(3/2) f_(3/2)((m - s^2) / t)`, which reduces to
//! `(8 / pi^2)(1 - s^2)^(3/2)` at `t = 0`. Position and momentum enter the
//! Hamiltonian symmetrically, so both marginals are the same function.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{linspace, Label, UniversalCurve};
use crate::error::{domain, Result};
use crate::fermi_dirac::{fd_value, FdOrder};
use crate::quad::{integrate_pieces, Tolerance};
use crate::scales::{derive_scales, TrapSpec, K_B};
use crate::thermo::{solve_mu, ThermoState};

/// Central value of the zero-temperature profile, `8 / pi^2`.
pub const CENTRAL_DENSITY_T0: f64 = 8.0 / (PI * PI);

const MOMENT_TOL: Tolerance = Tolerance::new(1e-13, 1e-13);
const OCCUPANCY_CUTOFF: f64 = 40.0;

/// Reduced phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledPoint {
    pub s: f64,
    pub q: f64,
}

impl ScaledPoint {
    pub fn new(s: f64, q: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0 && q.is_finite() && q >= 0.0) {
            return domain(format!("scaled point needs s, q >= 0, got ({s}, {q})"));
        }
        Ok(Self { s, q })
    }
}

fn check_radius(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return domain(format!("scaled radius must be finite and non-negative, got {s}"));
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("reduced temperature must be finite and non-negative, got {t}"));
    }
    Ok(())
}

/// Fermi factor at scaled energy `s^2 + q^2`, without the `(2 pi)^-3`
/// phase-space weight. At `t = 0` this is the step `Theta(m - s^2 - q^2)`,
/// taken as 1/2 on the surface itself.
pub fn phase_space_occupancy(point: ScaledPoint, t: f64, m: f64) -> Result<f64> {
    check_temperature(t)?;
    if !m.is_finite() {
        return domain("chemical potential must be finite");
    }
    let excess = point.s * point.s + point.q * point.q - m;
    if t == 0.0 {
        return Ok(match excess.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Less) => 1.0,
            Some(std::cmp::Ordering::Greater) => 0.0,
            _ => 0.5,
        });
    }
    let x = excess / t;
    Ok(if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    })
}

/// `(8 / pi^2)(1 - s^2)^(3/2)` inside the cloud, zero outside.
pub fn zero_t_density(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        CENTRAL_DENSITY_T0 * (1.0 - s * s).powf(1.5)
    }
}

/// Classical (Boltzmann) profile `exp(-s^2 / t) / (pi t)^(3/2)` with the same
/// normalization as the quantum profiles.
pub fn boltzmann_density(s: f64, t: f64) -> f64 {
    (-s * s / t).exp() / (PI * t).powf(1.5)
}

/// Universal profile at one reduced temperature, with the chemical potential
/// solved once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityProfile {
    t: f64,
    m: f64,
}

impl DensityProfile {
    pub fn new(t: f64) -> Result<Self> {
        check_temperature(t)?;
        Ok(Self { t, m: solve_mu(t)? })
    }

    pub fn temperature(&self) -> f64 {
        self.t
    }

    pub fn chemical_potential(&self) -> f64 {
        self.m
    }

    /// Scaled density at reduced radius (or wavenumber) `x >= 0`.
    pub fn at(&self, x: f64) -> f64 {
        if self.t == 0.0 {
            return zero_t_density(x);
        }
        let prefactor = 6.0 / PI.powf(1.5) * self.t.powf(1.5);
        prefactor * fd_value(FdOrder::ThreeHalves, (self.m - x * x) / self.t)
    }

    /// Radius beyond which the occupancy is below `e^-40`.
    pub fn outer_radius(&self) -> f64 {
        (self.m + OCCUPANCY_CUTOFF * self.t).max(1.0).sqrt()
    }

    fn breakpoints(&self, upper: f64) -> Vec<f64> {
        let mut points = vec![0.0];
        if self.m > 0.0 && self.m.sqrt() < upper {
            points.push(self.m.sqrt());
        }
        points.push(upper);
        points
    }

    /// `integral_0^upper x^(2 + power) * 4 pi * density dx`.
    fn radial_moment(&self, power: i32, upper: f64) -> Result<f64> {
        let integrand = |x: f64| 4.0 * PI * x.powi(2 + power) * self.at(x);
        if self.t == 0.0 {
            // (1 - x^2)^(3/2) has an endpoint kink; integrate in x = sin(theta).
            let top = upper.min(1.0).asin();
            let est = integrate_pieces(|th: f64| integrand(th.sin()) * th.cos(), &[0.0, top], MOMENT_TOL)?;
            return Ok(est.value);
        }
        Ok(integrate_pieces(integrand, &self.breakpoints(upper), MOMENT_TOL)?.value)
    }

    /// `integral 4 pi x^2 density dx` over the whole profile.
    pub fn normalization(&self) -> Result<f64> {
        self.radial_moment(0, self.outer_radius())
    }

    /// Fraction of particles inside reduced radius `x`.
    pub fn enclosed_fraction(&self, x: f64) -> Result<f64> {
        check_radius(x)?;
        self.radial_moment(0, x.min(self.outer_radius()))
    }

    /// `<s^2>` by quadrature of the profile.
    pub fn mean_square(&self) -> Result<f64> {
        self.radial_moment(2, self.outer_radius())
    }

    /// Smallest radius enclosing `fraction` of the particles.
    pub fn coverage_radius(&self, fraction: f64) -> Result<f64> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return domain(format!("coverage fraction must lie in (0, 1), got {fraction}"));
        }
        let (mut lo, mut hi) = (0.0, self.outer_radius());
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.enclosed_fraction(mid)? < fraction {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-10 {
                break;
            }
        }
        Ok(hi)
    }
}

/// Scaled spatial density `n R_F^3 / (N lambda)` at reduced radius `s`.
pub fn density(s: f64, t: f64) -> Result<f64> {
    check_radius(s)?;
    Ok(DensityProfile::new(t)?.at(s))
}

/// Scaled momentum density `n K_F^3 / N` at reduced wavenumber `q`.
///
/// Identical to [`density`]: the kinetic and potential energies enter the
/// Hamiltonian with the same quadratic form in reduced units.
pub fn momentum_density(q: f64, t: f64) -> Result<f64> {
    density(q, t)
}

/// Mean-square cloud size `<rho^2> / R_F^2`.
pub fn mean_square_size(t: f64) -> Result<f64> {
    check_temperature(t)?;
    if t == 0.0 {
        return Ok(0.375);
    }
    DensityProfile::new(t)?.mean_square()
}

/// Physical number density (1/m^3) at position `(x, y, z)` and temperature
/// `temperature` (K).
pub fn physical_density(spec: &TrapSpec, x: f64, y: f64, z: f64, temperature: f64) -> Result<f64> {
    let scales = derive_scales(spec)?;
    if !(temperature.is_finite() && temperature >= 0.0) {
        return domain(format!("temperature must be non-negative, got {temperature}"));
    }
    let rho = spec.effective_distance(x, y, z);
    let t = K_B * temperature / scales.e_fermi;
    let prefactor = spec.n_particles as f64 * spec.lambda / scales.r_fermi.powi(3);
    Ok(prefactor * density(rho / scales.r_fermi, t)?)
}

/// Width `s_edge - sqrt(m)` of the thermal tail beyond the local Fermi
/// surface, where `s_edge` is the radius at which the density has fallen to
/// `ratio` times its value at `s = sqrt(m)`. Scales linearly with `t` at low
/// temperature.
pub fn atmosphere_thickness(t: f64, ratio: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("atmosphere thickness needs t > 0, got {t}"));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return domain(format!("density ratio must lie in (0, 1), got {ratio}"));
    }
    let m = solve_mu(t)?;
    if m <= 0.0 {
        return domain("no degenerate core: chemical potential is not positive");
    }
    // density(s) / density(sqrt m) = f_3/2(-x) / f_3/2(0) with x = (s^2 - m) / t
    let surface = fd_value(FdOrder::ThreeHalves, 0.0);
    let (mut lo, mut hi) = (0.0, 60.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fd_value(FdOrder::ThreeHalves, -mid) / surface > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((m + x * t).sqrt() - m.sqrt())
}

/// One sampled profile at reduced temperature `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub t: f64,
    pub curve: UniversalCurve,
}

/// Which marginal a profile represents; only the abscissa label differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marginal {
    Space,
    Momentum,
}

/// Samples the universal profile at each temperature on `[0, s_max]`, where
/// `s_max` is at least `min_extent` and encloses at least 99.9% of the
/// particles.
pub fn profile_curves(
    t_list: &[f64],
    n_samples: usize,
    min_extent: f64,
    marginal: Marginal,
) -> Result<Vec<ProfileCurve>> {
    if t_list.is_empty() {
        return domain("temperature list is empty");
    }
    if n_samples < 2 {
        return domain("profiles need at least two samples");
    }
    if !(min_extent.is_finite() && min_extent > 0.0) {
        return domain("profile extent must be positive");
    }
    for &t in t_list {
        check_temperature(t)?;
    }
    let x_label = match marginal {
        Marginal::Space => Label::S,
        Marginal::Momentum => Label::Q,
    };
    t_list
        .par_iter()
        .map(|&t| {
            let profile = DensityProfile::new(t)?;
            let extent = if t == 0.0 { min_extent.max(1.0) } else { min_extent.max(profile.coverage_radius(0.999)?) };
            let samples = linspace(0.0, extent, n_samples).into_iter().map(|x| (x, profile.at(x))).collect();
            Ok(ProfileCurve { t, curve: UniversalCurve::new(x_label, Label::Density, samples)? })
        })
        .collect()
}

/// Mean-square size against temperature.
pub fn msd_curve(t_grid: &[f64]) -> Result<UniversalCurve> {
    if t_grid.is_empty() {
        return domain("temperature grid is empty");
    }
    let values: Vec<f64> = t_grid.par_iter().map(|&t| mean_square_size(t)).collect::<Result<_>>()?;
    UniversalCurve::new(Label::T, Label::Msd, t_grid.iter().copied().zip(values).collect())
}

/// `u(t) / 2`; equals [`mean_square_size`] by the virial theorem.
pub fn virial_mean_square(t: f64) -> Result<f64> {
    Ok(0.5 * ThermoState::at(t)?.u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupancy_limits() {
        let p = |s, q| ScaledPoint::new(s, q).unwrap();
        assert_eq!(phase_space_occupancy(p(0.0, 0.0), 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(phase_space_occupancy(p(1.0, 0.5), 0.0, 1.0).unwrap(), 0.0);
        for t in [0.01, 0.3, 2.0] {
            let v = phase_space_occupancy(p(0.6, 0.8), t, 1.0).unwrap();
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert!(ScaledPoint::new(-1.0, 0.0).is_err());
        assert!(phase_space_occupancy(p(0.0, 0.0), -1.0, 1.0).is_err());
    }

    #[test]
    fn zero_temperature_closed_form() {
        assert!((zero_t_density(0.0) - 0.810_569_469_138_702).abs() < 1e-14);
        assert_eq!(zero_t_density(1.0), 0.0);
        assert_eq!(zero_t_density(1.7), 0.0);
        let expected = CENTRAL_DENSITY_T0 * 0.75f64.powf(1.5);
        assert!((zero_t_density(0.5) - expected).abs() < 1e-15);
        assert!((expected - 0.52648).abs() < 1e-5);
        for s in [0.0, 0.3, 0.99, 1.2] {
            assert_eq!(density(s, 0.0).unwrap(), zero_t_density(s));
        }
    }

    #[test]
    fn momentum_matches_space() {
        for (x, t) in [(0.0, 0.0), (0.4, 0.1), (1.1, 0.5), (2.0, 2.0)] {
            assert_eq!(momentum_density(x, t).unwrap(), density(x, t).unwrap());
        }
        assert_eq!(momentum_density(1.2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn profile_extent_covers_cloud() {
        let curves = profile_curves(&[0.0, 1.0], 50, 1.5, Marginal::Space).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0].curve.samples().last().unwrap().0, 1.5);
        let hot = &curves[1].curve;
        let extent = hot.samples().last().unwrap().0;
        assert!(extent > 1.5);
        let frac = DensityProfile::new(1.0).unwrap().enclosed_fraction(extent).unwrap();
        assert!(frac >= 0.999 - 1e-9, "{frac}");
        assert!(profile_curves(&[], 10, 1.5, Marginal::Space).is_err());
        let q = profile_curves(&[0.5], 10, 1.5, Marginal::Momentum).unwrap();
        assert_eq!(q[0].curve.x_label(), Label::Q);
    }

    #[test]
    fn atmosphere_errors() {
        assert!(atmosphere_thickness(0.0, 0.1).is_err());
        assert!(atmosphere_thickness(0.1, 1.5).is_err());
        assert!(atmosphere_thickness(2.0, 0.1).is_err());
    }
}
