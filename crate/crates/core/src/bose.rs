//! Thomas-Fermi profile of a repulsive Bose condensate in the same trap, and
//! the heuristic Pauli pseudopotential that lets it mimic the Fermi cloud.
//!
//! Bose quantities use trap units `hbar = M = omega_r = 1`, so lengths are in
//! units of `sigma_r`, energies in `hbar omega_r`, and the contact coupling is
//! `U = 4 pi a`. In SI units the profile reads
//! `n_B = (M omega_r^2 / 2U)(R_B^2 - rho^2)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::scales::CharacteristicScales;

/// Below this value of `U N / lambda` the Thomas-Fermi profile is suspect.
pub const THOMAS_FERMI_THRESHOLD: f64 = 10.0;

/// Repulsive Bose gas in trap units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoseParams {
    /// Contact coupling `U = 4 pi a`.
    pub u_bose: f64,
    pub n_particles: f64,
    pub lambda: f64,
}

impl BoseParams {
    pub fn new(u_bose: f64, n_particles: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("coupling", u_bose), ("particle number", n_particles), ("lambda", lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(Self { u_bose, n_particles, lambda })
    }

    /// From the s-wave scattering length in units of `sigma_r`.
    pub fn from_scattering_length(a: f64, n_particles: f64, lambda: f64) -> Result<Self> {
        Self::new(4.0 * PI * a, n_particles, lambda)
    }

    pub fn scattering_length(&self) -> f64 {
        self.u_bose / (4.0 * PI)
    }

    /// `U N / (hbar omega_r lambda sigma_r^3)`.
    pub fn thomas_fermi_parameter(&self) -> f64 {
        self.u_bose * self.n_particles / self.lambda
    }

    pub fn in_thomas_fermi_regime(&self) -> bool {
        self.thomas_fermi_parameter() >= THOMAS_FERMI_THRESHOLD
    }

    /// Condensate radius `R_B = (15 lambda U N / 4 pi)^(1/5)`.
    pub fn radius(&self) -> f64 {
        (15.0 * self.lambda * self.u_bose * self.n_particles / (4.0 * PI)).powf(0.2)
    }

    /// Chemical potential `R_B^2 / 2`.
    pub fn chemical_potential(&self) -> f64 {
        0.5 * self.radius().powi(2)
    }

    /// Typical condensate wavenumber `~ 1 / R_B`.
    pub fn momentum_width(&self) -> f64 {
        1.0 / self.radius()
    }
}

pub fn bose_radius(p: &BoseParams) -> f64 {
    p.radius()
}

/// Density `(R_B^2 / 2U)(1 - s_b^2)` at `s_b = rho / R_B`, zero outside.
pub fn bose_profile(s_b: f64, p: &BoseParams) -> Result<f64> {
    if !(s_b.is_finite() && s_b >= 0.0) {
        return domain(format!("scaled radius must be non-negative, got {s_b}"));
    }
    if s_b >= 1.0 {
        return Ok(0.0);
    }
    Ok(p.radius().powi(2) / (2.0 * p.u_bose) * (1.0 - s_b * s_b))
}

/// Effective interaction mimicking Pauli exclusion, order of magnitude only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliPseudopotential {
    /// `E_F R_F^3 / N`, J m^3.
    pub u_eff: f64,
    /// `1 / K_F`, m.
    pub a_eff: f64,
    /// `K_F a_eff`; unity, so the gas is never dilute for this interaction.
    pub kf_a_eff: f64,
}

pub fn pauli_pseudopotential(scales: &CharacteristicScales) -> PauliPseudopotential {
    let a_eff = 1.0 / scales.k_fermi;
    PauliPseudopotential {
        u_eff: scales.e_fermi * scales.r_fermi.powi(3) / scales.n_particles as f64,
        a_eff,
        kf_a_eff: scales.k_fermi * a_eff,
    }
}

impl PauliPseudopotential {
    /// `u_eff` in trap units `hbar omega_r sigma_r^3`.
    pub fn in_trap_units(&self, scales: &CharacteristicScales) -> f64 {
        self.u_eff / (scales.level_spacing * scales.sigma_r.powi(3))
    }
}

/// Side-by-side Fermi and Bose sizes in trap units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeComparison {
    pub r_fermi: f64,
    pub k_fermi: f64,
    pub e_fermi: f64,
    pub r_bose: f64,
    pub k_bose: f64,
    pub mu_bose: f64,
}

/// Fermi scales for `N` fermions against a condensate with coupling `u_bose`,
/// both in trap units.
pub fn compare_sizes(n_particles: f64, lambda: f64, u_bose: f64) -> Result<SizeComparison> {
    let bose = BoseParams::new(u_bose, n_particles, lambda)?;
    let size = (48.0 * n_particles * lambda).powf(1.0 / 6.0);
    Ok(SizeComparison {
        r_fermi: size,
        k_fermi: size,
        e_fermi: (6.0 * lambda * n_particles).cbrt(),
        r_bose: bose.radius(),
        k_bose: bose.momentum_width(),
        mu_bose: bose.chemical_potential(),
    })
}
