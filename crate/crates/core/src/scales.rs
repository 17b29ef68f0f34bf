//! Physical trap parameters and the characteristic scales that make the rest
//! of the crate dimensionless.
//!
//! All universal quantities are expressed in the reduced variables
//! `s = rho / R_F`, `q = |k| / K_F` and `t = k_B T / E_F`.

use serde::Serialize;

use crate::error::{domain, Result};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J / K.
pub const K_B: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_067e-27;
/// Mass of a lithium-6 atom, kg.
pub const LI6_MASS: f64 = 6.015_122_887 * AMU;

/// Trap and gas parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapSpec {
    /// Atomic mass, kg.
    pub mass: f64,
    /// Radial trap frequency, rad/s.
    pub omega_r: f64,
    /// Anisotropy `omega_z / omega_r`.
    pub lambda: f64,
    pub n_particles: u64,
}

impl TrapSpec {
    pub fn new(mass: f64, omega_r: f64, lambda: f64, n_particles: u64) -> Result<Self> {
        let spec = Self { mass, omega_r, lambda, n_particles };
        spec.validate()?;
        Ok(spec)
    }

    /// Spin-polarized lithium-6 in a TOP trap: `omega_r = 3800 / s`,
    /// `lambda = sqrt(8)`, `N = 1e5`.
    pub fn li6_top() -> Self {
        Self { mass: LI6_MASS, omega_r: 3800.0, lambda: 8f64.sqrt(), n_particles: 100_000 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                domain(format!("{name} must be positive and finite, got {v}"))
            }
        };
        positive("mass", self.mass)?;
        positive("omega_r", self.omega_r)?;
        positive("lambda", self.lambda)?;
        if self.n_particles == 0 {
            return domain("particle number must be at least 1");
        }
        Ok(())
    }

    /// `(x^2 + y^2 + lambda^2 z^2)^(1/2)`.
    pub fn effective_distance(&self, x: f64, y: f64, z: f64) -> f64 {
        effective_distance(self.lambda, x, y, z)
    }
}

pub fn effective_distance(lambda: f64, x: f64, y: f64, z: f64) -> f64 {
    (x * x + y * y + lambda * lambda * z * z).sqrt()
}

/// Energy, length and wavenumber scales of the degenerate cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicScales {
    /// Fermi energy `hbar omega_r (6 lambda N)^(1/3)`, J.
    pub e_fermi: f64,
    /// Fermi temperature, K.
    pub t_fermi: f64,
    /// Classical excursion at the Fermi energy, m.
    pub r_fermi: f64,
    /// Free-particle wavenumber at the Fermi energy, 1/m.
    pub k_fermi: f64,
    /// Radial oscillator length `(hbar / M omega_r)^(1/2)`, m.
    pub sigma_r: f64,
    /// `hbar omega_r`, J; zero-point energy is not included anywhere.
    pub level_spacing: f64,
    pub lambda: f64,
    pub n_particles: u64,
}

/// Derives the characteristic scales of a trapped gas.
pub fn derive_scales(spec: &TrapSpec) -> Result<CharacteristicScales> {
    spec.validate()?;
    let n_lambda = spec.n_particles as f64 * spec.lambda;
    let level_spacing = HBAR * spec.omega_r;
    let e_fermi = level_spacing * (6.0 * n_lambda).cbrt();
    let sigma_r = (HBAR / (spec.mass * spec.omega_r)).sqrt();
    let r_fermi = (2.0 * e_fermi / (spec.mass * spec.omega_r * spec.omega_r)).sqrt();
    let k_fermi = (2.0 * spec.mass * e_fermi).sqrt() / HBAR;
    Ok(CharacteristicScales {
        e_fermi,
        t_fermi: e_fermi / K_B,
        r_fermi,
        k_fermi,
        sigma_r,
        level_spacing,
        lambda: spec.lambda,
        n_particles: spec.n_particles,
    })
}

impl CharacteristicScales {
    /// `(48 N lambda)^(1/6)`, equal to both `R_F / sigma_r` and `K_F sigma_r`.
    pub fn size_ratio(&self) -> f64 {
        (48.0 * self.n_particles as f64 * self.lambda).powf(1.0 / 6.0)
    }

    /// `E_F / (hbar omega_r) = (6 lambda N)^(1/3)`.
    pub fn fermi_levels(&self) -> f64 {
        self.e_fermi / self.level_spacing
    }
}

/// `k_B T / E_F`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct ReducedTemperature(f64);

impl ReducedTemperature {
    pub const ZERO: ReducedTemperature = ReducedTemperature(0.0);

    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return domain(format!("reduced temperature must be finite and non-negative, got {t}"));
        }
        Ok(Self(t))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `k_B T / (hbar omega_r)` for the given cloud.
    pub fn in_level_spacings(self, scales: &CharacteristicScales) -> f64 {
        self.0 * scales.fermi_levels()
    }

    /// False when `k_B T < hbar omega_r`, where the discrete level structure
    /// is no longer washed out.
    pub fn continuum_reliable(self, scales: &CharacteristicScales) -> bool {
        self.in_level_spacings(scales) >= 1.0
    }
}

/// Reduced coordinates `(s, q, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledCoordinates {
    pub s: f64,
    pub q: f64,
    pub t: f64,
}

/// Physical effective distance (m), wavenumber (1/m) and temperature (K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalCoordinates {
    pub rho: f64,
    pub wavenumber: f64,
    pub temperature: f64,
}

/// Converts physical coordinates to the reduced triple.
pub fn to_scaled(spec: &TrapSpec, physical: PhysicalCoordinates) -> Result<ScaledCoordinates> {
    let scales = derive_scales(spec)?;
    let PhysicalCoordinates { rho, wavenumber, temperature } = physical;
    if !(temperature.is_finite() && temperature >= 0.0) {
        return domain(format!("temperature must be non-negative, got {temperature}"));
    }
    if !(rho.is_finite() && rho >= 0.0 && wavenumber.is_finite() && wavenumber >= 0.0) {
        return domain("distance and wavenumber must be non-negative");
    }
    Ok(ScaledCoordinates {
        s: rho / scales.r_fermi,
        q: wavenumber / scales.k_fermi,
        t: K_B * temperature / scales.e_fermi,
    })
}

/// Inverse of [`to_scaled`].
pub fn from_scaled(spec: &TrapSpec, scaled: ScaledCoordinates) -> Result<PhysicalCoordinates> {
    let scales = derive_scales(spec)?;
    let ScaledCoordinates { s, q, t } = scaled;
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("reduced temperature must be non-negative, got {t}"));
    }
    if !(s.is_finite() && s >= 0.0 && q.is_finite() && q >= 0.0) {
        return domain("reduced distance and wavenumber must be non-negative");
    }
    Ok(PhysicalCoordinates {
        rho: s * scales.r_fermi,
        wavenumber: q * scales.k_fermi,
        temperature: t * scales.e_fermi / K_B,
    })
}
