//! Semiclassical (Thomas-Fermi) description of an ideal, spin-polarized Fermi
//! gas in a harmonic trap.
//!
//! Everything is computed in universal reduced variables: temperature
//! `t = k_B T / E_F`, chemical potential `m = mu / E_F`, radius
//! `s = rho / R_F` and wavenumber `q = |k| / K_F`. [`scales`] converts to and
//! from physical units.

pub mod bose;
pub mod curve;
pub mod discrete;
pub mod distributions;
pub mod error;
pub mod fermi_dirac;
pub mod perturbation;
pub mod quad;
pub mod scales;
pub mod thermo;

pub use curve::{Label, UniversalCurve};
pub use error::{Error, Result};
pub use fermi_dirac::{fd, fd_derivative, FdOrder, ReducedPotential};
pub use scales::{derive_scales, CharacteristicScales, ReducedTemperature, TrapSpec};
pub use thermo::{classical_mu, heat_capacity, internal_energy, solve_mu, sommerfeld_mu, thermo_curve, ThermoState};
