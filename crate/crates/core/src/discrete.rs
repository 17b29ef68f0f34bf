//! Exact reference sums over the discrete oscillator spectrum
//! `hbar omega_r (n_x + n_y + lambda n_z)` (zero-point energy suppressed),
//! used to check the continuum and semiclassical treatments.
//!
//! Energies are in units of `hbar omega_r`, lengths in units of `sigma_r`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Upper bound on enumerated states.
pub const MAX_STATES: u64 = 20_000_000;
/// Enumerated states must exceed the particle number by this factor.
pub const SAFETY_FACTOR: u64 = 2;
/// Minimum distance, in units of `k_B T`, between the chemical potential and
/// the spectrum cutoff.
const THERMAL_MARGIN: f64 = 36.0;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// A degenerate level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: u64,
}

/// All levels up to a cutoff energy, sorted by energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteSpectrum {
    pub lambda: f64,
    pub cutoff: f64,
    pub levels: Vec<Level>,
}

/// Enumerates every level with energy `<= cutoff`.
pub fn build_spectrum(lambda: f64, cutoff: f64) -> Result<DiscreteSpectrum> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    if !(cutoff.is_finite() && cutoff >= 0.0) {
        return domain(format!("cutoff must be non-negative, got {cutoff}"));
    }
    let axial_max = (cutoff / lambda).floor() as u64;
    let mut states: u64 = 0;
    for n_z in 0..=axial_max {
        let planar = (cutoff - lambda * n_z as f64).floor() as u64;
        states = states.saturating_add((planar + 1) * (planar + 2) / 2);
        if states > MAX_STATES {
            return Err(Error::TooManyStates { limit: MAX_STATES });
        }
    }

    let mut raw = Vec::new();
    for n_z in 0..=axial_max {
        let axial = lambda * n_z as f64;
        let planar = (cutoff - axial).floor() as u64;
        for p in 0..=planar {
            // n_x + n_y = p has p + 1 solutions
            raw.push(Level { energy: p as f64 + axial, degeneracy: p + 1 });
        }
    }
    raw.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    let mut levels: Vec<Level> = Vec::with_capacity(raw.len());
    for level in raw {
        match levels.last_mut() {
            Some(last) if (level.energy - last.energy).abs() <= 1e-9 * level.energy.max(1.0) => {
                last.degeneracy += level.degeneracy;
            }
            _ => levels.push(level),
        }
    }
    Ok(DiscreteSpectrum { lambda, cutoff, levels })
}

fn fermi_factor(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

impl DiscreteSpectrum {
    pub fn total_states(&self) -> u64 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    /// Number of states with energy `<= energy`.
    pub fn states_below(&self, energy: f64) -> u64 {
        self.levels.iter().take_while(|l| l.energy <= energy).map(|l| l.degeneracy).sum()
    }

    /// Zero-point energy `(2 + lambda) / 2` removed from every level.
    pub fn zero_point(&self) -> f64 {
        0.5 * (2.0 + self.lambda)
    }

    /// Mean occupation summed over levels at chemical potential `mu`.
    pub fn occupation(&self, mu: f64, t_abs: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for l in &self.levels {
            acc.add(l.degeneracy as f64 * fermi_factor((l.energy - mu) / t_abs));
        }
        acc.value()
    }

    fn occupation_slope(&self, mu: f64, t_abs: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for l in &self.levels {
            let f = fermi_factor((l.energy - mu) / t_abs);
            acc.add(l.degeneracy as f64 * f * (1.0 - f));
        }
        acc.value() / t_abs
    }

    fn require_capacity(&self, n: u64) -> Result<()> {
        let required = n.saturating_mul(SAFETY_FACTOR);
        let available = self.total_states();
        if available < required {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, available, required });
        }
        Ok(())
    }

    /// Chemical potential (units of `hbar omega_r`, zero-point suppressed)
    /// holding `n` particles at temperature `t_abs = k_B T / (hbar omega_r)`.
    ///
    /// At `t_abs = 0` only closed shells are accepted, and the chemical
    /// potential is placed midway between the last filled and first empty
    /// level.
    pub fn chemical_potential(&self, n: u64, t_abs: f64) -> Result<f64> {
        if n == 0 {
            return domain("particle number must be at least 1");
        }
        if !(t_abs.is_finite() && t_abs >= 0.0) {
            return domain(format!("temperature must be non-negative, got {t_abs}"));
        }
        self.require_capacity(n)?;
        if t_abs == 0.0 {
            return self.closed_shell_mu(n);
        }

        let target = n as f64;
        let residual = |mu: f64| self.occupation(mu, t_abs) - target;
        let lowest = self.levels[0].energy;
        let mut lo = lowest - t_abs * ((self.total_states() as f64).ln() + 5.0);
        let mut filled = 0u64;
        let mut hi = self.cutoff;
        for l in &self.levels {
            filled += l.degeneracy;
            if filled >= SAFETY_FACTOR * n {
                hi = l.energy;
                break;
            }
        }
        hi += 40.0 * t_abs;
        if !(residual(lo) < 0.0 && residual(hi) > 0.0) {
            return Err(Error::Numerical(format!("chemical potential not bracketed for N = {n}")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-9 * t_abs {
                break;
            }
        }
        let mut mu = 0.5 * (lo + hi);
        for _ in 0..20 {
            let r = residual(mu);
            if r.abs() <= 1e-13 * target {
                break;
            }
            let next = mu - r / self.occupation_slope(mu, t_abs);
            if !(next > lo && next < hi) {
                break;
            }
            mu = next;
        }
        let r = residual(mu);
        if r.abs() > 1e-10 * target {
            return Err(Error::Numerical(format!("occupation residual {r:e} for N = {n}")));
        }
        if (self.cutoff - mu) / t_abs < THERMAL_MARGIN {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                available: self.total_states(),
                required: SAFETY_FACTOR * n,
            });
        }
        Ok(mu)
    }

    fn closed_shell_mu(&self, n: u64) -> Result<f64> {
        let mut filled = 0u64;
        for (i, l) in self.levels.iter().enumerate() {
            let below = filled;
            filled += l.degeneracy;
            if filled == n {
                let next = self.levels.get(i + 1).ok_or(Error::CutoffTooSmall {
                    cutoff: self.cutoff,
                    available: self.total_states(),
                    required: n + 1,
                })?;
                return Ok(0.5 * (l.energy + next.energy));
            }
            if filled > n {
                return Err(Error::PartialShell { n, below, above: filled });
            }
        }
        Err(Error::CutoffTooSmall { cutoff: self.cutoff, available: filled, required: n })
    }
}

/// Exact chemical potential (units of `hbar omega_r`, zero-point suppressed)
/// for `n` particles, enumerating a spectrum large enough for the occupied
/// range and thermal tail.
pub fn exact_mu(n: u64, lambda: f64, t_abs: f64) -> Result<f64> {
    if !(t_abs.is_finite() && t_abs >= 0.0) {
        return domain(format!("temperature must be non-negative, got {t_abs}"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    let capacity = (6.0 * lambda * (SAFETY_FACTOR * n) as f64).cbrt();
    let cutoff = capacity + 2.0 * (1.0 + lambda) + (THERMAL_MARGIN + 4.0) * t_abs;
    build_spectrum(lambda, cutoff)?.chemical_potential(n, t_abs)
}

/// Number of states in the isotropic shells `0..=n_max`.
pub fn closed_shell_count(n_max: u64) -> u64 {
    (n_max + 1) * (n_max + 2) * (n_max + 3) / 6
}

/// `|psi_k(0)|^2 sigma` for k = 0..=k_max: `(2m)! / (4^m (m!)^2 sqrt(pi))` at
/// even `k = 2m`, zero at odd `k`.
pub fn origin_probabilities(k_max: usize) -> Vec<f64> {
    let mut a = vec![0.0; k_max + 1];
    a[0] = 1.0 / PI.sqrt();
    for k in (2..=k_max).step_by(2) {
        a[k] = a[k - 2] * (k - 1) as f64 / k as f64;
    }
    a
}

/// `n(0) sigma^3` summed over all isotropic oscillator states in shells
/// `0..=n_max`.
pub fn central_density_for_shells(n_max: usize) -> f64 {
    let a = origin_probabilities(n_max);
    // pair[j] = sum over n_x + n_y = j
    let mut pair = vec![0.0; n_max + 1];
    for (j, slot) in pair.iter_mut().enumerate() {
        let mut acc = CompensatedSum::default();
        for nx in 0..=j {
            acc.add(a[nx] * a[j - nx]);
        }
        *slot = acc.value();
    }
    let mut prefix = vec![0.0; n_max + 1];
    let mut running = CompensatedSum::default();
    for (k, p) in prefix.iter_mut().enumerate() {
        running.add(a[k]);
        *p = running.value();
    }
    let mut total = CompensatedSum::default();
    for j in 0..=n_max {
        total.add(pair[j] * prefix[n_max - j]);
    }
    total.value()
}

/// Exact central density `n(0) sigma^3` of `n` isotropically trapped fermions
/// filling closed shells.
pub fn exact_central_density(n: u64) -> Result<f64> {
    let mut shell = 0u64;
    loop {
        let count = closed_shell_count(shell);
        if count == n {
            return Ok(central_density_for_shells(shell as usize));
        }
        if count > n {
            let below = if shell == 0 { 0 } else { closed_shell_count(shell - 1) };
            return Err(Error::PartialShell { n, below, above: count });
        }
        shell += 1;
    }
}

/// Semiclassical central density `(8 / pi^2) N lambda / R_F^3` in units of
/// `sigma_r^-3`, i.e. `(2 / (sqrt(3) pi^2)) sqrt(N lambda)`.
pub fn semiclassical_central_density(n: f64, lambda: f64) -> f64 {
    2.0 / (3f64.sqrt() * PI * PI) * (n * lambda).sqrt()
}

/// Local validity of the semiclassical description at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusValidity {
    /// Reduced effective radius `rho / R_F`.
    pub s: f64,
    /// `n sigma^3 / (rho / sigma)`; large where the approximation holds.
    pub margin: f64,
    /// Smallest cell holding many particles, `n^(-1/3)`.
    pub cell_min: f64,
    /// Largest cell over which the potential is flat compared with the local
    /// Fermi energy, `k_F^2 / (2 rho)`.
    pub cell_max: f64,
    /// Geometric mean of the two bounds when they are compatible.
    pub cell_scale: Option<f64>,
    pub valid: bool,
}

/// Validity of the semiclassical profile across a set of radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub n_particles: u64,
    pub lambda: f64,
    pub radii: Vec<RadiusValidity>,
    /// Breakdown-shell estimate `N^(-1/6)` in units of `sigma_r`.
    pub shell_thickness: f64,
    /// `1 / K_F = (48 N lambda)^(-1/6)` in units of `sigma_r`.
    pub inverse_k_fermi: f64,
}

fn size_ratio(n: f64, lambda: f64) -> f64 {
    (48.0 * n * lambda).powf(1.0 / 6.0)
}

/// `n(r) sigma^3` from the zero-temperature semiclassical profile.
fn local_density(n: f64, lambda: f64, s: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    8.0 / (PI * PI) * n * lambda / size_ratio(n, lambda).powi(3) * (1.0 - s * s).powf(1.5)
}

/// Margin `n sigma^3 / (rho / sigma)` at reduced radius `s`.
pub fn validity_margin(n: f64, lambda: f64, s: f64) -> f64 {
    if s == 0.0 {
        return f64::INFINITY;
    }
    local_density(n, lambda, s) / (s * size_ratio(n, lambda))
}

pub fn validity_report(n: u64, lambda: f64, radii: &[f64]) -> Result<ValidityReport> {
    if n == 0 {
        return domain("particle number must be at least 1");
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    if let Some(bad) = radii.iter().find(|s| !(**s >= 0.0 && **s <= 1.2)) {
        return domain(format!("radius {bad} outside [0, 1.2]"));
    }
    let nf = n as f64;
    let r_fermi = size_ratio(nf, lambda);
    let rows = radii
        .iter()
        .map(|&s| {
            let density = local_density(nf, lambda, s);
            let margin = validity_margin(nf, lambda, s);
            let rho = s * r_fermi;
            let cell_min = if density > 0.0 { density.powf(-1.0 / 3.0) } else { f64::INFINITY };
            let k_local = (6.0 * PI * PI * density).cbrt();
            let cell_max = if rho > 0.0 { k_local * k_local / (2.0 * rho) } else { f64::INFINITY };
            let cell_scale = (cell_min < cell_max && cell_min.is_finite() && cell_max.is_finite())
                .then(|| (cell_min * cell_max).sqrt());
            RadiusValidity { s, margin, cell_min, cell_max, cell_scale, valid: margin > 1.0 }
        })
        .collect();
    Ok(ValidityReport {
        n_particles: n,
        lambda,
        radii: rows,
        shell_thickness: nf.powf(-1.0 / 6.0),
        inverse_k_fermi: 1.0 / r_fermi,
    })
}

/// Reduced radius at which the validity margin falls to one.
pub fn margin_crossing(n: f64, lambda: f64) -> f64 {
    // the margin decreases monotonically from +inf at s = 0 to 0 at s = 1
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if validity_margin(n, lambda, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Distance from the crossing radius to the cloud edge, in units of `sigma_r`.
pub fn breakdown_distance(n: f64, lambda: f64) -> f64 {
    (1.0 - margin_crossing(n, lambda)) * size_ratio(n, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_shell_degeneracies() {
        let spec = build_spectrum(1.0, 5.0).unwrap();
        let degs: Vec<u64> = spec.levels.iter().map(|l| l.degeneracy).collect();
        assert_eq!(degs, vec![1, 3, 6, 10, 15, 21]);
        for n in 0..=5 {
            assert_eq!(spec.states_below(n as f64), closed_shell_count(n));
        }
        assert_eq!(spec.zero_point(), 1.5);
    }

    #[test]
    fn anisotropic_levels_do_not_merge() {
        let spec = build_spectrum(8f64.sqrt(), 10.0).unwrap();
        for l in &spec.levels {
            let p = l.energy.round();
            // planar shells have degeneracy p + 1; axial excitations are irrational
            if (l.energy - p).abs() < 1e-12 {
                assert_eq!(l.degeneracy, p as u64 + 1);
            }
        }
        assert!(spec.levels.windows(2).all(|w| w[1].energy > w[0].energy));
    }

    #[test]
    fn enumeration_guards() {
        assert!(build_spectrum(0.0, 1.0).is_err());
        assert!(build_spectrum(1.0, -1.0).is_err());
        assert!(matches!(build_spectrum(1.0, 1000.0), Err(Error::TooManyStates { .. })));
        let small = build_spectrum(1.0, 2.0).unwrap();
        assert!(matches!(small.chemical_potential(10, 0.5), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn closed_shells_at_zero_temperature() {
        assert_eq!(exact_mu(1, 1.0, 0.0).unwrap(), 0.5);
        assert_eq!(exact_mu(4, 1.0, 0.0).unwrap(), 1.5);
        assert_eq!(exact_mu(20, 1.0, 0.0).unwrap(), 3.5);
        assert!(matches!(exact_mu(5, 1.0, 0.0), Err(Error::PartialShell { n: 5, below: 4, above: 10 })));
    }

    #[test]
    fn low_temperature_approaches_gap_midpoint() {
        let mu = exact_mu(4, 1.0, 0.02).unwrap();
        assert!((mu - 1.5).abs() < 0.05, "{mu}");
    }

    #[test]
    fn occupation_matches_target() {
        let spec = build_spectrum(1.0, 80.0).unwrap();
        let mu = spec.chemical_potential(500, 1.5).unwrap();
        assert!((spec.occupation(mu, 1.5) - 500.0).abs() < 1e-10 * 500.0);
    }

    #[test]
    fn ground_state_central_density() {
        assert!((exact_central_density(1).unwrap() - PI.powf(-1.5)).abs() < 1e-15);
        assert!(matches!(exact_central_density(5), Err(Error::PartialShell { .. })));
        let a = origin_probabilities(9);
        assert!(a.iter().skip(1).step_by(2).all(|v| *v == 0.0));
    }

    #[test]
    fn margin_behaviour() {
        assert_eq!(validity_margin(1e5, 1.0, 0.0), f64::INFINITY);
        assert_eq!(validity_margin(1e5, 1.0, 1.0), 0.0);
        assert!(validity_margin(1e6, 1.0, 0.5) > validity_margin(1e4, 1.0, 0.5));
        let report = validity_report(100_000, 1.0, &[0.0, 0.5, 0.99, 1.1]).unwrap();
        assert!(report.radii[0].margin.is_infinite());
        assert!(report.radii[1].valid && report.radii[1].cell_scale.is_some());
        assert!(!report.radii[3].valid);
        assert!(validity_report(10, 1.0, &[1.5]).is_err());
    }
}
