use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};

/// Axis labels shared by every emitted table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// Reduced temperature `k_B T / E_F`.
    T,
    /// Reduced effective radius `rho / R_F`.
    S,
    /// Reduced wavenumber `|k| / K_F`.
    Q,
    /// Reduced chemical potential `mu / E_F`.
    M,
    /// Heat capacity per particle in units of `k_B`.
    C,
    /// Mean-square size `<rho^2> / R_F^2`.
    Msd,
    /// Scaled density.
    Density,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::T => "t",
            Label::S => "s",
            Label::Q => "q",
            Label::M => "m",
            Label::C => "c",
            Label::Msd => "msd",
            Label::Density => "density",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sampled dimensionless curve `y(x)` with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalCurve {
    x_label: Label,
    y_label: Label,
    samples: Vec<(f64, f64)>,
}

impl UniversalCurve {
    pub fn new(x_label: Label, y_label: Label, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return domain("curve samples must be finite");
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return domain("curve abscissae must be strictly increasing");
        }
        Ok(Self { x_label, y_label, samples })
    }

    pub fn x_label(&self) -> Label {
        self.x_label
    }

    pub fn y_label(&self) -> Label {
        self.y_label
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
        }
    }
}
