//! Adaptive Gauss-Legendre quadrature on finite intervals.
//!
//! Each panel is integrated with a fixed 20-point Gauss-Legendre rule and
//! compared against the sum over its two halves; panels that disagree by more
//! than their share of the tolerance are bisected.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const RULE_ORDER: usize = 20;
const MAX_PANELS: usize = 20_000;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre polynomial roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th root, counted from x = 1.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum();
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(RULE_ORDER))
}

/// Stopping criterion: a panel is accepted once its error estimate is below
/// `max(abs, rel * |I|)` scaled by the panel's share of the total length.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over the ordered breakpoints `points` (at least two).
///
/// Breakpoints let callers place a panel edge at a known kink or steep edge
/// of the integrand.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<Estimate> {
    if points.len() < 2 {
        return Err(Error::Domain("quadrature needs at least two breakpoints".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("quadrature bounds must be finite".into()));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("quadrature breakpoints must be non-decreasing".into()));
    }
    let rule = default_rule();
    let total_len = points[points.len() - 1] - points[0];
    if total_len == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0, panels: 0 });
    }

    let mut stack: Vec<(f64, f64, f64)> =
        points.windows(2).filter(|w| w[1] > w[0]).map(|w| (w[0], w[1], rule.integrate(&f, w[0], w[1]))).collect();
    let scale: f64 = stack.iter().map(|p| p.2).sum::<f64>().abs();
    // Reverse so the leftmost panel is processed first; keeps the summation
    // order fixed for identical inputs.
    stack.reverse();

    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    let mut panels = 0;
    while let Some((a, b, coarse)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = rule.integrate(&f, a, m);
        let right = rule.integrate(&f, m, b);
        let fine = left + right;
        let err = (fine - coarse).abs();
        let allowed = tol.abs.max(tol.rel * scale) * ((b - a) / total_len);
        let exhausted = panels + stack.len() >= MAX_PANELS || m <= a || m >= b;
        if err <= allowed || exhausted {
            if exhausted && err > allowed && err > 1e3 * allowed {
                return Err(Error::Numerical(format!(
                    "adaptive quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
                )));
            }
            // Neumaier summation.
            let t = value + fine;
            if value.abs() >= fine.abs() {
                comp += (value - t) + fine;
            } else {
                comp += (fine - t) + value;
            }
            value = t;
            error += err;
            panels += 1;
        } else {
            stack.push((m, b, right));
            stack.push((a, m, left));
        }
    }
    Ok(Estimate { value: value + comp, error, panels })
}

/// Integrates `f` over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_pieces(f, &[a, b], tol)
}
