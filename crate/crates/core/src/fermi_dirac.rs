//! Complete Fermi-Dirac integrals
//! `f_k(eta) = 1/Gamma(k) * integral_0^inf u^(k-1) / (exp(u - eta) + 1) du`
//! for the small set of orders used by the trapped-gas formulas.
//!
//! Three representations cover the real line:
//!
//! * `eta <= -1`: the fugacity series `sum (-1)^(j+1) e^(j eta) / j^k`;
//! * `eta >= 30`: the Sommerfeld series, which terminates for integer order,
//!   plus the reflected tail `-cos(pi k) f_k(-eta)`;
//! * otherwise adaptive Gauss-Legendre quadrature after the substitution
//!   `u = x^2`, which removes the `u^(-1/2)` endpoint singularity of the
//!   half-integer orders.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::quad::{integrate_pieces, Tolerance};

const SERIES_MAX: f64 = -1.0;
const ASYMPTOTIC_MIN: f64 = 30.0;
const TAIL_CUTOFF: f64 = 60.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Supported orders of the complete Fermi-Dirac integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FdOrder {
    Half,
    One,
    ThreeHalves,
    Two,
    FiveHalves,
    Three,
    Four,
}

impl FdOrder {
    pub const ALL: [FdOrder; 7] = [
        FdOrder::Half,
        FdOrder::One,
        FdOrder::ThreeHalves,
        FdOrder::Two,
        FdOrder::FiveHalves,
        FdOrder::Three,
        FdOrder::Four,
    ];

    /// Looks up the order `k`; only the closed set above is accepted.
    pub fn from_value(k: f64) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.value() == k)
            .map_or_else(|| domain(format!("unsupported Fermi-Dirac order {k}")), Ok)
    }

    pub fn value(self) -> f64 {
        match self {
            FdOrder::Half => 0.5,
            FdOrder::One => 1.0,
            FdOrder::ThreeHalves => 1.5,
            FdOrder::Two => 2.0,
            FdOrder::FiveHalves => 2.5,
            FdOrder::Three => 3.0,
            FdOrder::Four => 4.0,
        }
    }

    /// `Gamma(k)`.
    pub fn gamma(self) -> f64 {
        match self {
            FdOrder::Half => SQRT_PI,
            FdOrder::One => 1.0,
            FdOrder::ThreeHalves => 0.5 * SQRT_PI,
            FdOrder::Two => 1.0,
            FdOrder::FiveHalves => 0.75 * SQRT_PI,
            FdOrder::Three => 2.0,
            FdOrder::Four => 6.0,
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, FdOrder::One | FdOrder::Two | FdOrder::Three | FdOrder::Four)
    }

    /// The order `k - 1`, if supported.
    pub fn lowered(self) -> Option<FdOrder> {
        match self {
            FdOrder::Half | FdOrder::One => None,
            FdOrder::ThreeHalves => Some(FdOrder::Half),
            FdOrder::Two => Some(FdOrder::One),
            FdOrder::FiveHalves => Some(FdOrder::ThreeHalves),
            FdOrder::Three => Some(FdOrder::Two),
            FdOrder::Four => Some(FdOrder::Three),
        }
    }
}

impl fmt::Display for FdOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A finite reduced potential `eta = (mu - V) / k_B T`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedPotential(f64);

impl ReducedPotential {
    pub fn new(eta: f64) -> Result<Self> {
        if !eta.is_finite() {
            return domain(format!("reduced potential must be finite, got {eta}"));
        }
        Ok(Self(eta))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn fd(self, order: FdOrder) -> f64 {
        fd_value(order, self.0)
    }
}

/// Complete Fermi-Dirac integral `f_k(eta)`.
pub fn fd(order: FdOrder, eta: f64) -> Result<f64> {
    Ok(ReducedPotential::new(eta)?.fd(order))
}

/// `d f_k / d eta`, which equals `f_(k-1)(eta)`.
pub fn fd_derivative(order: FdOrder, eta: f64) -> Result<f64> {
    match order.lowered() {
        Some(lower) => fd(lower, eta),
        None => domain(format!("derivative of order {order} needs unsupported order {}", order.value() - 1.0)),
    }
}

/// Evaluates `f_k(eta)` for a finite `eta`.
pub(crate) fn fd_value(order: FdOrder, eta: f64) -> f64 {
    debug_assert!(eta.is_finite());
    if eta <= SERIES_MAX {
        fugacity_series(order, eta)
    } else if eta >= ASYMPTOTIC_MIN {
        sommerfeld(order, eta)
    } else {
        quadrature(order, eta)
    }
}

fn fugacity_series(order: FdOrder, eta: f64) -> f64 {
    let k = order.value();
    let z = eta.exp();
    let mut sum = 0.0;
    let mut zj = 1.0;
    let mut sign = 1.0;
    for j in 1..=400 {
        zj *= z;
        let term = zj / (j as f64).powf(k);
        sum += sign * term;
        if term <= 1e-17 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    sum
}

/// Dirichlet eta values `eta_D(2n) = (1 - 2^(1-2n)) zeta(2n)` for n = 1, 2, ...
fn dirichlet_eta_even() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (1..=40).map(|n| dirichlet_eta(2.0 * n as f64)).collect())
}

/// Alternating-series acceleration (Cohen, Rodriguez Villegas, Zagier).
fn dirichlet_eta(s: f64) -> f64 {
    let n = 40;
    let mut d = (3.0 + 8f64.sqrt()).powi(n);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..n {
        c = b - c;
        sum += c / (k as f64 + 1.0).powf(s);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

fn sommerfeld(order: FdOrder, eta: f64) -> f64 {
    let k = order.value();
    let gamma_k1 = k * order.gamma();
    let leading = eta.powf(k) / gamma_k1;
    let inv_eta2 = 1.0 / (eta * eta);
    let mut bracket = 1.0;
    let mut falling = 1.0;
    let mut power = 1.0;
    let mut previous = f64::INFINITY;
    for (i, &eta_d) in dirichlet_eta_even().iter().enumerate() {
        let n = i + 1;
        let j = 2.0 * n as f64;
        falling *= (k - j + 2.0) * (k - j + 1.0);
        if falling == 0.0 {
            break;
        }
        power *= inv_eta2;
        let term = 2.0 * eta_d * falling * power;
        // The series is asymptotic for half-integer order: stop at the
        // smallest term.
        if term.abs() >= previous {
            break;
        }
        bracket += term;
        previous = term.abs();
        if term.abs() < 1e-18 {
            break;
        }
    }
    let mut value = leading * bracket;
    if order.is_integer() {
        // -cos(pi k) = (-1)^(k+1)
        let reflected = fugacity_series(order, -eta);
        if (k as i64) % 2 == 0 {
            value -= reflected;
        } else {
            value += reflected;
        }
    }
    value
}

fn fermi_factor(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

fn quadrature(order: FdOrder, eta: f64) -> f64 {
    let power = 2.0 * order.value() - 1.0;
    let upper = (eta.max(0.0) + TAIL_CUTOFF).sqrt();
    let integrand = |x: f64| {
        let xp = if power == 0.0 { 1.0 } else { x.powf(power) };
        xp * fermi_factor(x * x - eta)
    };
    let mut points = vec![0.0];
    if eta > 0.0 {
        points.push(eta.sqrt());
    }
    points.push(upper);
    let est = integrate_pieces(integrand, &points, Tolerance::new(0.0, 1e-14))
        .expect("Fermi-Dirac integrand is smooth on a finite interval");
    2.0 * est.value / order.gamma()
}
