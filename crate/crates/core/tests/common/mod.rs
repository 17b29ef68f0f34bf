//! Reference implementations used only by the tests. They share no code
//! path with the library: integrals use double-exponential quadrature on the
//! untransformed Fermi-Dirac integrand and roots use plain bisection.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Tanh-sinh quadrature on [a, b], refined until successive levels agree.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let eval = |tau: f64| {
        let s = 0.5 * PI * tau.sinh();
        let ch = s.cosh();
        // distance to the nearer endpoint, computed without cancellation
        let x = if tau >= 0.0 { b - half * (-s).exp() / ch } else { a + half * s.exp() / ch };
        let w = half * 0.5 * PI * tau.cosh() / (ch * ch);
        if w == 0.0 || !(x > a && x < b) {
            0.0
        } else {
            w * f(x)
        }
    };
    de_sum(eval, 4.0)
}

/// Exp-sinh quadrature on [a, inf) for integrands decaying at least
/// exponentially.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64) -> f64 {
    let eval = |tau: f64| {
        let e = (0.5 * PI * tau.sinh()).exp();
        let w = 0.5 * PI * tau.cosh() * e;
        let x = a + e;
        if !w.is_finite() || !x.is_finite() || e == 0.0 {
            0.0
        } else {
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                w * v
            }
        }
    };
    de_sum(eval, 5.0)
}

fn de_sum<G: Fn(f64) -> f64>(eval: G, tau_max: f64) -> f64 {
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tau_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        // new nodes are the odd multiples of h
        let mut k = 1;
        while k as f64 * h <= tau_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= 1e-14 * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

pub fn gamma(k: f64) -> f64 {
    libm::tgamma(k)
}

/// Direct quadrature of the defining Fermi-Dirac integral.
pub fn fd_oracle(k: f64, eta: f64) -> f64 {
    let integrand = |u: f64| {
        let x = u - eta;
        let occ = if x > 0.0 { (-x).exp() / (1.0 + (-x).exp()) } else { 1.0 / (1.0 + x.exp()) };
        u.powf(k - 1.0) * occ
    };
    let value =
        if eta <= 0.0 { exp_sinh(integrand, 0.0) } else { tanh_sinh(integrand, 0.0, eta) + exp_sinh(integrand, eta) };
    value / gamma(k)
}

/// `sum_{j>=1} (-1)^(j+1) / j^p`, averaging consecutive partial sums.
pub fn alternating_zeta(p: f64, terms: usize) -> f64 {
    let mut s = 0.0;
    let mut prev = 0.0;
    for j in 1..=terms {
        prev = s;
        let t = 1.0 / (j as f64).powf(p);
        s += if j % 2 == 1 { t } else { -t };
    }
    0.5 * (s + prev)
}

/// Reduced chemical potential from bisection on the quadrature oracle.
pub fn mu_oracle(t: f64) -> f64 {
    let g = |m: f64| 6.0 * t.powi(3) * fd_oracle(3.0, m / t) - 1.0;
    let (mut lo, mut hi) = (-t * (6.0 * t.powi(3)).ln() - 10.0 * t - 1.0, 1.0 + 10.0 * t);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * (1.0 + lo.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Composite Simpson rule on [a, b] with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
