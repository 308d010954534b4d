//! Oracles shared by the integration tests. None of these go through the
//! library's quadrature or Chebyshev code.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `T_n(x)` by the three-term recurrence.
pub fn chebyshev(x: f64, n: u32) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// `2 cosh(2k arcosh x)` with the std inverse hyperbolic cosine.
pub fn t2k_std(x: f64, k: f64) -> f64 {
    2.0 * (2.0 * k * x.max(1.0).acosh()).cosh()
}

/// Naive evaluation of the kernel: split at `r + delta`, subtract the
/// `C / sqrt(u - r)` endpoint model on a graded mesh, composite Simpson on
/// the remainder; `t2k` is the Chebyshev factor as a function of `x`.
pub fn naive_kernel(t: f64, r: f64, k: f64, t2k: impl Fn(f64, f64) -> f64) -> f64 {
    let f = |u: f64| {
        let x = (u / 2.0).cosh() / (r / 2.0).cosh();
        let den = (4.0 * ((u + r) / 2.0).sinh() * ((u - r) / 2.0).sinh()).sqrt();
        u * (-u * u / (4.0 * t)).exp() * t2k(x, k) / den
    };
    // sqrt(u - r) f(u) at u = r
    let c = r * (-r * r / (4.0 * t)).exp() * 2.0 / (2.0 * r.sinh()).sqrt();
    let delta: f64 = 0.5;
    let mut near = 2.0 * c * delta.sqrt();
    let mut hi = delta;
    for _ in 0..40 {
        let lo = hi / 2.0;
        near += simpson(|u| f(u) - c / (u - r).sqrt(), r + lo, r + hi, 256);
        hi = lo;
    }
    let end = r + 2.0 * t * k.abs() + 20.0 * t.sqrt() + 10.0;
    let far = simpson(f, r + delta, end, 200_000);
    (-t / 4.0).exp() / (4.0 * PI * t).powf(1.5) * (near + far)
}

/// `e^{-t/4} int y e^{-t y^2} sin(u y) dy`, the surviving part of the
/// oscillatory integral, by the trapezoidal rule on `|y| <= 14 / sqrt(t)`.
pub fn h_trapezoid(u: f64, t: f64) -> f64 {
    let half = 14.0 / t.sqrt();
    let n = 40_000;
    let h = 2.0 * half / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let y = -half + h * i as f64;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        s += w * y * (-t * y * y).exp() * (u * y).sin();
    }
    (-t / 4.0).exp() * s * h
}
