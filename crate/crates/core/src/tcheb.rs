//! The generalized Chebyshev function
//! `T_{2k}(x) = (x + sqrt(x^2-1))^{2k} + (x - sqrt(x^2-1))^{2k}` for real `k`.
//!
//! With `p = x + sqrt(x^2 - 1) = exp(arcosh x)` the second branch is `1/p`,
//! so everything is evaluated from `theta = arcosh x` as `2 cosh(2 k theta)`.
//! The subtractive branch `x - sqrt(x^2 - 1)` is never formed.

use crate::error::{domain, HeatError, Result};

/// Weight `k` of the Maass-Laplacian. Any finite real, including zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight(f64);

impl Weight {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return domain(format!("weight must be finite, got {k}"));
        }
        Ok(Weight(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn abs(self) -> f64 {
        self.0.abs()
    }

    /// `|k| - 1/2`, the exponent governing the growth of the kernel tail.
    pub fn tail_exponent(self) -> f64 {
        self.0.abs() - 0.5
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest `2|k| theta` for which `p^{2k}` is reported as a plain float.
pub const OVERFLOW_EXPONENT: f64 = 354.891_356_446_692_4; // ln(f64::MAX) / 2

/// `arcosh x` for `x >= 1`, accurate near 1 (uses `x - 1` exactly).
pub fn arcosh(x: f64) -> f64 {
    let xm1 = x - 1.0;
    (xm1 + (xm1 * (x + 1.0)).sqrt()).ln_1p()
}

fn check_domain(x: f64) -> Result<()> {
    if x.is_nan() || x < 1.0 {
        return domain(format!("T_2k requires x >= 1, got {x}"));
    }
    Ok(())
}

/// `ln T_{2k}` as a function of `theta = arcosh x`. Never overflows.
pub(crate) fn ln_t2k_theta(theta: f64, k: Weight) -> f64 {
    let e = 2.0 * k.abs() * theta;
    e + (-2.0 * e).exp().ln_1p()
}

/// `T_{2k}` as a function of `theta = arcosh x`.
pub(crate) fn t2k_theta(theta: f64, k: Weight) -> Result<f64> {
    let e = 2.0 * k.abs() * theta;
    if e > OVERFLOW_EXPONENT {
        return Err(HeatError::Overflow {
            ln_value: ln_t2k_theta(theta, k),
        });
    }
    Ok(e.exp() + (-e).exp())
}

/// `T'_{2k}` from `theta` and `sinh theta = sqrt(x^2 - 1)`.
pub(crate) fn t2k_prime_theta(theta: f64, sinh_theta: f64, k: Weight) -> Result<f64> {
    let kk = k.value();
    let e = 2.0 * kk.abs() * theta;
    if e > OVERFLOW_EXPONENT {
        return Err(HeatError::Overflow {
            ln_value: (4.0 * kk.abs()).ln() + e - std::f64::consts::LN_2 - sinh_theta.ln(),
        });
    }
    // (2k / sqrt(x^2-1)) * (p^{2k} - p^{-2k}) = 4k sinh(2k theta) / sinh(theta)
    Ok(4.0 * kk * (2.0 * kk * theta).sinh() / sinh_theta)
}

/// `T_{2k}(x)` for `x >= 1`; `T_{2k}(1) = 2` exactly.
pub fn t2k(x: f64, k: Weight) -> Result<f64> {
    check_domain(x)?;
    t2k_theta(arcosh(x), k)
}

/// `ln T_{2k}(x)`, finite wherever `T_{2k}` itself would overflow.
pub fn ln_t2k(x: f64, k: Weight) -> Result<f64> {
    check_domain(x)?;
    Ok(ln_t2k_theta(arcosh(x), k))
}

/// Derivative `T'_{2k}(x)` for `x > 1`. The formula is singular at `x = 1`.
pub fn t2k_prime(x: f64, k: Weight) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return domain(format!("T'_2k requires x > 1, got {x}"));
    }
    let xm1 = x - 1.0;
    let sinh_theta = (xm1 * (x + 1.0)).sqrt();
    t2k_prime_theta(arcosh(x), sinh_theta, k)
}

/// Classical Chebyshev polynomial of the first kind by the three-term recurrence.
pub fn chebyshev_reference(x: f64, n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}
