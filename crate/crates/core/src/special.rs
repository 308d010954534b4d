//! Error-function family used by the tail bounds and by `D_{-2}`.
//!
//! All error-function evaluations in the crate go through this module. `erf`
//! and `erfc` are the musl implementations shipped in the `libm` crate
//! (documented accuracy below 1 ulp). The scaled complement `erfcx` is built
//! on top of them.

use std::f64::consts::PI;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
///
/// For `x >= 26` the asymptotic series is used (its truncation error there is
/// below 1e-16); below that the product is formed with `x^2` split into an
/// exact head and tail so the exponential does not amplify rounding in `x^2`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 26.0 {
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..8 {
            term *= -((2 * n - 1) as f64) * inv2x2;
            sum += term;
        }
        return sum / (x * PI.sqrt());
    }
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * lo.exp() * erfc(x)
}

/// `ln(1 - exp(-y))` for `y > 0`, accurate for both small and large `y`.
pub(crate) fn ln_one_minus_exp_neg(y: f64) -> f64 {
    if y < std::f64::consts::LN_2 {
        (-(-y).exp_m1()).ln()
    } else {
        (-(-y).exp()).ln_1p()
    }
}

/// `ln(sinh(a))` for `a > 0`, finite for arguments where `sinh` overflows.
pub(crate) fn ln_sinh(a: f64) -> f64 {
    if a < 1.0 {
        a.sinh().ln()
    } else {
        a - std::f64::consts::LN_2 + ln_one_minus_exp_neg(2.0 * a)
    }
}

/// `ln(cosh(a))` for any real `a`.
pub(crate) fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}
