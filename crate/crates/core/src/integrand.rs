//! Closed-form ingredients of the heat-kernel integrand.
//!
//! Two evaluations of the bracket `I_k(u, r)` live here: the long form built
//! from the `Theta`-substituted products, and the short form
//! `T_{2k}(cosh(u/2) / cosh(r/2))`. Their agreement is checked by the
//! `bracket` suite. The contour integral `H(u, t)` is given in closed form.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Result};
use crate::tcheb::{self, Weight};

/// A point `(u, r, t)` of the integration domain: `u > r >= 0`, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandPoint {
    u: f64,
    r: f64,
    t: f64,
}

impl IntegrandPoint {
    pub fn new(u: f64, r: f64, t: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return domain(format!("distance must be finite and >= 0, got {r}"));
        }
        if !(u > r) || !u.is_finite() {
            return domain(format!("need u > r, got u = {u}, r = {r}"));
        }
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("time must be positive, got {t}"));
        }
        Ok(IntegrandPoint { u, r, t })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `x = cosh(u/2) / cosh(r/2)`, the argument of `T_{2k}`.
    pub fn x(&self) -> f64 {
        (self.u / 2.0).cosh() / (self.r / 2.0).cosh()
    }

    /// `sqrt(x^2 - 1)` without cancellation:
    /// `x^2 - 1 = sinh((u+r)/2) sinh((u-r)/2) / cosh^2(r/2)`.
    pub fn sinh_theta(&self) -> f64 {
        half_sum_diff(self.u, self.r).sqrt() / (self.r / 2.0).cosh()
    }

    /// `theta = arcosh x`.
    pub fn theta(&self) -> f64 {
        self.sinh_theta().asinh()
    }
}

/// `sinh((u+r)/2) sinh((u-r)/2) = (cosh u - cosh r) / 2`.
fn half_sum_diff(u: f64, r: f64) -> f64 {
    (0.5 * (u + r)).sinh() * (0.5 * (u - r)).sinh()
}

fn check_pair(u: f64, r: f64, allow_zero_r: bool) -> Result<()> {
    if !u.is_finite() || !r.is_finite() {
        return domain(format!("arguments must be finite, got u = {u}, r = {r}"));
    }
    if allow_zero_r {
        if r < 0.0 {
            return domain(format!("distance must be >= 0, got {r}"));
        }
    } else if r <= 0.0 {
        return domain(format!(
            "the unsimplified bracket is singular at r = {r}; use the simplified form"
        ));
    }
    if u <= r {
        return domain(format!("need u > r, got u = {u}, r = {r}"));
    }
    Ok(())
}

/// The bracket in its unsimplified form
///
/// ```text
/// [ (e^u - cosh r + e^{u/2} sqrt(2cosh u - 2cosh r)) (sqrt2 sinh(u/2) - sqrt(cosh u - cosh r)) ]^{2k}
/// + [ (e^u - cosh r - e^{u/2} sqrt(2cosh u - 2cosh r)) (sqrt2 sinh(u/2) + sqrt(cosh u - cosh r)) ]^{2k}
/// ```
///
/// divided by `(cosh r - 1)^{2k} (cosh r + 1)^k`. Each product is formed
/// before it is raised to the power `2k`.
pub fn fay_bracket_original(u: f64, r: f64, k: Weight) -> Result<f64> {
    check_pair(u, r, false)?;
    let kk = k.value();
    let cosh_r = r.cosh();
    let diff = 2.0 * half_sum_diff(u, r); // cosh u - cosh r
    let eu = u.exp();
    let cross = (0.5 * u).exp() * (2.0 * diff).sqrt();
    let a_plus = eu - cosh_r + cross;
    let a_minus = eu - cosh_r - cross;
    let b_minus = SQRT_2 * (0.5 * u).sinh() - diff.sqrt();
    let b_plus = SQRT_2 * (0.5 * u).sinh() + diff.sqrt();

    let first = a_plus * b_minus;
    let second = a_minus * b_plus;
    if !(first > 0.0) || !(second > 0.0) {
        return domain(format!(
            "bracket products lost positivity at u = {u}, r = {r} ({first:e}, {second:e})"
        ));
    }

    let cosh_r_minus_1 = 2.0 * (0.5 * r).sinh().powi(2);
    let cosh_r_plus_1 = 2.0 * (0.5 * r).cosh().powi(2);
    let ln_denominator = 2.0 * kk * cosh_r_minus_1.ln() + kk * cosh_r_plus_1.ln();
    Ok((2.0 * kk * first.ln() - ln_denominator).exp()
        + (2.0 * kk * second.ln() - ln_denominator).exp())
}

/// The bracket in its simplified form `T_{2k}(cosh(u/2) / cosh(r/2))`.
pub fn i_k_simplified(u: f64, r: f64, k: Weight) -> Result<f64> {
    check_pair(u, r, true)?;
    let x = (0.5 * u).cosh() / (0.5 * r).cosh();
    tcheb::t2k(x.max(1.0), k)
}

/// Residuals of `e^{+-Theta} sinh r = e^u - cosh r +- e^{u/2} sqrt(2cosh u - 2cosh r)`
/// after solving the `+` branch for `Theta`.
///
/// Each residual is `(lhs - rhs) / (e^u + cosh r)`, i.e. relative to the size
/// of the terms on the right-hand side.
pub fn theta_relation_residual(u: f64, r: f64) -> Result<(f64, f64)> {
    check_pair(u, r, false)?;
    let sinh_r = r.sinh();
    let cosh_r = r.cosh();
    let eu = u.exp();
    let cross = (0.5 * u).exp() * (4.0 * half_sum_diff(u, r)).sqrt();
    let rhs_plus = eu - cosh_r + cross;
    let rhs_minus = eu - cosh_r - cross;
    let theta = (rhs_plus / sinh_r).ln();
    let scale = eu + cosh_r;
    Ok((
        (theta.exp() * sinh_r - rhs_plus) / scale,
        ((-theta).exp() * sinh_r - rhs_minus) / scale,
    ))
}

/// Magnitude of the contour integral `H(u, t) / i = (u / 2t) sqrt(pi / t) e^{-t/4} e^{-u^2/4t}`.
pub fn h_closed_form(u: f64, t: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return domain(format!("H(u, t) requires u > 0, got {u}"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("H(u, t) requires t > 0, got {t}"));
    }
    Ok(u / (2.0 * t) * (PI / t).sqrt() * (-t / 4.0 - u * u / (4.0 * t)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(k: f64) -> Weight {
        Weight::new(k).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn zero_weight_bracket_is_two() {
        for &(u, r) in &[(0.2, 0.1), (2.0, 1.0), (7.0, 3.5)] {
            assert!((fay_bracket_original(u, r, w(0.0)).unwrap() - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn forms_agree_at_reference_points() {
        let a = fay_bracket_original(2.0, 1.0, w(1.0)).unwrap();
        let b = i_k_simplified(2.0, 1.0, w(1.0)).unwrap();
        let c = tcheb::t2k(1f64.cosh() / 0.5f64.cosh(), w(1.0)).unwrap();
        assert!(rel(a, b) < 1e-10);
        assert!(rel(b, c) < 1e-15);
        let a = fay_bracket_original(1.5, 0.5, w(0.85)).unwrap();
        let b = i_k_simplified(1.5, 0.5, w(0.85)).unwrap();
        assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn simplified_form_values() {
        let v = i_k_simplified(2.0, 1.0, w(0.5)).unwrap();
        assert!(rel(v, 2.0 * 1f64.cosh() / 0.5f64.cosh()) < 1e-15);
        let th = 1.5f64.cosh().acosh();
        let oracle = 2.0 * (3.4 * th).cosh();
        assert!(rel(i_k_simplified(3.0, 0.0, w(1.7)).unwrap(), oracle) < 1e-14);
        let near = i_k_simplified(1.0 + 1e-12, 1.0, w(2.3)).unwrap();
        assert!((near - 2.0).abs() < 1e-9);
    }

    #[test]
    fn domain_errors() {
        assert!(fay_bracket_original(1.0, 0.0, w(1.0)).is_err());
        assert!(fay_bracket_original(1.0, 1.0, w(1.0)).is_err());
        assert!(i_k_simplified(1.0, 2.0, w(1.0)).is_err());
        assert!(i_k_simplified(1.0, 1.0, w(1.0)).is_err());
        assert!(theta_relation_residual(1.0, 0.0).is_err());
        assert!(h_closed_form(0.0, 1.0).is_err());
        assert!(h_closed_form(1.0, 0.0).is_err());
        assert!(IntegrandPoint::new(1.0, 1.0, 1.0).is_err());
        assert!(IntegrandPoint::new(2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn theta_residuals_vanish() {
        let (p, m) = theta_relation_residual(2.0, 1.0).unwrap();
        assert!(p.abs() < 1e-12 && m.abs() < 1e-12, "{p} {m}");
        let (p, m) = theta_relation_residual(1.0001, 1.0).unwrap();
        assert!(p.abs() < 1e-9 && m.abs() < 1e-9, "{p} {m}");
    }

    #[test]
    fn h_factorisation() {
        for &(u, t) in &[(0.5, 0.3), (1.0, 1.0), (4.0, 2.5)] {
            let ratio = h_closed_form(u, t).unwrap() / (u / (2.0 * t) * (PI / t).sqrt());
            assert!(rel(ratio, (-t / 4.0 - u * u / (4.0 * t)).exp()) < 1e-14);
        }
    }

    #[test]
    fn stable_theta_matches_direct() {
        let p = IntegrandPoint::new(2.5, 0.7, 1.0).unwrap();
        assert!(rel(p.theta(), p.x().acosh()) < 1e-13);
        assert!(rel(p.sinh_theta(), (p.x() * p.x() - 1.0).sqrt()) < 1e-13);
    }

    proptest! {
        #[test]
        fn product_identity(r in 0.05f64..4.0, du in 0.01f64..4.0) {
            let u = r + du;
            let lhs = (u.exp() - r.cosh()).powi(2) - u.exp() * (2.0 * u.cosh() - 2.0 * r.cosh());
            let rhs = r.sinh().powi(2);
            let scale = (u.exp() - r.cosh()).powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(rhs));
        }

        #[test]
        fn simplified_bracket_at_least_two(r in 0.0f64..5.0, du in 1e-9f64..8.0, k in -4.0f64..4.0) {
            prop_assert!(i_k_simplified(r + du, r, w(k)).unwrap() >= 2.0);
        }
    }
}
