//! Evaluation of the heat kernel
//!
//! ```text
//! K(t, r) = e^{-t/4} / (4 pi t)^{3/2}
//!           * int_r^inf u e^{-u^2/4t} / sqrt(2cosh u - 2cosh r) * T_{2k}(cosh(u/2) / cosh(r/2)) du
//! ```
//!
//! The integral is split into three pieces:
//!
//! * `u in [r, r+1]`, integrated in `s` with `cosh u = cosh r + s^2`. The
//!   substitution turns `du / sqrt(2cosh u - 2cosh r)` into
//!   `sqrt(2) ds / sinh u`, which is analytic at `s = 0`.
//! * `u in [r+1, U]`, integrated directly with every factor in log form so
//!   that large `t` and `|k|` do not overflow.
//! * `u > U`, replaced by a certified upper bound (see [`tail_bound`]).
//!
//! Internally the integrand carries the factor `e^{r^2/4t}` and an extra
//! shift `e^{-sigma}`; both are returned through `ln_value` and never
//! materialised, so the kernel's logarithm is available even when the value
//! itself underflows.

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::asymptotics::ln_gaussian_tail;
use crate::error::{domain, HeatError, Result};
use crate::hyperbolic::{hyperbolic_distance, HalfPlanePoint};
use crate::quadrature::{integrate, uniform_breakpoints, Integral, Tolerance};
use crate::special::{ln_cosh, ln_sinh};
use crate::tcheb::{ln_t2k_theta, Weight};

/// Distances beyond this are rejected: `cosh r` is formed explicitly near the endpoint.
pub const MAX_DISTANCE: f64 = 700.0;

const MAX_TAIL_EXTENSIONS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    t: f64,
    r: f64,
    k: Weight,
}

impl KernelQuery {
    pub fn new(t: f64, r: f64, k: Weight) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("time must be positive and finite, got {t}"));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return domain(format!("distance must be finite and >= 0, got {r}"));
        }
        if r > MAX_DISTANCE {
            return domain(format!(
                "distance {r} exceeds the supported range (<= {MAX_DISTANCE})"
            ));
        }
        Ok(KernelQuery { t, r, k })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k(&self) -> Weight {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Target for the certified tail, relative to the computed integral.
    pub tail_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 10_000,
            tail_rel_tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration with the given relative tolerance; the tail target
    /// is set a hundred times tighter.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            tail_rel_tol: rel_tol / 100.0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(HeatError::Config(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(HeatError::Config(format!(
                "abs_tol must be finite and >= 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > 1_000_000 {
            return Err(HeatError::Config(format!(
                "max_subdivisions must lie in 1..=1000000, got {}",
                self.max_subdivisions
            )));
        }
        if !(self.tail_rel_tol > 0.0) || !self.tail_rel_tol.is_finite() {
            return Err(HeatError::Config(format!(
                "tail_rel_tol must be positive, got {}",
                self.tail_rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    /// Quadrature error estimate, excluding the tail.
    pub error_estimate: f64,
    /// Certified bound on the neglected tail `u > tail_cut`.
    pub tail_bound: f64,
    pub tail_cut: f64,
    pub evaluations: usize,
    /// Natural logarithm of the value; finite even when `value` underflows.
    pub ln_value: f64,
    pub underflow: bool,
}

/// Kernel value in factored form: `K = exp(ln_scale) * integral`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScaledEval {
    pub ln_scale: f64,
    /// The `sigma` included in `ln_scale`.
    pub shift: f64,
    pub integral: f64,
    pub error: f64,
    pub tail: f64,
    pub tail_cut: f64,
    pub evaluations: usize,
}

impl ScaledEval {
    pub fn ln_value(&self) -> f64 {
        self.ln_scale + self.integral.ln()
    }

    fn into_report(self) -> Result<EvalReport> {
        let ln_value = self.ln_value();
        if ln_value > f64::MAX.ln() {
            return Err(HeatError::Overflow { ln_value });
        }
        if ln_value < f64::MIN_POSITIVE.ln() {
            return Ok(EvalReport {
                value: 0.0,
                error_estimate: f64::MIN_POSITIVE,
                tail_bound: 0.0,
                tail_cut: self.tail_cut,
                evaluations: self.evaluations,
                ln_value,
                underflow: true,
            });
        }
        let scale = self.ln_scale.exp();
        let (value, error_estimate, tail_bound) = if scale.is_normal() {
            (self.integral * scale, self.error * scale, self.tail * scale)
        } else {
            let e = |x: f64| {
                if x > 0.0 {
                    (x.ln() + self.ln_scale).exp()
                } else {
                    0.0
                }
            };
            (ln_value.exp(), e(self.error), e(self.tail))
        };
        Ok(EvalReport {
            value,
            error_estimate,
            tail_bound,
            tail_cut: self.tail_cut,
            evaluations: self.evaluations,
            ln_value,
            underflow: false,
        })
    }
}

/// Per-query constants shared by the integrands.
struct Setup {
    t: f64,
    r: f64,
    k: Weight,
    sigma: f64,
    cosh_r: f64,
    sinh_r: f64,
    cosh_half_r: f64,
    ln_cosh_half_r: f64,
}

impl Setup {
    fn new(q: &KernelQuery) -> Self {
        let (t, r) = (q.t, q.r);
        // Rough log-maximum of e^{-(u^2-r^2)/4t + (|k|-1/2)(u-r)} over u >= r.
        let excess = (2.0 * t * q.k.tail_exponent() - r).max(0.0);
        Setup {
            t,
            r,
            k: Weight::new(q.k.abs()).expect("finite weight"),
            sigma: excess * excess / (4.0 * t),
            cosh_r: r.cosh(),
            sinh_r: r.sinh(),
            cosh_half_r: (0.5 * r).cosh(),
            ln_cosh_half_r: ln_cosh(0.5 * r),
        }
    }

    /// Integrand in `s`, `cosh u = cosh r + s^2`, `u in [r, r+1]`.
    fn near(&self, s: f64) -> f64 {
        let r = self.r;
        let s2 = s * s;
        let sinh_u = (self.sinh_r * self.sinh_r + s2 * (2.0 * self.cosh_r + s2)).sqrt();
        if sinh_u == 0.0 {
            return 2.0 * SQRT_2 * (-self.sigma).exp();
        }
        let u = sinh_u.asinh();
        // u - r from sinh((u-r)/2) = s^2 / (2 sinh((u+r)/2)).
        let d = 2.0 * (s2 / (2.0 * (0.5 * (u + r)).sinh())).asinh();
        let gauss = -d * (u + r) / (4.0 * self.t);
        let theta = (s / (SQRT_2 * self.cosh_half_r)).asinh();
        let ln_t = ln_t2k_theta(theta, self.k);
        SQRT_2 * (u / sinh_u) * (gauss + ln_t - self.sigma).exp()
    }

    /// Integrand in `u` for `u >= r + 1`, assembled in log form.
    fn far(&self, u: f64) -> f64 {
        let r = self.r;
        let ln_sum = ln_sinh(0.5 * (u + r));
        let ln_diff = ln_sinh(0.5 * (u - r));
        let ln_den = 0.5 * (2.0 * LN_2 + ln_sum + ln_diff);
        let ln_sinh_theta = 0.5 * (ln_sum + ln_diff) - self.ln_cosh_half_r;
        let theta = if ln_sinh_theta < 300.0 {
            ln_sinh_theta.exp().asinh()
        } else {
            LN_2 + ln_sinh_theta
        };
        let gauss = -(u - r) * (u + r) / (4.0 * self.t);
        (u.ln() + gauss + ln_t2k_theta(theta, self.k) - ln_den - self.sigma).exp()
    }

    /// Breakpoints in `s` for the near segment, graded towards `s = 0` down to
    /// the width of the Gaussian factor.
    fn near_breakpoints(&self) -> Vec<f64> {
        let r = self.r;
        let s_end = (2.0 * (r + 0.5).sinh() * 0.5f64.sinh()).sqrt();
        let u_w = (r * r + 4.0 * self.t).sqrt();
        let s_w = if u_w < r + 1.0 {
            (2.0 * (0.5 * (u_w + r)).sinh() * (0.5 * (u_w - r)).sinh()).sqrt()
        } else {
            s_end
        };
        let levels = ((s_end / s_w).log2().ceil().max(0.0) as usize + 3).min(60);
        let mut pts: Vec<f64> = (1..=levels)
            .rev()
            .map(|j| s_end * 0.5f64.powi(j as i32))
            .collect();
        pts.insert(0, 0.0);
        pts.push(s_end);
        pts
    }

    fn far_breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let width = (2.0 * self.t).sqrt();
        let pieces = ((b - a) / width).ceil().clamp(1.0, 256.0) as usize;
        uniform_breakpoints(a, b, pieces)
    }

    /// Tail bound in the units of the scaled integral.
    fn scaled_tail(&self, cut: f64) -> f64 {
        (ln_tail_bound(self.r, self.t, self.k, cut) - self.sigma).exp()
    }

    fn ln_scale(&self) -> f64 {
        -self.t / 4.0 - self.r * self.r / (4.0 * self.t) - 1.5 * (4.0 * PI * self.t).ln()
            + self.sigma
    }
}

/// Log of the bound on `int_U^inf u e^{-(u^2-r^2)/4t} T_{2k}(x) / sqrt(2cosh u - 2cosh r) du`.
///
/// For `u >= U > r + 1`:
/// `T_{2k}(x) <= e^{|k|u} [ (1+e^{-U})^{2|k|} cosh(r/2)^{-2|k|} + e^{-|k|U} ]` and
/// `(2cosh u - 2cosh r)^{-1/2} <= e^{-u/2} (1 - 2 cosh r e^{-U})^{-1/2}`, which
/// leaves the Gaussian integral `int_U^inf u e^{-u^2/4t + (|k|-1/2)u} du`.
fn ln_tail_bound(r: f64, t: f64, k: Weight, cut: f64) -> f64 {
    let ka = k.abs();
    let a1 = 2.0 * ka * ((-cut).exp().ln_1p() - ln_cosh(0.5 * r));
    let a2 = -ka * cut;
    let (hi, lo) = if a1 >= a2 { (a1, a2) } else { (a2, a1) };
    let ln_growth = hi + (lo - hi).exp().ln_1p();
    // 2 cosh r e^{-U} = e^{r-U} + e^{-r-U} < 1 for U > r + 1
    let ln_root = -0.5 * (-((r - cut).exp() + (-r - cut).exp())).ln_1p();
    ln_growth
        + ln_root
        + r * r / (4.0 * t)
        + ln_gaussian_tail(1.0 / (4.0 * t), k.tail_exponent(), cut)
}

/// Upper bound on the part of the kernel integral beyond `cut`, before the
/// kernel's prefactor `e^{-t/4} (4 pi t)^{-3/2}` is applied.
pub fn tail_bound(r: f64, t: f64, k: Weight, cut: f64) -> Result<f64> {
    if !(t > 0.0) || !(r >= 0.0) {
        return domain(format!(
            "tail bound needs t > 0 and r >= 0, got t = {t}, r = {r}"
        ));
    }
    if !(cut > r + 1.0) || !cut.is_finite() {
        return domain(format!(
            "tail bound needs cut > r + 1, got cut = {cut}, r = {r}"
        ));
    }
    Ok(ln_tail_bound(r, t, k, cut).exp())
}

fn accumulate(total: &mut Integral, part: Integral) {
    total.value += part.value;
    total.error += part.error;
    total.evaluations += part.evaluations;
    total.subdivisions += part.subdivisions;
}

pub(crate) fn evaluate_scaled(q: &KernelQuery, cfg: &QuadratureConfig) -> Result<ScaledEval> {
    cfg.validate()?;
    let setup = Setup::new(q);
    let ln_scale = setup.ln_scale();
    let abs_scaled = cfg.abs_tol * (-ln_scale).exp();
    let rel = cfg.rel_tol;
    let max_sub = cfg.max_subdivisions;

    let mut total = integrate(
        |s| setup.near(s),
        &setup.near_breakpoints(),
        Tolerance::new(rel / 4.0, abs_scaled / 4.0),
        max_sub,
    )?;
    let near_value = total.value;

    let r = q.r;
    let l = (1.0 / cfg.tail_rel_tol).ln() + 10.0;
    let peak = (r + 1.0).max(2.0 * q.t * q.k.tail_exponent());
    let mut cut = (r + 2.0).max(peak + (4.0 * q.t * l).sqrt());

    let far = integrate(
        |u| setup.far(u),
        &setup.far_breakpoints(r + 1.0, cut),
        Tolerance::new(rel / 4.0, (rel / 4.0) * near_value + abs_scaled / 4.0),
        max_sub,
    )?;
    accumulate(&mut total, far);

    let tail_target = cfg.tail_rel_tol.min(rel / 4.0);
    let mut tail = setup.scaled_tail(cut);
    let mut extensions = 0;
    while !(tail <= tail_target * total.value) {
        if extensions == MAX_TAIL_EXTENSIONS || !tail.is_finite() {
            return Err(HeatError::Quadrature {
                error_estimate: total.error + tail,
                subdivisions: total.subdivisions,
            });
        }
        let next = r + 1.5 * (cut - r);
        let share = rel / 8.0 * 0.5f64.powi(extensions as i32 + 1);
        let piece = integrate(
            |u| setup.far(u),
            &setup.far_breakpoints(cut, next),
            Tolerance::new(share, share * total.value + abs_scaled / 8.0),
            max_sub,
        )?;
        accumulate(&mut total, piece);
        cut = next;
        tail = setup.scaled_tail(cut);
        extensions += 1;
    }

    if !(total.value > 0.0) {
        return Err(HeatError::Quadrature {
            error_estimate: total.error,
            subdivisions: total.subdivisions,
        });
    }
    if total.error + tail > rel * total.value + abs_scaled {
        return Err(HeatError::Quadrature {
            error_estimate: total.error + tail,
            subdivisions: total.subdivisions,
        });
    }

    Ok(ScaledEval {
        ln_scale,
        shift: setup.sigma,
        integral: total.value,
        error: total.error,
        tail,
        tail_cut: cut,
        evaluations: total.evaluations,
    })
}

/// Evaluate `K(t, r)` for weight `k` with a certified total error.
pub fn eval_kernel(q: &KernelQuery, cfg: &QuadratureConfig) -> Result<EvalReport> {
    evaluate_scaled(q, cfg)?.into_report()
}

/// `K(t; z, w)`, which depends on the points only through their distance.
pub fn eval_kernel_points(
    t: f64,
    z: HalfPlanePoint,
    w: HalfPlanePoint,
    k: Weight,
    cfg: &QuadratureConfig,
) -> Result<EvalReport> {
    let q = KernelQuery::new(t, hyperbolic_distance(z, w), k)?;
    eval_kernel(&q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: f64) -> Weight {
        Weight::new(k).unwrap()
    }

    fn eval(t: f64, r: f64, k: f64) -> EvalReport {
        eval_kernel(
            &KernelQuery::new(t, r, w(k)).unwrap(),
            &QuadratureConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_invalid_queries() {
        assert!(KernelQuery::new(0.0, 1.0, w(0.0)).is_err());
        assert!(KernelQuery::new(1.0, -1.0, w(0.0)).is_err());
        assert!(KernelQuery::new(1.0, f64::NAN, w(0.0)).is_err());
        assert!(KernelQuery::new(1.0, 800.0, w(0.0)).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = [
            QuadratureConfig {
                rel_tol: 0.0,
                ..Default::default()
            },
            QuadratureConfig {
                rel_tol: 0.5,
                ..Default::default()
            },
            QuadratureConfig {
                abs_tol: -1.0,
                ..Default::default()
            },
            QuadratureConfig {
                max_subdivisions: 0,
                ..Default::default()
            },
            QuadratureConfig {
                max_subdivisions: 2_000_000,
                ..Default::default()
            },
            QuadratureConfig {
                tail_rel_tol: 0.0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cfg.validate(), Err(HeatError::Config(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn near_integrand_limit_at_zero() {
        let q = KernelQuery::new(1.0, 1.0, w(0.7)).unwrap();
        let s = Setup::new(&q);
        let limit = SQRT_2 * (1.0 / 1f64.sinh()) * 2.0 * (-s.sigma).exp();
        assert!((s.near(1e-9) - limit).abs() < 1e-8 * limit);
    }

    #[test]
    fn segments_join_continuously() {
        // At u = r + 1 both parametrisations describe the same integrand up to
        // the Jacobian du/ds = 2s / sinh u.
        for &(t, r, k) in &[(1.0, 0.5, 1.2), (0.3, 2.0, -0.4), (5.0, 0.0, 2.0)] {
            let q = KernelQuery::new(t, r, w(k)).unwrap();
            let s = Setup::new(&q);
            let u = r + 1.0;
            let s_end = (u.cosh() - r.cosh()).sqrt();
            let near = s.near(s_end);
            let far = s.far(u) * 2.0 * s_end / u.sinh();
            assert!((near - far).abs() < 1e-12 * far, "{near} vs {far}");
        }
    }

    #[test]
    fn report_meets_tolerance() {
        for &(t, r, k) in &[
            (1.0, 1.0, 0.0),
            (0.1, 0.1, 2.7),
            (10.0, 5.0, 1.0),
            (1.0, 0.0, 0.3),
        ] {
            let rep = eval(t, r, k);
            assert!(rep.value > 0.0);
            assert!(rep.error_estimate + rep.tail_bound <= 1e-10 * rep.value);
            assert!(rep.tail_cut > r + 1.0);
            assert!(rep.evaluations > 0);
        }
    }

    #[test]
    fn weight_sign_is_irrelevant() {
        for &(t, r, k) in &[(1.0, 1.0, 0.8), (0.2, 3.0, 2.4), (10.0, 0.5, 1.3)] {
            assert_eq!(eval(t, r, k).value, eval(t, r, -k).value);
        }
    }

    #[test]
    fn half_weight_matches_linear_chebyshev() {
        // T_1(x) = x, so T_{2k} = 2x exactly; integrate that by brute force in s.
        let (t, r) = (1.0f64, 1.0f64);
        let rep = eval(t, r, 0.5);
        let f = |s: f64| {
            let c = r.cosh() + s * s;
            let u = c.acosh();
            let x = (0.5 * u).cosh() / (0.5 * r).cosh();
            SQRT_2 * u / u.sinh() * (-(u * u) / (4.0 * t)).exp() * 2.0 * x
        };
        let res = integrate(
            |v: f64| {
                // s = v / (1 - v) maps [0, 1) onto [0, inf)
                let s = v / (1.0 - v);
                f(s) / (1.0 - v).powi(2)
            },
            &uniform_breakpoints(0.0, 0.999, 64),
            Tolerance::new(1e-12, 0.0),
            10_000,
        )
        .unwrap();
        let expected = (-t / 4.0).exp() / (4.0 * PI * t).powf(1.5) * res.value;
        assert!((rep.value - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn tail_bound_preconditions_and_monotonicity() {
        assert!(tail_bound(1.0, 1.0, w(0.0), 2.0).is_err());
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let cut = 2.5 + i as f64;
            let b = tail_bound(1.0, 1.0, w(0.0), cut).unwrap();
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn underflow_is_flagged() {
        let rep = eval(1e-3, 60.0, 0.0);
        assert!(rep.underflow);
        assert_eq!(rep.value, 0.0);
        assert_eq!(rep.error_estimate, f64::MIN_POSITIVE);
        assert!(rep.ln_value.is_finite() && rep.ln_value < -700.0);
    }

    #[test]
    fn points_interface_uses_distance() {
        let z = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let zz = HalfPlanePoint::new(0.0, 2.0).unwrap();
        let cfg = QuadratureConfig::default();
        let a = eval_kernel_points(1.0, z, zz, w(0.5), &cfg).unwrap();
        let b = eval(1.0, 2f64.ln(), 0.5);
        assert!((a.value - b.value).abs() < 1e-14 * b.value);
        let d = eval_kernel_points(1.0, z, z, w(0.5), &cfg).unwrap();
        assert_eq!(d.value, eval(1.0, 0.0, 0.5).value);
    }
}
