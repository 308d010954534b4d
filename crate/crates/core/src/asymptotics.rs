//! Small-time and large-time behaviour of the kernel, and the closed-form
//! Gaussian integrals used to bound its tail.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::kernel::{evaluate_scaled, KernelQuery, QuadratureConfig};
use crate::special::{erfc, erfcx};
use crate::sweep::{map_ordered, Execution};
use crate::tcheb::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Ratio `K t^{3/2} e^{r^2/4t}` as `t -> 0`.
    SmallT,
    /// Ratio `K e^{t/4} t^{3/2}` as `t -> inf`.
    LargeT,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub regime: Regime,
    pub r: f64,
    pub k: Weight,
    /// `(t, ratio)` in grid order.
    pub samples: Vec<(f64, f64)>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub verdict: bool,
}

/// Allowed growth of the maximum ratio over the reference (first) sample.
pub const RATIO_GROWTH_LIMIT: f64 = 10.0;
/// Allowed step-to-step increase over the last three samples.
pub const STABILISATION_BAND: f64 = 0.05;

/// `t = 10^{-1}, 10^{-1.5}, ..., 10^{-4}`.
pub fn default_small_t_grid() -> Vec<f64> {
    (0..7).map(|i| 10f64.powf(-1.0 - 0.5 * i as f64)).collect()
}

pub fn default_large_t_grid() -> Vec<f64> {
    vec![10.0, 20.0, 50.0, 100.0, 200.0]
}

/// Bounded-ratio criterion. The first sample is the reference; the maximum
/// may not exceed `RATIO_GROWTH_LIMIT` times it, and over the last three
/// samples each step stays within `STABILISATION_BAND` or the steps shrink.
fn ratios_bounded(ratios: &[f64]) -> bool {
    if ratios.is_empty() || ratios.iter().any(|r| !r.is_finite()) {
        return false;
    }
    let reference = ratios[0];
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    if max > RATIO_GROWTH_LIMIT * reference {
        return false;
    }
    // the last three samples either stay within the band or approach a
    // limit with shrinking increments
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let banded = tail
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + STABILISATION_BAND));
    let steps: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    let settling = steps.len() == 2 && steps[1] < steps[0];
    banded || settling
}

fn build_report(regime: Regime, r: f64, k: Weight, samples: Vec<(f64, f64)>) -> AsymptoticReport {
    let ratios: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let ratio_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    AsymptoticReport {
        regime,
        r,
        k,
        verdict: ratios_bounded(&ratios),
        samples,
        ratio_min,
        ratio_max,
    }
}

fn ln_ratios(
    r: f64,
    k: Weight,
    grid: &[f64],
    cfg: &QuadratureConfig,
    regime: Regime,
) -> Result<Vec<(f64, f64)>> {
    let results = map_ordered(grid, Execution::Parallel, |&t| {
        let q = KernelQuery::new(t, r, k)?;
        let ev = evaluate_scaled(&q, cfg)?;
        // K = e^{-t/4 - r^2/4t} (4 pi t)^{-3/2} J, J = e^{shift} * integral
        let ln_j = ev.integral.ln() + ev.shift;
        let ln_ratio = match regime {
            Regime::SmallT => ln_j - t / 4.0 - 1.5 * (4.0 * PI).ln(),
            Regime::LargeT => ln_j - r * r / (4.0 * t) - 1.5 * (4.0 * PI).ln(),
        };
        Ok((t, ln_ratio.exp()))
    });
    results.into_iter().collect()
}

/// Ratios `K(t, r) t^{3/2} e^{r^2/4t}` on a descending grid of small times.
pub fn check_small_t(
    r: f64,
    k: Weight,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<AsymptoticReport> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0)) {
        return domain("small-t grid must be non-empty and positive");
    }
    if t_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return domain("small-t grid must be strictly descending");
    }
    let samples = ln_ratios(r, k, t_grid, cfg, Regime::SmallT)?;
    Ok(build_report(Regime::SmallT, r, k, samples))
}

/// Ratios `K(t, r) e^{t/4} t^{3/2}` on an ascending grid of times `>= 10`.
pub fn check_large_t(
    r: f64,
    k: Weight,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<AsymptoticReport> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t >= 10.0) || !t.is_finite()) {
        return domain("large-t grid must be non-empty with every t >= 10");
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("large-t grid must be strictly ascending");
    }
    let samples = ln_ratios(r, k, t_grid, cfg, Regime::LargeT)?;
    Ok(build_report(Regime::LargeT, r, k, samples))
}

/// `1 - sqrt(pi) z erfcx(z)` for `z >= 0`, without cancellation for large `z`.
fn mills_complement(z: f64) -> f64 {
    if z < 8.0 {
        return 1.0 - PI.sqrt() * z * erfcx(z);
    }
    // sum_{n>=1} (-1)^{n+1} (2n-1)!! / (2z^2)^n
    let inv = 1.0 / (2.0 * z * z);
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..200 {
        let next = term * (2 * n - 1) as f64 * inv;
        if next > term && n > 1 {
            break;
        }
        term = next;
        sum += if n % 2 == 1 { term } else { -term };
        if term < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `ln int_U^inf u e^{-a u^2 + b u} du` for `a > 0`, `U >= 0`.
pub(crate) fn ln_gaussian_tail(a: f64, b: f64, cut: f64) -> f64 {
    let sa = a.sqrt();
    let z = sa * cut - b / (2.0 * sa);
    let half_sqrt_pi_over_sa = 0.5 * PI.sqrt() / sa;
    if z >= 0.0 {
        // e^{-aU^2+bU} [ (1 - sqrt(pi) z erfcx z) / 2a + U sqrt(pi)/(2 sqrt a) erfcx z ]
        let bracket = mills_complement(z) / (2.0 * a) + cut * half_sqrt_pi_over_sa * erfcx(z);
        -a * cut * cut + b * cut + bracket.ln()
    } else {
        // e^{b^2/4a} [ e^{-z^2} / 2a + (b/2a) sqrt(pi)/(2 sqrt a) erfc z ], all terms positive
        let m = b / (2.0 * a);
        let bracket = (-z * z).exp() / (2.0 * a) + m * half_sqrt_pi_over_sa * erfc(z);
        b * b / (4.0 * a) + bracket.ln()
    }
}

/// `int_U^inf u e^{-a u^2 + b u} du` in closed form.
pub fn gaussian_tail_closed_form(a: f64, b: f64, cut: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("Gaussian tail needs a > 0, got {a}"));
    }
    if !(cut >= 0.0) || !b.is_finite() {
        return domain(format!(
            "Gaussian tail needs U >= 0 and finite b, got U = {cut}, b = {b}"
        ));
    }
    Ok(ln_gaussian_tail(a, b, cut).exp())
}

/// Parabolic cylinder function `D_{-2}(z) = e^{-z^2/4} int_0^inf x e^{-x^2/2 - z x} dx`.
///
/// Closed form: `D_{-2}(z) = e^{-z^2/4} (1 - z sqrt(pi/2) e^{z^2/2} erfc(z / sqrt 2))`.
pub fn parabolic_cylinder_d_minus2(z: f64) -> f64 {
    if z >= 0.0 {
        (-z * z / 4.0).exp() * mills_complement(z / std::f64::consts::SQRT_2)
    } else {
        (-z * z / 4.0).exp()
            + (-z) * (PI / 2.0).sqrt() * (z * z / 4.0).exp() * erfc(z / std::f64::consts::SQRT_2)
    }
}

/// Large-`t` majorant of the far part of the kernel integral:
/// `int_0^inf u e^{-u^2/4t + b u} du = 2t e^{t b^2 / 2} D_{-2}(-sqrt(2t) b)`.
pub fn gaussian_moment_via_d_minus2(t: f64, b: f64) -> f64 {
    2.0 * t * (t * b * b / 2.0).exp() * parabolic_cylinder_d_minus2(-(2.0 * t).sqrt() * b)
}
