//! Points of the upper half-plane, hyperbolic distance, and integration of
//! radial functions against the hyperbolic area measure `dx dy / y^2`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::kernel::QuadratureConfig;
use crate::quadrature::{integrate, uniform_breakpoints, Tolerance};

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return domain(format!("point coordinates must be finite, got ({x}, {y})"));
        }
        if y <= 0.0 {
            return domain(format!(
                "point must lie in the upper half-plane, got y = {y}"
            ));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Geodesic distance `arcosh(1 + |z - w|^2 / (2 Im z Im w))`.
///
/// `arcosh(1 + s)` is evaluated as `log1p(s + sqrt(2s + s^2))`, which keeps
/// full relative accuracy for nearby points.
pub fn hyperbolic_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let (a, b) = if (z.x, z.y) <= (w.x, w.y) {
        (z, w)
    } else {
        (w, z)
    };
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let s = (dx * dx + dy * dy) / (2.0 * a.y * b.y);
    (s + (s * (2.0 + s)).sqrt()).ln_1p()
}

/// `2 pi * int_0^tail_cut f(r) sinh(r) dr`, i.e. the integral over the
/// half-plane of a radial function centred anywhere.
///
/// The neglected tail beyond `tail_cut` is the caller's responsibility.
pub fn radial_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    tail_cut: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(tail_cut > 0.0) || !tail_cut.is_finite() {
        return domain(format!(
            "tail cut must be positive and finite, got {tail_cut}"
        ));
    }
    let pieces = (tail_cut.ceil() as usize).clamp(1, 256);
    let res = integrate(
        |r| f(r) * r.sinh(),
        &uniform_breakpoints(0.0, tail_cut, pieces),
        Tolerance::new(cfg.rel_tol, cfg.abs_tol / (2.0 * PI)),
        cfg.max_subdivisions,
    )?;
    Ok(2.0 * PI * res.value)
}
