//! Named verification batteries.
//!
//! Every suite is deterministic: grids are fixed and quasi-random samples come
//! from an additive-recurrence sequence whose seed is recorded in the report.
//! Suites belong to one of the groups listed in [`SuiteGroup`]; the CLI
//! filters on the group.

use std::fmt;

use crate::asymptotics::{
    check_large_t, check_small_t, default_large_t_grid, default_small_t_grid,
    gaussian_moment_via_d_minus2, gaussian_tail_closed_form, parabolic_cylinder_d_minus2,
    AsymptoticReport,
};
use crate::error::{HeatError, Result};
use crate::hyperbolic::radial_integral;
use crate::integrand::{
    fay_bracket_original, h_closed_form, theta_relation_residual, IntegrandPoint,
};
use crate::kernel::{eval_kernel, tail_bound, EvalReport, KernelQuery, QuadratureConfig};
use crate::quadrature::{integrate, uniform_breakpoints, Tolerance};
use crate::special::ln_sinh;
use crate::sweep::{map_ordered, Execution};
use crate::tcheb::{self, arcosh, chebyshev_reference, t2k, t2k_prime_theta, Weight};

/// Seed (starting index) of the quasi-random sequences used by the suites.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: String,
    pub cases_run: usize,
    pub worst_residual: f64,
    pub worst_case_input: String,
    pub passed: bool,
    /// Pass threshold for `worst_residual` (`-inf`..=`tolerance`).
    pub tolerance: f64,
    pub seed: Option<u64>,
}

impl CheckReport {
    /// Group name, i.e. the part of `suite` before the first dot.
    pub fn group(&self) -> &str {
        self.suite.split('.').next().unwrap_or(&self.suite)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SUITE {} {} worst={:.16e} at={}",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst_residual,
            self.worst_case_input
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteGroup {
    Tcheb,
    Bracket,
    Kernel,
    Monotone,
    Asymptotics,
    Tails,
}

impl SuiteGroup {
    pub const ALL: [SuiteGroup; 6] = [
        SuiteGroup::Tcheb,
        SuiteGroup::Bracket,
        SuiteGroup::Kernel,
        SuiteGroup::Monotone,
        SuiteGroup::Asymptotics,
        SuiteGroup::Tails,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteGroup::Tcheb => "tcheb",
            SuiteGroup::Bracket => "bracket",
            SuiteGroup::Kernel => "kernel",
            SuiteGroup::Monotone => "monotone",
            SuiteGroup::Asymptotics => "asymptotics",
            SuiteGroup::Tails => "tails",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }
}

/// Additive-recurrence (Kronecker) low-discrepancy sequence in `[0, 1)^d`
/// using the generalised golden ratio for dimension `d`.
#[derive(Debug, Clone)]
pub struct QuasiRandom {
    alpha: Vec<f64>,
    index: u64,
}

impl QuasiRandom {
    pub fn new(dim: usize, seed: u64) -> Self {
        // phi_d is the positive root of x^{d+1} = x + 1
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim)
            .map(|j| (1.0 / phi.powi(j as i32)).fract())
            .collect();
        QuasiRandom { alpha, index: seed }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        let n = self.index as f64;
        self.alpha.iter().map(|a| (0.5 + a * n).fract()).collect()
    }
}

/// Running worst case for a suite.
struct Worst {
    residual: f64,
    input: String,
    cases: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            residual: f64::NEG_INFINITY,
            input: String::from("-"),
            cases: 0,
        }
    }

    fn record(&mut self, residual: f64, input: impl FnOnce() -> String) {
        self.cases += 1;
        // NaN counts as worst
        if (residual.is_nan() || residual > self.residual) && !self.residual.is_nan() {
            self.residual = residual;
            self.input = input();
        }
    }

    fn finish(self, suite: &str, tolerance: f64, seed: Option<u64>) -> CheckReport {
        let passed = self.cases > 0 && self.residual <= tolerance;
        CheckReport {
            suite: suite.to_string(),
            cases_run: self.cases,
            worst_residual: self.residual,
            worst_case_input: self.input,
            passed,
            tolerance,
            seed,
        }
    }
}

fn failed(suite: &str, err: HeatError) -> CheckReport {
    CheckReport {
        suite: suite.to_string(),
        cases_run: 0,
        worst_residual: f64::NAN,
        worst_case_input: format!("error: {err}"),
        passed: false,
        tolerance: f64::NAN,
        seed: None,
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn w(k: f64) -> Weight {
    Weight::new(k).expect("suite weights are finite")
}

// ---------------------------------------------------------------------------
// tcheb

pub fn chebyshev_reduction() -> CheckReport {
    let mut worst = Worst::new();
    for n in 0..=8u32 {
        let k = w(n as f64 / 2.0);
        for i in 0..1000 {
            let x = 1.0 + 19.0 * i as f64 / 999.0;
            let residual = match t2k(x, k) {
                Ok(v) => (v - 2.0 * chebyshev_reference(x, n)).abs() / v,
                Err(_) => f64::NAN,
            };
            worst.record(residual, || format!("(x={x}, 2k={n})"));
        }
    }
    worst.finish("tcheb.reduction", 1e-12, None)
}

const TCHEB_WEIGHTS: [f64; 9] = [-5.5, -3.0, -0.7, -0.1, 0.0, 0.25, 1.0, 2.5, 4.2];

fn x_grid() -> Vec<f64> {
    (0..400)
        .map(|i| {
            let dx = 1e-8 * ((1e10f64).powf(i as f64 / 399.0) - 1.0);
            1.0 + dx
        })
        .collect()
}

pub fn t2k_lower_bound() -> CheckReport {
    let mut worst = Worst::new();
    for &kv in &TCHEB_WEIGHTS {
        for &x in &x_grid() {
            let residual = t2k(x, w(kv)).map(|v| 2.0 - v).unwrap_or(f64::NAN);
            worst.record(residual, || format!("(x={x}, k={kv})"));
        }
    }
    worst.finish("tcheb.lower_bound", 0.0, None)
}

pub fn t2k_weight_symmetry() -> CheckReport {
    let mut worst = Worst::new();
    for &kv in &TCHEB_WEIGHTS {
        for &x in &x_grid() {
            let residual = match (t2k(x, w(kv)), t2k(x, w(-kv))) {
                (Ok(a), Ok(b)) => (a - b).abs(),
                _ => f64::NAN,
            };
            worst.record(residual, || format!("(x={x}, k={kv})"));
        }
    }
    worst.finish("tcheb.weight_symmetry", 0.0, None)
}

pub fn t2k_monotone() -> CheckReport {
    let mut worst = Worst::new();
    let xs = x_grid();
    for &kv in &TCHEB_WEIGHTS {
        for pair in xs.windows(2) {
            let residual = match (t2k(pair[0], w(kv)), t2k(pair[1], w(kv))) {
                (Ok(a), Ok(b)) => (a - b) / a,
                _ => f64::NAN,
            };
            worst.record(residual, || format!("(x={}..{}, k={kv})", pair[0], pair[1]));
        }
    }
    worst.finish("tcheb.monotone", 0.0, None)
}

pub fn t2k_derivative() -> CheckReport {
    let mut worst = Worst::new();
    for &kv in &[-3.0, -0.7, 0.25, 1.0, 2.5] {
        for i in 0..60 {
            let dx = 1e-3 * (5e4f64).powf(i as f64 / 59.0);
            let x = 1.0 + dx;
            let h = 1e-6 * dx.min(1.0);
            let residual = match (
                tcheb::t2k_prime(x, w(kv)),
                t2k(x + h, w(kv)),
                t2k(x - h, w(kv)),
            ) {
                (Ok(d), Ok(p), Ok(m)) => rel_diff((p - m) / (2.0 * h), d),
                _ => f64::NAN,
            };
            worst.record(residual, || format!("(x={x}, k={kv})"));
        }
    }
    worst.finish("tcheb.derivative", 1e-6, None)
}

pub fn t2k_growth_bound() -> CheckReport {
    let mut worst = Worst::new();
    let mut seq = QuasiRandom::new(3, DEFAULT_SEED);
    for _ in 0..2000 {
        let p = seq.next_point();
        let r = 6.0 * p[0];
        let u = r + 20.0 * p[1] + 1e-9;
        let kv = -3.0 + 6.0 * p[2];
        let x = ((0.5 * u).cosh() / (0.5 * r).cosh()).max(1.0);
        let bound = 2f64.powf(2.0 * kv.abs() + 2.0) * (kv.abs() * u).exp();
        let residual = t2k(x, w(kv)).map(|v| v / bound).unwrap_or(f64::NAN);
        worst.record(residual, || format!("(u={u}, r={r}, k={kv})"));
    }
    worst.finish("tcheb.growth_bound", 1.0, Some(DEFAULT_SEED))
}

// ---------------------------------------------------------------------------
// bracket

/// Sampling box for the bracket comparison: `r in [0.1, 3]`, `u - r in (0, 3]`,
/// `|k| <= 3`. The unsimplified form cancels like `e^{2u} / sinh^2 r`, which
/// bounds the box for double precision.
pub const BRACKET_R_RANGE: (f64, f64) = (0.1, 3.0);
pub const BRACKET_GAP_MAX: f64 = 3.0;

/// Simplified-vs-unsimplified bracket over `samples` quasi-random points,
/// with the simplified form evaluated through `t2k_fn`.
pub fn bracket_equivalence_with(
    t2k_fn: fn(f64, Weight) -> Result<f64>,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let mut worst = Worst::new();
    let mut seq = QuasiRandom::new(3, seed);
    let (r_lo, r_hi) = BRACKET_R_RANGE;
    for _ in 0..samples {
        let p = seq.next_point();
        let r = r_lo + (r_hi - r_lo) * p[0];
        let u = r + BRACKET_GAP_MAX * p[1].max(1e-6);
        let kv = -3.0 + 6.0 * p[2];
        let x = ((0.5 * u).cosh() / (0.5 * r).cosh()).max(1.0);
        let residual = match (fay_bracket_original(u, r, w(kv)), t2k_fn(x, w(kv))) {
            (Ok(a), Ok(b)) => rel_diff(a, b),
            _ => f64::NAN,
        };
        worst.record(residual, || format!("(u={u}, r={r}, k={kv})"));
    }
    worst.finish("bracket.equivalence", 1e-10, Some(seed))
}

pub fn bracket_equivalence() -> CheckReport {
    bracket_equivalence_with(t2k, 10_000, DEFAULT_SEED)
}

pub fn theta_relation() -> CheckReport {
    let mut worst = Worst::new();
    let mut seq = QuasiRandom::new(2, DEFAULT_SEED);
    for _ in 0..2000 {
        let p = seq.next_point();
        let r = 0.05 + 4.0 * p[0];
        let u = r + 1e-3 + 5.0 * p[1];
        let residual = theta_relation_residual(u, r)
            .map(|(a, b)| a.abs().max(b.abs()))
            .unwrap_or(f64::NAN);
        worst.record(residual, || format!("(u={u}, r={r})"));
    }
    worst.finish("bracket.theta_relation", 1e-12, Some(DEFAULT_SEED))
}

/// `-e^{-t/4} int e^{-t y^2 - i u y} y dy` by composite Simpson on
/// `|y| <= 12 / sqrt(t)`; returns `(real, imaginary)` parts.
pub fn h_oscillatory_oracle(u: f64, t: f64) -> (f64, f64) {
    let half = 12.0 / t.sqrt();
    let panels = ((20_000.0 / t.sqrt()).ceil() as usize).max(2000) * 2;
    let h = 2.0 * half / panels as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..=panels {
        let y = -half + h * i as f64;
        let weight = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = y * (-t * y * y).exp() * weight;
        re += g * (u * y).cos();
        im -= g * (u * y).sin();
    }
    let scale = -(-t / 4.0).exp() * h / 3.0;
    (scale * re, scale * im)
}

pub const H_GRID_U: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];
pub const H_GRID_T: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 5.0];

pub fn h_identity() -> CheckReport {
    let mut worst = Worst::new();
    for &u in &H_GRID_U {
        for &t in &H_GRID_T {
            let (re, im) = h_oscillatory_oracle(u, t);
            let residual = match h_closed_form(u, t) {
                Ok(h) => rel_diff(im, h).max(re.abs() / h),
                Err(_) => f64::NAN,
            };
            worst.record(residual, || format!("(u={u}, t={t})"));
        }
    }
    worst.finish("bracket.h_identity", 1e-8, None)
}

// ---------------------------------------------------------------------------
// kernel

fn kernel_value(t: f64, r: f64, k: f64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    eval_kernel(&KernelQuery::new(t, r, w(k))?, cfg)
}

/// `2 pi int_0^inf K(t, r) sinh r dr`.
pub fn heat_mass(t: f64, k: Weight, cfg: &QuadratureConfig) -> Result<f64> {
    let cut = 2.0 * t + 30.0 * t.sqrt() + 10.0;
    let mut failure = None;
    let mass = radial_integral(
        |r| match eval_kernel(&KernelQuery::new(t, r, k).expect("valid query"), cfg) {
            Ok(rep) => rep.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        cut,
        cfg,
    );
    match failure {
        Some(e) => Err(e),
        None => mass,
    }
}

pub const HEAT_MASS_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

pub fn heat_mass_weight_zero(cfg: &QuadratureConfig) -> CheckReport {
    let mut worst = Worst::new();
    for &t in &HEAT_MASS_TIMES {
        let residual = heat_mass(t, w(0.0), cfg)
            .map(|m| (m - 1.0).abs())
            .unwrap_or(f64::NAN);
        worst.record(residual, || format!("(t={t}, k=0)"));
    }
    worst.finish("kernel.heat_mass", 1e-6 + 2.0 * cfg.rel_tol, None)
}

/// Heat mass for nonzero weights. Reported only: the residual is `mass - 1`.
pub fn heat_mass_nonzero_weight(cfg: &QuadratureConfig) -> CheckReport {
    let mut worst = Worst::new();
    for &kv in &[0.25, 0.5, 1.0] {
        let residual = heat_mass(1.0, w(kv), cfg)
            .map(|m| m - 1.0)
            .unwrap_or(f64::NAN);
        worst.record(residual, || format!("(t=1, k={kv})"));
    }
    let mut report = worst.finish("kernel.heat_mass_weighted", f64::INFINITY, None);
    report.passed = report.worst_residual.is_finite();
    report
}

const KERNEL_TIMES: [f64; 4] = [0.05, 0.5, 3.0, 20.0];
const KERNEL_DISTANCES: [f64; 5] = [0.0, 0.1, 1.0, 3.0, 8.0];
const KERNEL_WEIGHTS: [f64; 5] = [0.0, 0.3, 1.0, 1.7, 2.7];

fn kernel_grid() -> Vec<(f64, f64, f64)> {
    let mut v = Vec::new();
    for &t in &KERNEL_TIMES {
        for &r in &KERNEL_DISTANCES {
            for &k in &KERNEL_WEIGHTS {
                v.push((t, r, k));
            }
        }
    }
    v
}

pub fn kernel_weight_symmetry(cfg: &QuadratureConfig) -> CheckReport {
    let grid = kernel_grid();
    let residuals = map_ordered(&grid, Execution::Parallel, |&(t, r, k)| {
        match (kernel_value(t, r, k, cfg), kernel_value(t, r, -k, cfg)) {
            (Ok(a), Ok(b)) => rel_diff(a.value, b.value),
            _ => f64::NAN,
        }
    });
    let mut worst = Worst::new();
    for (&(t, r, k), res) in grid.iter().zip(residuals) {
        worst.record(res, || format!("(t={t}, r={r}, k={k})"));
    }
    worst.finish("kernel.weight_symmetry", 1e-12, None)
}

/// Residual `-value / (error + tail)`: negative when the value is positive.
pub fn kernel_positivity(cfg: &QuadratureConfig) -> CheckReport {
    let grid = kernel_grid();
    let residuals = map_ordered(&grid, Execution::Parallel, |&(t, r, k)| {
        kernel_value(t, r, k, cfg)
            .map(|rep| if rep.value > 0.0 { -1.0 } else { 1.0 })
            .unwrap_or(f64::NAN)
    });
    let mut worst = Worst::new();
    for (&(t, r, k), res) in grid.iter().zip(residuals) {
        worst.record(res, || format!("(t={t}, r={r}, k={k})"));
    }
    worst.finish("kernel.positivity", 0.0, None)
}

/// Halving `rel_tol` moves the value by at most the previously reported
/// error plus tail bound. Residual is `|v2 - v1| / (err1 + tail1)`.
pub fn kernel_tolerance_honesty(cfg: &QuadratureConfig) -> CheckReport {
    let grid = kernel_grid();
    let tighter = QuadratureConfig {
        rel_tol: cfg.rel_tol / 2.0,
        tail_rel_tol: cfg.tail_rel_tol / 2.0,
        ..*cfg
    };
    let residuals = map_ordered(&grid, Execution::Parallel, |&(t, r, k)| {
        match (kernel_value(t, r, k, cfg), kernel_value(t, r, k, &tighter)) {
            (Ok(a), Ok(b)) => {
                let budget = a.error_estimate + a.tail_bound;
                let moved = (a.value - b.value).abs();
                if moved == 0.0 {
                    0.0
                } else {
                    moved / budget
                }
            }
            _ => f64::NAN,
        }
    });
    let mut worst = Worst::new();
    for (&(t, r, k), res) in grid.iter().zip(residuals) {
        worst.record(res, || format!("(t={t}, r={r}, k={k})"));
    }
    worst.finish("kernel.tolerance_honesty", 1.0, None)
}

// ---------------------------------------------------------------------------
// monotone

/// Strict decrease of `K(t, .)` on an ascending grid, with margins larger
/// than the reported errors. Residual is the largest
/// `(K_{i+1} - K_i + budget_i + budget_{i+1}) / K_i`, which must be negative.
pub fn check_monotone_r(
    t: f64,
    k: Weight,
    r_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    if r_grid.len() < 3 {
        return crate::error::domain("monotonicity grid needs at least three points");
    }
    if r_grid.windows(2).any(|p| !(p[1] > p[0])) || !(r_grid[0] > 0.0) {
        return crate::error::domain("monotonicity grid must be positive and strictly ascending");
    }
    let reports: Vec<Result<EvalReport>> = map_ordered(r_grid, Execution::Parallel, |&r| {
        eval_kernel(&KernelQuery::new(t, r, k)?, cfg)
    });
    let reports: Vec<EvalReport> = reports.into_iter().collect::<Result<_>>()?;
    let mut worst = Worst::new();
    for (i, pair) in reports.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let budget = a.error_estimate + a.tail_bound + b.error_estimate + b.tail_bound;
        let residual = if a.underflow || b.underflow {
            f64::NAN
        } else {
            (b.value - a.value + budget) / a.value
        };
        worst.record(residual, || {
            format!("(t={t}, k={k}, r={}..{})", r_grid[i], r_grid[i + 1])
        });
    }
    let mut rep = worst.finish(&format!("monotone.r[t={t},k={k}]"), 0.0, None);
    rep.passed = rep.passed && rep.worst_residual < 0.0;
    Ok(rep)
}

pub const MONOTONE_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
pub const MONOTONE_WEIGHTS: [f64; 7] = [0.0, 0.5, -0.5, 1.0, -1.0, 2.4, -2.4];

/// 30 equally spaced distances in `[0.1, 5]`.
pub fn monotone_r_grid() -> Vec<f64> {
    (0..30).map(|i| 0.1 + 4.9 * i as f64 / 29.0).collect()
}

pub fn monotone_battery(cfg: &QuadratureConfig) -> Vec<CheckReport> {
    let cases: Vec<(f64, f64)> = MONOTONE_TIMES
        .iter()
        .flat_map(|&t| MONOTONE_WEIGHTS.iter().map(move |&k| (t, k)))
        .collect();
    let grid = monotone_r_grid();
    cases
        .iter()
        .map(|&(t, kv)| {
            check_monotone_r(t, w(kv), &grid, cfg)
                .unwrap_or_else(|e| failed(&format!("monotone.r[t={t},k={kv}]"), e))
        })
        .collect()
}

/// A real number as sign and log-magnitude.
#[derive(Debug, Clone, Copy)]
struct Signed {
    sign: f64,
    ln_abs: f64,
}

impl Signed {
    fn from_factors(factors: &[f64], ln_extra: f64) -> Self {
        let mut sign = 1.0;
        let mut ln_abs = ln_extra;
        for &f in factors {
            if f == 0.0 {
                return Signed {
                    sign: 0.0,
                    ln_abs: f64::NEG_INFINITY,
                };
            }
            sign *= f.signum();
            ln_abs += f.abs().ln();
        }
        Signed { sign, ln_abs }
    }

    fn add(self, other: Signed) -> Signed {
        if self.sign == 0.0 {
            return other;
        }
        if other.sign == 0.0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            Signed {
                sign: big.sign,
                ln_abs: big.ln_abs + ratio.ln_1p(),
            }
        } else if ratio == 1.0 {
            Signed {
                sign: 0.0,
                ln_abs: f64::NEG_INFINITY,
            }
        } else {
            Signed {
                sign: big.sign,
                ln_abs: big.ln_abs + (-ratio).ln_1p(),
            }
        }
    }
}

/// Both summands of
/// `sinh u dF/dr + sinh r dF/du = sinh r (1/u - u/2t - coth u) F + T'(x) (...) (cosh^2(r/2) - cosh^2(u/2))`
/// with `F = u e^{-u^2/4t} T_{2k}(x) / sinh u`, in sign/log form.
fn bracket4_terms(p: &IntegrandPoint, k: Weight) -> Result<(Signed, Signed)> {
    let (u, r, t) = (p.u(), p.r(), p.t());
    let gauss = -u * u / (4.0 * t);
    let theta = p.theta();
    let ln_f = u.ln() + gauss + tcheb::ln_t2k_theta(theta, k) - ln_sinh(u);
    let factor = 1.0 / u - u / (2.0 * t) - 1.0 / u.tanh();
    let first = Signed::from_factors(&[r.sinh(), factor], ln_f);
    let d = t2k_prime_theta(theta, p.sinh_theta(), k)?;
    let (ch_r, ch_u) = ((0.5 * r).cosh(), (0.5 * u).cosh());
    let second = Signed::from_factors(
        &[
            d,
            u,
            (0.5 * r).sinh(),
            1.0 / (2.0 * ch_u * ch_r * ch_r),
            ch_r * ch_r - ch_u * ch_u,
        ],
        gauss,
    );
    Ok((first, second))
}

/// Sign conditions at `u_samples`. Residual per sample is `+1` if any sign
/// condition fails, otherwise the normalised sum `(a + b) / (|a| + |b|)`.
pub fn check_integrand_inequality(
    t: f64,
    r: f64,
    k: Weight,
    u_samples: &[f64],
) -> Result<CheckReport> {
    let mut worst = Worst::new();
    for &u in u_samples {
        let p = IntegrandPoint::new(u, r, t)?;
        worst.record(integrand_residual(&p, k)?, || {
            format!("(t={t}, r={r}, u={u}, k={k})")
        });
    }
    let mut rep = worst.finish("monotone.integrand_inequality", 0.0, None);
    rep.passed = rep.passed && rep.worst_residual < 0.0;
    Ok(rep)
}

fn integrand_residual(p: &IntegrandPoint, k: Weight) -> Result<f64> {
    let (a, b) = bracket4_terms(p, k)?;
    let second_ok = if k.value() == 0.0 {
        b.sign == 0.0
    } else {
        b.sign < 0.0
    };
    if a.sign < 0.0 && second_ok && a.add(b).sign < 0.0 {
        // both summands are non-positive, so (a + b) / (|a| + |b|) = -1
        Ok(-1.0)
    } else {
        Ok(1.0)
    }
}

pub fn integrand_inequality_battery(samples: usize, seed: u64) -> CheckReport {
    let mut worst = Worst::new();
    let mut seq = QuasiRandom::new(4, seed);
    for _ in 0..samples {
        let p = seq.next_point();
        let t = 0.05 + 19.95 * p[0];
        let r = 5.0 * p[1].max(1e-6);
        let u = r + 10.0 * p[2].max(1e-6);
        let kv = -3.0 + 6.0 * p[3];
        let residual = IntegrandPoint::new(u, r, t)
            .and_then(|pt| integrand_residual(&pt, w(kv)))
            .unwrap_or(f64::NAN);
        worst.record(residual, || format!("(t={t}, r={r}, u={u}, k={kv})"));
    }
    let mut rep = worst.finish("monotone.integrand_inequality", 0.0, Some(seed));
    rep.passed = rep.passed && rep.worst_residual < 0.0;
    rep
}

/// `(1/u - u/2t - coth u) + u/2t <= 0`, i.e. `coth u >= 1/u`.
pub fn coth_factor_battery(samples: usize, seed: u64) -> CheckReport {
    let mut worst = Worst::new();
    let mut seq = QuasiRandom::new(2, seed);
    for _ in 0..samples {
        let p = seq.next_point();
        let u = 1e-3 + 30.0 * p[0];
        let t = 0.05 + 19.95 * p[1];
        let factor = 1.0 / u - u / (2.0 * t) - 1.0 / u.tanh();
        worst.record(factor + u / (2.0 * t), || format!("(u={u}, t={t})"));
    }
    worst.finish("monotone.coth_factor", 0.0, Some(seed))
}

/// `I_1(t, r) = int_r^{r+1} u e^{-(u^2-r^2)/4t} T_{2k}(x) / sqrt(2cosh u - 2cosh r) du`,
/// integrated with `u = r + v^2`.
pub fn i1_integral(t: f64, r: f64, k: Weight, cfg: &QuadratureConfig) -> Result<f64> {
    let integrand = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        let u = r + v * v;
        let diff = (0.5 * (u + r)).sinh() * (0.5 * v * v).sinh();
        // du / sqrt(4 diff) = 2v dv / (2 sqrt(diff))
        let x = ((0.5 * u).cosh() / (0.5 * r).cosh()).max(1.0);
        let tk = t2k(x, k).unwrap_or(f64::NAN);
        u * (-(v * v) * (u + r) / (4.0 * t)).exp() * tk * v / diff.sqrt()
    };
    Ok(integrate(
        integrand,
        &uniform_breakpoints(0.0, 1.0, 16),
        Tolerance::new(cfg.rel_tol, 0.0),
        cfg.max_subdivisions,
    )?
    .value)
}

/// Time-independent majorant of `I_1`:
/// `(2 / sqrt(2 (cosh^2(r/2) - 1))) int_1^a arcosh(x cosh(r/2)) T_{2k}(x) / sqrt(x - 1) dx`
/// with `a = cosh((r+1)/2) / cosh(r/2)`, integrated with `x = 1 + w^2`.
pub fn i1_majorant(r: f64, k: Weight, cfg: &QuadratureConfig) -> Result<f64> {
    let c = (0.5 * r).cosh();
    let a = (0.5 * (r + 1.0)).cosh() / c;
    let top = (a - 1.0).sqrt();
    let res = integrate(
        |v: f64| {
            let x = 1.0 + v * v;
            2.0 * arcosh(x * c) * t2k(x, k).unwrap_or(f64::NAN)
        },
        &uniform_breakpoints(0.0, top, 8),
        Tolerance::new(cfg.rel_tol, 0.0),
        cfg.max_subdivisions,
    )?;
    Ok(2.0 / (2.0 * (c * c - 1.0)).sqrt() * res.value)
}

pub const I1_TIMES: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
pub const I1_CASES: [(f64, f64); 4] = [(1.0, 0.0), (0.3, 2.2), (2.0, 1.0), (4.0, -1.5)];

/// `I_1(t, r) <= majorant` on `t_grid`. Residual is the largest ratio.
pub fn check_i1_boundedness(
    t_grid: &[f64],
    r: f64,
    k: Weight,
    cfg: &QuadratureConfig,
) -> Result<CheckReport> {
    if !(r > 0.0) {
        return crate::error::domain(format!("I_1 bound needs r > 0, got {r}"));
    }
    let majorant = i1_majorant(r, k, cfg)?;
    let mut worst = Worst::new();
    for &t in t_grid {
        let ratio = i1_integral(t, r, k, cfg)? / majorant;
        worst.record(ratio, || format!("(t={t}, r={r}, k={k})"));
    }
    Ok(worst.finish(&format!("monotone.i1_bound[r={r},k={k}]"), 1.0, None))
}

// ---------------------------------------------------------------------------
// asymptotics

pub const ASYMPTOTIC_DISTANCES: [f64; 3] = [0.5, 1.0, 2.0];
pub const ASYMPTOTIC_WEIGHTS: [f64; 4] = [0.0, 0.25, 1.0, 2.0];

fn asymptotic_to_check(name: String, rep: Result<AsymptoticReport>) -> CheckReport {
    match rep {
        Ok(a) => {
            let reference = a.samples.first().map(|s| s.1).unwrap_or(f64::NAN);
            let (t_max, _) =
                a.samples
                    .iter()
                    .cloned()
                    .fold((f64::NAN, f64::NEG_INFINITY), |acc, s| {
                        if s.1 > acc.1 {
                            s
                        } else {
                            acc
                        }
                    });
            CheckReport {
                suite: name,
                cases_run: a.samples.len(),
                worst_residual: a.ratio_max / reference,
                worst_case_input: format!("(t={t_max}, r={}, k={})", a.r, a.k),
                passed: a.verdict,
                tolerance: crate::asymptotics::RATIO_GROWTH_LIMIT,
                seed: None,
            }
        }
        Err(e) => failed(&name, e),
    }
}

pub fn asymptotic_battery(cfg: &QuadratureConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for &r in &ASYMPTOTIC_DISTANCES {
        for &kv in &ASYMPTOTIC_WEIGHTS {
            out.push(asymptotic_to_check(
                format!("asymptotics.small_t[r={r},k={kv}]"),
                check_small_t(r, w(kv), &default_small_t_grid(), cfg),
            ));
        }
    }
    for &r in &ASYMPTOTIC_DISTANCES {
        for &kv in &ASYMPTOTIC_WEIGHTS {
            out.push(asymptotic_to_check(
                format!("asymptotics.large_t[r={r},k={kv}]"),
                check_large_t(r, w(kv), &default_large_t_grid(), cfg),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// tails

/// The kernel integrand in `u`, without the prefactor, for `u > r`.
fn raw_integrand(u: f64, r: f64, t: f64, k: Weight) -> f64 {
    let half_sum = 0.5 * (u + r);
    let half_diff = 0.5 * (u - r);
    let ln_den = 0.5 * ((4.0f64).ln() + ln_sinh(half_sum) + ln_sinh(half_diff));
    let x = ((0.5 * u).cosh() / (0.5 * r).cosh()).max(1.0);
    let ln_t = tcheb::ln_t2k(x, k).unwrap_or(f64::NAN);
    (u.ln() - u * u / (4.0 * t) + ln_t - ln_den).exp()
}

/// Brute-force tail `int_U^{end} (kernel integrand) du`.
pub fn brute_tail(r: f64, t: f64, k: Weight, cut: f64, end: f64) -> Result<f64> {
    let pieces = (((end - cut) / (2.0 * t).sqrt()).ceil() as usize).clamp(8, 2000);
    Ok(integrate(
        |u| raw_integrand(u, r, t, k),
        &uniform_breakpoints(cut, end, pieces),
        Tolerance::new(1e-10, 0.0),
        200_000,
    )?
    .value)
}

/// `(r, t, k, U)` samples for tail-bound dominance.
pub const TAIL_CASES: [(f64, f64, f64, f64); 8] = [
    (1.0, 1.0, 2.0, 10.0),
    (1.0, 0.1, 2.0, 6.0),
    (0.0, 1.0, 0.0, 3.0),
    (0.5, 5.0, 0.25, 4.0),
    (2.0, 2.0, -1.5, 5.0),
    (3.0, 10.0, 2.7, 30.0),
    (0.2, 0.5, 1.0, 1.5),
    (5.0, 0.3, -3.0, 7.0),
];

/// Residual is `brute / bound`, at most 1 when the bound dominates.
pub fn tail_dominance() -> CheckReport {
    let mut worst = Worst::new();
    for &(r, t, kv, cut) in &TAIL_CASES {
        let k = w(kv);
        let end = cut + 50.0 + 4.0 * t * kv.abs() + 40.0 * t.sqrt();
        let residual = match (brute_tail(r, t, k, cut, end), tail_bound(r, t, k, cut)) {
            (Ok(b), Ok(bound)) => b / bound,
            _ => f64::NAN,
        };
        worst.record(residual, || format!("(r={r}, t={t}, k={kv}, U={cut})"));
    }
    worst.finish("tails.tail_dominance", 1.0, None)
}

/// Residual is the largest `b(U_{i+1}) / b(U_i)` along increasing cuts.
pub fn tail_monotone() -> CheckReport {
    let mut worst = Worst::new();
    for &(r, t, kv, cut) in &TAIL_CASES {
        let k = w(kv);
        let mut prev = tail_bound(r, t, k, cut).unwrap_or(f64::NAN);
        for i in 1..40 {
            let c = cut + 0.5 * i as f64;
            let cur = tail_bound(r, t, k, c).unwrap_or(f64::NAN);
            if prev == 0.0 && cur == 0.0 {
                break;
            }
            worst.record(cur / prev, || format!("(r={r}, t={t}, k={kv}, U={c})"));
            prev = cur;
        }
    }
    let mut rep = worst.finish("tails.tail_monotone", 1.0, None);
    rep.passed = rep.passed && rep.worst_residual < 1.0;
    rep
}

pub const GAUSSIAN_CASES: [(f64, f64, f64); 6] = [
    (0.25, 1.5, 3.0),
    (1.0, 0.0, 0.0),
    (0.01, -0.5, 2.0),
    (2.0, -3.0, 0.0),
    (0.001, 1.0, 100.0),
    (0.1, 2.5, 1.0),
];

pub fn gaussian_closed_form_suite() -> CheckReport {
    let mut worst = Worst::new();
    for &(a, b, cut) in &GAUSSIAN_CASES {
        let end = cut + 60.0 / a.sqrt() + (b / a).abs();
        let brute = integrate(
            |u| u * (-a * u * u + b * u).exp(),
            &uniform_breakpoints(cut, end, 64),
            Tolerance::new(1e-13, 0.0),
            200_000,
        )
        .map(|i| i.value);
        let residual = match (brute, gaussian_tail_closed_form(a, b, cut)) {
            (Ok(x), Ok(y)) => rel_diff(y, x),
            _ => f64::NAN,
        };
        worst.record(residual, || format!("(a={a}, b={b}, U={cut})"));
    }
    worst.finish("tails.gaussian_closed_form", 1e-10, None)
}

pub const D_MINUS2_POINTS: [f64; 5] = [-3.0, -1.0, 0.0, 1.0, 3.0];

/// `e^{-z^2/4} int_0^inf x e^{-x^2/2 - z x} dx` by quadrature.
pub fn d_minus2_defining_integral(z: f64) -> Result<f64> {
    let end = 40.0 + z.abs() * 2.0;
    let v = integrate(
        |x| x * (-0.5 * x * x - z * x).exp(),
        &uniform_breakpoints(0.0, end, 64),
        Tolerance::new(1e-13, 0.0),
        100_000,
    )?
    .value;
    Ok((-z * z / 4.0).exp() * v)
}

pub fn d_minus2_integral_suite() -> CheckReport {
    let mut worst = Worst::new();
    for &z in &D_MINUS2_POINTS {
        let residual = d_minus2_defining_integral(z)
            .map(|b| rel_diff(parabolic_cylinder_d_minus2(z), b))
            .unwrap_or(f64::NAN);
        worst.record(residual, || format!("(z={z})"));
    }
    worst.finish("tails.d_minus2_integral", 1e-8, None)
}

/// `(y, tolerance)` for the asymptotic ratio checks of `D_{-2}`.
pub const D_MINUS2_ASYMPTOTIC: [(f64, f64); 3] = [(5.0, 0.10), (8.0, 0.02), (12.0, 0.005)];

/// Ratio `D_{-2}(-y) y^2 e^{-y^2/4}` against 1 at `y = 5, 8, 12`, the form in which
/// the large-`t` estimate applies the expansion. Residual is
/// `|ratio - 1| / tolerance(y)`, passing at most 1.
pub fn d_minus2_asymptotic_suite() -> CheckReport {
    let mut worst = Worst::new();
    for &(y, tol) in &D_MINUS2_ASYMPTOTIC {
        let ratio = parabolic_cylinder_d_minus2(-y) * y * y * (-y * y / 4.0).exp();
        worst.record((ratio - 1.0).abs() / tol, || {
            format!("(y={y}, ratio={ratio})")
        });
    }
    worst.finish("tails.d_minus2_asymptotic", 1.0, None)
}

/// `D_{-2}(y) y^2 e^{y^2/4}` against `1 - 3/y^2 + 15/y^4` for positive `y`,
/// where the expansion holds. Residual is the deviation scaled by `y^6 / 105`.
pub fn d_minus2_expansion_suite() -> CheckReport {
    let mut worst = Worst::new();
    for &y in &[5.0f64, 8.0, 12.0, 20.0, 30.0] {
        let ratio = parabolic_cylinder_d_minus2(y) * y * y * (y * y / 4.0).exp();
        let series = 1.0 - 3.0 / (y * y) + 15.0 / y.powi(4);
        worst.record((ratio - series).abs() * y.powi(6) / 105.0, || {
            format!("(y={y}, ratio={ratio})")
        });
    }
    worst.finish("tails.d_minus2_expansion", 1.0, None)
}

/// Far part of the kernel integral, `int_{r+1}^inf u e^{-(u^2-r^2)/4t} T_{2k}(x) / sqrt(...) du`,
/// against its closed-form majorant
/// `C e^{r^2/4t} 2t e^{t b^2/2} D_{-2}(-sqrt(2t) b)` with the explicit constant of the tail bound.
/// Residual is the ratio; the fitted constant is reported in the input field.
pub fn moment_majorant_suite() -> CheckReport {
    let mut worst = Worst::new();
    let mut fitted: f64 = 0.0;
    for &(r, kv) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 1.5), (0.3, 0.8)] {
        for &t in &[1.5, 3.0, 10.0, 30.0] {
            let k = w(kv);
            let b = k.tail_exponent();
            let cut = r + 1.0;
            let end = cut + 60.0 + 4.0 * t * b.max(0.0) + 40.0 * t.sqrt();
            let residual = match brute_tail(r, t, k, cut, end) {
                Ok(i2) => {
                    // brute_tail omits e^{r^2/4t}; compare with the majorant scaled the same way.
                    let moment = gaussian_moment_via_d_minus2(t, b);
                    let growth = (1.0 + (-cut).exp()).powf(2.0 * kv.abs())
                        / (0.5 * r).cosh().powf(2.0 * kv.abs())
                        + (-kv.abs() * cut).exp();
                    let root = 1.0 / (1.0 - 2.0 * r.cosh() * (-cut).exp()).sqrt();
                    fitted = fitted.max(i2 / moment);
                    i2 / (growth * root * moment)
                }
                Err(_) => f64::NAN,
            };
            worst.record(residual, || format!("(t={t}, r={r}, k={kv})"));
        }
    }
    let mut rep = worst.finish("tails.moment_majorant", 1.0, None);
    rep.worst_case_input = format!("{} fitted_constant={fitted:.6e}", rep.worst_case_input);
    rep
}

// ---------------------------------------------------------------------------

type Suite = fn(&QuadratureConfig) -> Vec<CheckReport>;

fn suites(group: SuiteGroup) -> Vec<Suite> {
    match group {
        SuiteGroup::Tcheb => vec![
            |_| vec![chebyshev_reduction()],
            |_| vec![t2k_lower_bound()],
            |_| vec![t2k_weight_symmetry()],
            |_| vec![t2k_monotone()],
            |_| vec![t2k_derivative()],
            |_| vec![t2k_growth_bound()],
        ],
        SuiteGroup::Bracket => vec![
            |_| vec![bracket_equivalence()],
            |_| vec![theta_relation()],
            |_| vec![h_identity()],
        ],
        SuiteGroup::Kernel => vec![
            |c| vec![heat_mass_weight_zero(c)],
            |c| vec![heat_mass_nonzero_weight(c)],
            |c| vec![kernel_weight_symmetry(c)],
            |c| vec![kernel_positivity(c)],
            |c| vec![kernel_tolerance_honesty(c)],
        ],
        SuiteGroup::Monotone => vec![
            monotone_battery,
            |_| vec![integrand_inequality_battery(1000, DEFAULT_SEED)],
            |_| vec![coth_factor_battery(1000, DEFAULT_SEED)],
            |c| {
                I1_CASES
                    .iter()
                    .map(|&(r, kv)| {
                        check_i1_boundedness(&I1_TIMES, r, w(kv), c).unwrap_or_else(|e| {
                            failed(&format!("monotone.i1_bound[r={r},k={kv}]"), e)
                        })
                    })
                    .collect()
            },
        ],
        SuiteGroup::Asymptotics => vec![asymptotic_battery],
        SuiteGroup::Tails => vec![
            |_| vec![tail_dominance()],
            |_| vec![tail_monotone()],
            |_| vec![gaussian_closed_form_suite()],
            |_| vec![d_minus2_integral_suite()],
            |_| vec![d_minus2_asymptotic_suite()],
            |_| vec![d_minus2_expansion_suite()],
            |_| vec![moment_majorant_suite()],
        ],
    }
}

/// Run the suites of the given groups, in group order then suite order.
pub fn run_groups(groups: &[SuiteGroup], cfg: &QuadratureConfig) -> Vec<CheckReport> {
    if let Err(e) = cfg.validate() {
        return vec![failed("config", e)];
    }
    let all: Vec<Suite> = groups.iter().flat_map(|&g| suites(g)).collect();
    map_ordered(&all, Execution::Parallel, |s| s(cfg))
        .into_iter()
        .flatten()
        .collect()
}

/// Every suite of every group.
pub fn run_all(cfg: &QuadratureConfig) -> Vec<CheckReport> {
    run_groups(&SuiteGroup::ALL, cfg)
}
