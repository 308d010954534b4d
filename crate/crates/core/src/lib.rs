//! Heat kernel of the weighted Maass-Laplacian
//! `D_k = -y^2 (d_xx + d_yy) + 2 i k y d_x` on the upper half-plane, for any
//! real weight `k`, together with numerical verification suites for its
//! closed form, monotonicity in the distance and behaviour in time.
//!
//! ```
//! use hyperbolic_heat::{eval_kernel, KernelQuery, QuadratureConfig, Weight};
//!
//! let q = KernelQuery::new(1.0, 0.5, Weight::new(0.75)?)?;
//! let report = eval_kernel(&q, &QuadratureConfig::default())?;
//! assert!(report.value > 0.0);
//! assert!(report.error_estimate + report.tail_bound <= 1e-10 * report.value);
//! # Ok::<(), hyperbolic_heat::HeatError>(())
//! ```

// `!(x > 0.0)` is the NaN-rejecting guard used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod checks;
pub mod cli;
pub mod error;
pub mod hyperbolic;
pub mod integrand;
pub mod kernel;
pub mod quadrature;
pub mod special;
pub mod sweep;
pub mod tcheb;

pub use asymptotics::{
    check_large_t, check_small_t, gaussian_tail_closed_form, parabolic_cylinder_d_minus2,
    AsymptoticReport, Regime,
};
pub use checks::{run_all, CheckReport};
pub use error::{HeatError, Result};
pub use hyperbolic::{hyperbolic_distance, radial_integral, HalfPlanePoint};
pub use integrand::{
    fay_bracket_original, h_closed_form, i_k_simplified, theta_relation_residual, IntegrandPoint,
};
pub use kernel::{
    eval_kernel, eval_kernel_points, tail_bound, EvalReport, KernelQuery, QuadratureConfig,
};
pub use sweep::Execution;
pub use tcheb::{chebyshev_reference, t2k, t2k_prime, Weight};
