//! Order-preserving batch evaluation, parallel when the `parallel` feature is on.

use crate::error::Result;
use crate::kernel::{eval_kernel, EvalReport, KernelQuery, QuadratureConfig};

/// How a batch is executed. Without the `parallel` feature both variants run
/// sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// `items.iter().map(f).collect()`, with results in input order regardless of
/// completion order.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Evaluate every query; one result per query, in input order.
pub fn evaluate_grid(
    queries: &[KernelQuery],
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Vec<Result<EvalReport>> {
    map_ordered(queries, exec, |q| eval_kernel(q, cfg))
}
