//! Discrete error norms against a reference solution.

use nwave_core::grid::discrete_norm;
use nwave_core::{GridFunction, PiecewiseFn};

use crate::error::{CliError, Result};

/// Relative tolerance on the agreement of run and oracle times.
pub const TIME_TOLERANCE: f64 = 1e-9;

/// `‖u_Δ - u‖_{p,Δ}` for `p = 1, 2, ∞` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Samples `oracle` at the cell centres of `u` and takes the discrete norms
/// of the difference. `t_run` and `t_oracle` must agree.
pub fn compare_to_exact(u: &GridFunction, t_run: f64, oracle: &PiecewiseFn, t_oracle: f64) -> Result<ErrorRow> {
    if (t_run - t_oracle).abs() > TIME_TOLERANCE * t_run.abs().max(1.0) {
        return Err(CliError::TimeMismatch { run: t_run, oracle: t_oracle });
    }
    let sampled = GridFunction::from_fn(*u.grid(), |x| oracle.eval(x))?;
    let diff = u.sub(&sampled)?;
    Ok(ErrorRow {
        t: t_run,
        l1: discrete_norm(&diff, 1.0)?,
        l2: discrete_norm(&diff, 2.0)?,
        linf: discrete_norm(&diff, f64::INFINITY)?,
    })
}
