//! Armijo backtracking against an arbitrary reference value.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::vecops::{dot, step_into};

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome {
    /// Accepted step, or the last step tried when the search failed.
    pub alpha: f64,
    pub x_new: Vec<f64>,
    pub f_new: f64,
    /// Objective evaluations consumed, rejected non-finite trials included.
    pub trials: usize,
    pub failed: bool,
}

impl LineSearchOutcome {
    pub fn backtracks(&self) -> usize {
        self.trials.saturating_sub(1)
    }
}

/// Tries `s, ρs, ρ²s, …` and returns the first step with
/// `f(x + αd) <= f_ref + σ α g'd`.
///
/// The search gives up after `max_backtracks` reductions or once the step drops below
/// `alpha_min`. A non-finite trial value counts as a rejection.
pub fn backtrack(
    problem: &Problem,
    x: &[f64],
    f_ref: f64,
    g: &[f64],
    d: &[f64],
    cfg: &SolverConfig,
) -> Result<LineSearchOutcome> {
    let slope = dot(g, d);
    if !(slope < 0.0) {
        return Err(Error::NotDescent { slope });
    }
    let mut x_new = vec![0.0; x.len()];
    let mut scale = 1.0;
    let mut trials = 0;
    let mut alpha = cfg.s;
    let mut f_new = f64::NAN;
    for _ in 0..=cfg.max_backtracks {
        alpha = cfg.s * scale;
        if alpha < cfg.alpha_min {
            break;
        }
        step_into(&mut x_new, x, alpha, d);
        f_new = problem.f(&x_new);
        trials += 1;
        if f_new.is_finite() && f_new <= f_ref + cfg.sigma * alpha * slope {
            return Ok(LineSearchOutcome {
                alpha,
                x_new,
                f_new,
                trials,
                failed: false,
            });
        }
        scale *= cfg.rho;
    }
    Ok(LineSearchOutcome {
        alpha,
        x_new,
        f_new,
        trials,
        failed: true,
    })
}
