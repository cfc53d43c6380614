//! The outer nonmonotone line-search iteration.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::SolverConfig;
use crate::directions::{hessian, newton_dir, raw_newton_dir, DirectionState};
use crate::error::{Error, Result};
use crate::linesearch::backtrack;
use crate::problem::Problem;
use crate::report::{EvalCounters, SolveResult, Status, TraceRecord};
use crate::terms::TermState;
use crate::vecops::{all_finite, dot, norm};

/// What an observer sees after each accepted iterate (and once at the start).
#[derive(Debug, Clone, Copy)]
pub struct IterateView<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub f: f64,
    pub g_norm: f64,
}

/// Minimizes `problem` from its `x0`.
///
/// Configuration and dimension errors are returned as `Err`; numerical trouble during the
/// run (non-finite values, exhausted backtracking) ends it with
/// [`Status::LineSearchFail`] and a diagnostic.
pub fn solve(problem: &Problem, cfg: &SolverConfig) -> Result<SolveResult> {
    solve_with_observer(problem, cfg, |_| {})
}

pub fn solve_with_observer<F>(problem: &Problem, cfg: &SolverConfig, mut observer: F) -> Result<SolveResult>
where
    F: FnMut(&IterateView<'_>),
{
    cfg.validate()?;
    let n = problem.n();
    if n == 0 {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    let mut x = problem.x0.clone();
    if !all_finite(&x) {
        return Err(Error::Parameter("start point has non-finite entries".into()));
    }

    let mut counters = EvalCounters::default();
    let mut trace = Vec::new();
    let mut f = problem.f(&x);
    counters.n_f += 1;
    let mut g = problem.grad(&x);
    counters.n_g += 1;
    let mut g_norm = norm(&g);

    let stop = |status, x: Vec<f64>, f, g_norm, counters, trace, diagnostic: Option<String>| {
        Ok(SolveResult {
            status,
            x_b: x,
            f_b: f,
            g_norm,
            counters,
            trace,
            diagnostic,
        })
    };

    if !f.is_finite() || !all_finite(&g) {
        let msg = format!("non-finite value or gradient at the start point (f = {f})");
        return stop(Status::LineSearchFail, x, f, g_norm, counters, trace, Some(msg));
    }

    let mut term = TermState::new(cfg.term, cfg.memory, cfg.eta0, f)?;
    let mut dirs = DirectionState::new(cfg.direction, n, cfg.lbfgs_m_cap);
    observer(&IterateView { k: 0, x: &x, f, g_norm });

    let mut k = 0;
    loop {
        if g_norm < cfg.eps || g_norm == 0.0 {
            return stop(Status::Converged, x, f, g_norm, counters, trace, None);
        }
        if k >= cfg.maxiter {
            return stop(Status::MaxIter, x, f, g_norm, counters, trace, None);
        }

        let d = dirs.direction(problem, &x, &g, &mut counters);
        let t_k = term.reference_value();
        let slope = dot(&g, &d);
        let mut record = TraceRecord {
            k,
            f_k: f,
            g_norm,
            alpha_k: 0.0,
            backtracks: 0,
            t_k,
            f_lk: term.f_lk(),
            descent_ratio: -slope / (g_norm * g_norm),
            dir_norm_ratio: norm(&d) / g_norm,
        };

        let ls = match backtrack(problem, &x, t_k, &g, &d, cfg) {
            Ok(ls) => ls,
            Err(e) => {
                trace.push(record);
                let msg = format!("iteration {k}: {e}");
                return stop(Status::LineSearchFail, x, f, g_norm, counters, trace, Some(msg));
            }
        };
        counters.n_f += ls.trials;
        record.alpha_k = ls.alpha;
        record.backtracks = ls.backtracks();
        trace.push(record);
        if ls.failed {
            let msg = format!(
                "iteration {k}: no acceptable step after {} trials (last alpha {:e}, f = {})",
                ls.trials, ls.alpha, ls.f_new
            );
            return stop(Status::LineSearchFail, x, f, g_norm, counters, trace, Some(msg));
        }

        let g_new = problem.grad(&ls.x_new);
        counters.n_g += 1;
        if !all_finite(&g_new) {
            let msg = format!("iteration {k}: non-finite gradient at the accepted point");
            return stop(Status::LineSearchFail, x, f, g_norm, counters, trace, Some(msg));
        }
        dirs.observe_step(&x, &g, &ls.x_new, &g_new);
        term.accept(ls.f_new);
        x = ls.x_new;
        f = ls.f_new;
        g = g_new;
        g_norm = norm(&g);
        k += 1;
        counters.n_iter = k;
        observer(&IterateView { k, x: &x, f, g_norm });
    }
}

/// Which linear system the undamped Newton iteration solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PureNewtonSystem {
    /// `H d = -g` exactly, falling back to the repaired system only when `H` is singular.
    #[default]
    Raw,
    /// The positive-definite repair used by the damped solver.
    Repaired,
}

/// Undamped Newton iteration `x_{k+1} = x_k + d_k` without a line search.
pub fn solve_pure_newton(problem: &Problem, x0: &[f64], eps: f64, maxiter: usize) -> Result<SolveResult> {
    solve_pure_newton_with(problem, x0, eps, maxiter, PureNewtonSystem::default())
}

pub fn solve_pure_newton_with(
    problem: &Problem,
    x0: &[f64],
    eps: f64,
    maxiter: usize,
    system: PureNewtonSystem,
) -> Result<SolveResult> {
    if x0.len() != problem.n() {
        return Err(Error::Dimension {
            expected: problem.n(),
            got: x0.len(),
        });
    }
    let mut counters = EvalCounters::default();
    let mut trace = Vec::new();
    let mut x = x0.to_vec();
    let mut f = problem.f(&x);
    counters.n_f += 1;
    let mut g = problem.grad(&x);
    counters.n_g += 1;
    let mut g_norm = norm(&g);
    let mut k = 0;
    let mut x_new = vec![0.0; x.len()];
    let (status, diagnostic) = loop {
        if !f.is_finite() || !all_finite(&g) {
            break (Status::LineSearchFail, Some(format!("iteration {k}: non-finite value or gradient")));
        }
        if g_norm < eps || g_norm == 0.0 {
            break (Status::Converged, None);
        }
        if k >= maxiter {
            break (Status::MaxIter, None);
        }
        let h = hessian(problem, &x, &g, &mut counters);
        let d = match system {
            PureNewtonSystem::Raw => raw_newton_dir(&h, &g).unwrap_or_else(|| newton_dir(&h, &g).d),
            PureNewtonSystem::Repaired => newton_dir(&h, &g).d,
        };
        trace.push(TraceRecord {
            k,
            f_k: f,
            g_norm,
            alpha_k: 1.0,
            backtracks: 0,
            t_k: f,
            f_lk: f,
            descent_ratio: -dot(&g, &d) / (g_norm * g_norm),
            dir_norm_ratio: norm(&d) / g_norm,
        });
        for ((xn, xi), di) in x_new.iter_mut().zip(&x).zip(&d) {
            *xn = xi + di;
        }
        core::mem::swap(&mut x, &mut x_new);
        f = problem.f(&x);
        counters.n_f += 1;
        g = problem.grad(&x);
        counters.n_g += 1;
        g_norm = norm(&g);
        k += 1;
        counters.n_iter = k;
    };
    Ok(SolveResult {
        status,
        x_b: x,
        f_b: f,
        g_norm,
        counters,
        trace,
        diagnostic,
    })
}
