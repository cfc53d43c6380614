use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Evaluation counts of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounters {
    pub n_iter: usize,
    pub n_f: usize,
    pub n_g: usize,
    /// Hessian evaluations; a finite-difference Hessian counts once.
    pub n_h: usize,
}

impl EvalCounters {
    /// `N_f + 3 N_g`, a gradient costed as three function values.
    pub fn weighted_cost(&self) -> usize {
        self.n_f + 3 * self.n_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    MaxIter,
    LineSearchFail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIter => "MaxIter",
            Status::LineSearchFail => "LineSearchFail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f_k: f64,
    pub g_norm: f64,
    /// Accepted step `s * rho^backtracks` (the last trial when the search failed).
    pub alpha_k: f64,
    pub backtracks: usize,
    /// Reference value used in the Armijo test.
    pub t_k: f64,
    /// Max over the last `min(k, N) + 1` accepted values.
    pub f_lk: f64,
    /// `-g'd / ‖g‖²`, the first direction-quality constant.
    pub descent_ratio: f64,
    /// `‖d‖ / ‖g‖`, the second direction-quality constant.
    pub dir_norm_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Status,
    pub x_b: Vec<f64>,
    pub f_b: f64,
    pub g_norm: f64,
    pub counters: EvalCounters,
    pub trace: Vec<TraceRecord>,
    /// Why the run stopped early, if it did.
    pub diagnostic: Option<String>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}
