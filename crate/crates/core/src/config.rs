use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Which reference value the Armijo test compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    /// Plain Armijo: `T_k = f_k`.
    Mono,
    /// Max over the last `min(k, N) + 1` accepted values.
    G,
    /// Zhang–Hager weighted average `C_k` with fixed weight 0.85.
    H,
    /// Relaxed max `η_k f_l(k) + (1 − η_k) f_k`.
    N,
    /// Convex combination of all accepted values `D_k`.
    M,
    /// Windowed convex term, max-based during the first `N` iterations.
    Nm1,
    /// Windowed convex term, convex recursion during the first `N` iterations.
    Nm2,
}

impl TermKind {
    /// The six nonmonotone kinds compared by the benchmark, in benchmark order.
    pub const NONMONOTONE: [TermKind; 6] = [
        TermKind::G,
        TermKind::H,
        TermKind::N,
        TermKind::M,
        TermKind::Nm1,
        TermKind::Nm2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TermKind::Mono => "MONO",
            TermKind::G => "G",
            TermKind::H => "H",
            TermKind::N => "N",
            TermKind::M => "M",
            TermKind::Nm1 => "NM1",
            TermKind::Nm2 => "NM2",
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "MONO" => TermKind::Mono,
            "G" => TermKind::G,
            "H" => TermKind::H,
            "N" | "R" => TermKind::N,
            "M" => TermKind::M,
            "NM1" | "1" => TermKind::Nm1,
            "NM2" | "2" => TermKind::Nm2,
            _ => return Err(Error::Parameter(format!("unknown term kind `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirectionKind {
    Gd,
    Newton,
    Bfgs,
    Lbfgs,
    Bb1,
    Bb2,
}

impl DirectionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DirectionKind::Gd => "GD",
            DirectionKind::Newton => "NEWTON",
            DirectionKind::Bfgs => "BFGS",
            DirectionKind::Lbfgs => "LBFGS",
            DirectionKind::Bb1 => "BB1",
            DirectionKind::Bb2 => "BB2",
        }
    }
}

impl fmt::Display for DirectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DirectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "GD" => DirectionKind::Gd,
            "NEWTON" => DirectionKind::Newton,
            "BFGS" => DirectionKind::Bfgs,
            "LBFGS" => DirectionKind::Lbfgs,
            "BB1" => DirectionKind::Bb1,
            "BB2" => DirectionKind::Bb2,
            _ => return Err(Error::Parameter(format!("unknown direction kind `{s}`"))),
        })
    }
}

/// Tunables of the nonmonotone Armijo solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Backtracking factor, `0 < rho < 1`.
    pub rho: f64,
    /// Sufficient-decrease coefficient, `0 < sigma < 1/2`.
    pub sigma: f64,
    /// Initial trial step, `0 < s <= 1`.
    pub s: f64,
    /// Stop when `‖g_k‖ < eps`.
    pub eps: f64,
    pub maxiter: usize,
    /// Nonmonotone memory.
    pub memory: usize,
    /// Initial weight of the adaptive `η` sequence, `0 <= eta0 < 1`.
    pub eta0: f64,
    pub term: TermKind,
    pub direction: DirectionKind,
    pub lbfgs_m_cap: usize,
    pub max_backtracks: usize,
    pub alpha_min: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 0.5,
            sigma: 0.01,
            s: 1.0,
            eps: 1e-5,
            maxiter: 50_000,
            memory: 10,
            eta0: 0.75,
            term: TermKind::Nm1,
            direction: DirectionKind::Lbfgs,
            lbfgs_m_cap: 10,
            max_backtracks: 60,
            alpha_min: 1e-20,
        }
    }
}

impl SolverConfig {
    /// Defaults tuned per direction family: `σ = 1e-4` and `η₀ = 0.80 / 0.90` for the
    /// Barzilai–Borwein directions, `σ = 0.01` and `η₀ = 0.75` otherwise.
    pub fn new(term: TermKind, direction: DirectionKind) -> Self {
        let (sigma, eta0) = match direction {
            DirectionKind::Bb1 => (1e-4, 0.80),
            DirectionKind::Bb2 => (1e-4, 0.90),
            _ => (0.01, 0.75),
        };
        Self {
            sigma,
            eta0,
            term,
            direction,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Parameter(what.to_string()));
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho must lie in (0, 1)");
        }
        if !(self.sigma > 0.0 && self.sigma < 0.5) {
            return bad("sigma must lie in (0, 1/2)");
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return bad("s must lie in (0, 1]");
        }
        if !(self.eta0 >= 0.0 && self.eta0 < 1.0) {
            return bad("eta0 must lie in [0, 1)");
        }
        if self.memory == 0 {
            return bad("N must be at least 1");
        }
        if !(self.eps >= 0.0) {
            return bad("eps must be nonnegative");
        }
        if self.lbfgs_m_cap == 0 {
            return bad("lbfgs_m_cap must be at least 1");
        }
        if !(self.alpha_min >= 0.0) {
            return bad("alpha_min must be nonnegative");
        }
        Ok(())
    }
}
