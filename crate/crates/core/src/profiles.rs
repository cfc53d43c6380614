//! Dolan–Moré performance profiles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::report::EvalCounters;

/// Cost measure a profile is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Ni,
    Nf,
    Ng,
    /// `N_f + 3 N_g`
    NfPlus3Ng,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Ni, Measure::Nf, Measure::Ng, Measure::NfPlus3Ng];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Ni => "ni",
            Measure::Nf => "nf",
            Measure::Ng => "ng",
            Measure::NfPlus3Ng => "nf3ng",
        }
    }

    /// The measure of one run. `N_i` is floored at 1 so a run that starts at a solution
    /// still has a positive cost.
    pub fn value(self, c: &EvalCounters) -> f64 {
        match self {
            Measure::Ni => c.n_iter.max(1) as f64,
            Measure::Nf => c.n_f as f64,
            Measure::Ng => c.n_g as f64,
            Measure::NfPlus3Ng => c.weighted_cost() as f64,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '+' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "ni" => Measure::Ni,
            "nf" => Measure::Nf,
            "ng" => Measure::Ng,
            "nf3ng" => Measure::NfPlus3Ng,
            _ => return Err(Error::Parameter(format!("unknown measure `{s}`"))),
        })
    }
}

/// Costs `t[p][s]` of every solver on every problem; `None` marks a failed run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchMatrix {
    pub problems: Vec<String>,
    pub solvers: Vec<String>,
    pub t: Vec<Vec<Option<f64>>>,
}

impl BenchMatrix {
    pub fn new(problems: Vec<String>, solvers: Vec<String>, t: Vec<Vec<Option<f64>>>) -> Result<Self> {
        if t.len() != problems.len() {
            return Err(Error::Dimension {
                expected: problems.len(),
                got: t.len(),
            });
        }
        if let Some(row) = t.iter().find(|r| r.len() != solvers.len()) {
            return Err(Error::Dimension {
                expected: solvers.len(),
                got: row.len(),
            });
        }
        if let Some(bad) = t.iter().flatten().flatten().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Parameter(format!("measures must be positive and finite, got {bad}")));
        }
        Ok(Self { problems, solvers, t })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    /// Problems kept, in input order.
    pub problems: Vec<String>,
    pub solvers: Vec<String>,
    /// `r[p][s]`; failed cells hold `r_failed`.
    pub r: Vec<Vec<f64>>,
    pub r_failed: f64,
    /// Problems on which every solver failed.
    pub dropped: Vec<String>,
}

impl RatioTable {
    /// Largest ratio of a run that did not fail.
    pub fn max_finite_ratio(&self) -> f64 {
        self.r_failed / 2.0
    }
}

/// `r[p][s] = t[p][s] / min_s t[p][s]`, with failures mapped to twice the largest
/// finite ratio. Problems where all solvers failed are dropped and listed.
pub fn performance_ratios(m: &BenchMatrix) -> Result<RatioTable> {
    if m.solvers.is_empty() || m.problems.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut problems = Vec::new();
    let mut dropped = Vec::new();
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    for (name, row) in m.problems.iter().zip(&m.t) {
        let best = row.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            problems.push(name.clone());
            rows.push(row.iter().map(|t| t.map(|v| v / best)).collect());
        } else {
            dropped.push(name.clone());
        }
    }
    if problems.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let max_ratio = rows.iter().flatten().flatten().copied().fold(1.0, f64::max);
    let r_failed = 2.0 * max_ratio;
    let r = rows
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.unwrap_or(r_failed)).collect())
        .collect();
    Ok(RatioTable {
        problems,
        solvers: m.solvers.clone(),
        r,
        r_failed,
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    /// `(τ, ρ_s(τ))`
    pub points: Vec<(f64, f64)>,
}

/// `ρ_s(τ)`: fraction of problems with `r[p][s] <= τ`, for each `τ` in `tau_grid`.
pub fn profile_curve(ratios: &RatioTable, solver: usize, tau_grid: &[f64]) -> ProfileCurve {
    let mut col: Vec<f64> = ratios.r.iter().map(|row| row[solver]).collect();
    col.sort_by(f64::total_cmp);
    let n_p = col.len() as f64;
    let points = tau_grid
        .iter()
        .map(|&tau| {
            let count = col.partition_point(|&r| r <= tau);
            (tau, count as f64 / n_p)
        })
        .collect();
    ProfileCurve {
        solver: ratios.solvers[solver].clone(),
        points,
    }
}

/// Every distinct ratio in the table (failures included), sorted; starts at 1.
pub fn tau_grid(ratios: &RatioTable) -> Vec<f64> {
    let mut taus: Vec<f64> = ratios.r.iter().flatten().copied().collect();
    taus.push(1.0);
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    taus
}

pub fn profile_curves(ratios: &RatioTable, tau_grid: &[f64]) -> Vec<ProfileCurve> {
    (0..ratios.solvers.len())
        .map(|s| profile_curve(ratios, s, tau_grid))
        .collect()
}

/// 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with header `solver,tau,rho`, one row per curve point, LF line endings.
pub fn render_profile_csv(curves: &[ProfileCurve]) -> String {
    let mut out = String::from("solver,tau,rho\n");
    for c in curves {
        for (tau, rho) in &c.points {
            let _ = writeln!(out, "{},{},{}", c.solver, format_real(*tau), format_real(*rho));
        }
    }
    out
}

/// Inverse of [`render_profile_csv`].
pub fn parse_profile_csv(text: &str) -> Result<Vec<ProfileCurve>> {
    let mut lines = text.lines();
    if lines.next() != Some("solver,tau,rho") {
        return Err(Error::Parameter("missing `solver,tau,rho` header".into()));
    }
    let mut curves: Vec<ProfileCurve> = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = || Error::Parameter(format!("malformed profile row {}: `{line}`", i + 2));
        let mut parts = line.rsplitn(3, ',');
        let rho: f64 = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let tau: f64 = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let solver = parts.next().ok_or_else(bad)?;
        match curves.last_mut() {
            Some(c) if c.solver == solver => c.points.push((tau, rho)),
            _ => curves.push(ProfileCurve {
                solver: solver.into(),
                points: alloc::vec![(tau, rho)],
            }),
        }
    }
    Ok(curves)
}
