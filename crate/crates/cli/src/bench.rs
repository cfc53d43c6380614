//! Problem × solver benchmark matrix.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use rayon::prelude::*;

use nonmono_core::profiles::{performance_ratios, profile_curves, render_profile_csv, tau_grid, BenchMatrix, Measure};
use nonmono_core::{solve, DirectionKind, Problem, SolveResult, Status, TermKind};

use crate::formats::{summary_line, SUMMARY_HEADER};
use crate::settings::Overrides;

pub const THREADS_ENV: &str = "NONMONO_OPT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    pub term: TermKind,
    pub direction: DirectionKind,
}

impl Solver {
    pub fn label(&self) -> String {
        format!("{}-{}", self.term, self.direction)
    }
}

/// Every term paired with every direction, terms outermost.
pub fn solver_grid(terms: &[TermKind], directions: &[DirectionKind]) -> Vec<Solver> {
    terms
        .iter()
        .flat_map(|&term| directions.iter().map(move |&direction| Solver { term, direction }))
        .collect()
}

pub struct Run {
    pub problem: String,
    pub solver: Solver,
    /// `None` when the solver rejected its configuration.
    pub result: Option<SolveResult>,
    pub line: String,
}

impl Run {
    pub fn converged(&self) -> bool {
        matches!(&self.result, Some(r) if r.status == Status::Converged)
    }
}

/// Worker count from `NONMONO_OPT_THREADS`; `None` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
            anyhow::ensure!(n > 0, "{THREADS_ENV} must be a positive integer, got `{v}`");
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Runs every (problem, solver) cell. Problems are sorted by name, solvers keep their
/// order, and the output order does not depend on scheduling.
pub fn run_matrix(
    mut problems: Vec<Problem>,
    solvers: &[Solver],
    overrides: &Overrides,
    threads: Option<usize>,
) -> Result<Vec<Run>> {
    problems.sort_by(|a, b| a.name.cmp(&b.name));
    let cells: Vec<(usize, Solver)> = (0..problems.len())
        .flat_map(|p| solvers.iter().map(move |&s| (p, s)))
        .collect();
    let work = || {
        cells
            .par_iter()
            .map(|&(p, solver)| {
                let problem = &problems[p];
                let cfg = overrides.apply(solver.term, solver.direction);
                match solve(problem, &cfg) {
                    Ok(r) => Run {
                        problem: problem.name.clone(),
                        solver,
                        line: summary_line(&problem.name, solver.term, solver.direction, &r),
                        result: Some(r),
                    },
                    Err(e) => Run {
                        problem: problem.name.clone(),
                        solver,
                        line: format!("{},{},{},Error: {e},,,,,", problem.name, solver.term, solver.direction),
                        result: None,
                    },
                }
            })
            .collect::<Vec<_>>()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build()?;
    Ok(pool.install(work))
}

pub fn runs_csv(runs: &[Run]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in runs {
        let _ = writeln!(out, "{}", r.line);
    }
    out
}

/// Cost table for one measure; runs that did not converge are failed cells.
pub fn bench_matrix(runs: &[Run], solvers: &[Solver], measure: Measure) -> Result<BenchMatrix> {
    let mut problems: Vec<String> = Vec::new();
    for r in runs {
        if problems.last() != Some(&r.problem) {
            problems.push(r.problem.clone());
        }
    }
    let t = runs
        .chunks(solvers.len())
        .map(|row| {
            row.iter()
                .map(|r| match &r.result {
                    Some(res) if r.converged() => Some(measure.value(&res.counters)),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Ok(BenchMatrix::new(problems, solvers.iter().map(Solver::label).collect(), t)?)
}

/// The profile CSV for one measure and the problems dropped because every solver failed.
pub fn profile_csv(runs: &[Run], solvers: &[Solver], measure: Measure) -> Result<(String, Vec<String>)> {
    let matrix = bench_matrix(runs, solvers, measure)?;
    if matrix.t.iter().all(|row| row.iter().all(Option::is_none)) {
        // nothing converged: a header-only profile rather than an aborted matrix
        return Ok((render_profile_csv(&[]), matrix.problems));
    }
    let ratios = performance_ratios(&matrix)?;
    let grid = tau_grid(&ratios);
    let curves = profile_curves(&ratios, &grid);
    Ok((render_profile_csv(&curves), ratios.dropped.clone()))
}
