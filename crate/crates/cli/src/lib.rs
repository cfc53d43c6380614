//! Command-line front end for `nonmono-core`: single solves, benchmark matrices with
//! performance profiles, and image deblurring with PGM input and output.
//!
//! [`run`] is the whole program; the binary only wires it to the process.
//!
//! Exit codes: 0 on success (for `solve`, on convergence), 2 when `solve` hits the
//! iteration limit, 3 when its line search fails, 1 for usage and I/O errors.

pub mod bench;
pub mod cli;
pub mod formats;
pub mod pgm;
pub mod settings;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;

use nonmono_core::deblur::{self, DeblurProblem, REFERENCE_ITERS};
use nonmono_core::profiles::Measure;
use nonmono_core::{family_names, get_problem, list_problems, solve, DirectionKind, SizeClass, Status, TermKind};

use crate::bench::{profile_csv, run_matrix, runs_csv, solver_grid, thread_cap};
use crate::cli::{BenchArgs, Cli, Command, DeblurArgs, ListArgs, SolveArgs, SolverFlags};
use crate::formats::{metrics_csv, summary_line, trace_csv, DEBLUR_SUMMARY_HEADER};
use crate::settings::{parse_list, Overrides};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MAXITER: i32 = 2;
pub const EXIT_LINESEARCH: i32 = 3;

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Converged => EXIT_OK,
        Status::MaxIter => EXIT_MAXITER,
        Status::LineSearchFail => EXIT_LINESEARCH,
    }
}

/// Parses `args` (program name first), executes the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Deblur(a) => cmd_deblur(a, out),
        Command::List(a) => cmd_list(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

// `list | head` closes stdout early; that is not a failure
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn catalog_hint() -> String {
    format!("available problems: {}", family_names().join(", "))
}

fn merged_overrides(flags: &SolverFlags, term: Option<String>, direction: Option<String>) -> Result<Overrides> {
    let from_flags = flags.overrides(term, direction);
    Ok(match &flags.config {
        Some(path) => from_flags.over(Overrides::from_file(path)?),
        None => from_flags,
    })
}

fn one<T: Copy>(items: Vec<T>, what: &str) -> Result<T> {
    match items.as_slice() {
        [x] => Ok(*x),
        _ => bail!("solve takes exactly one {what}"),
    }
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let ov = merged_overrides(&a.solver, a.term.clone(), a.direction.clone())?;
    let term: TermKind = one(parse_list(ov.term.as_deref().unwrap_or("G"))?, "term")?;
    let direction: DirectionKind = one(parse_list(ov.direction.as_deref().unwrap_or("LBFGS"))?, "direction")?;
    let problem = get_problem(&a.problem, a.dim).map_err(|e| anyhow!("{e}\n{}", catalog_hint()))?;
    let cfg = ov.apply(term, direction);
    let r = solve(&problem, &cfg)?;
    writeln!(out, "{}", summary_line(&problem.name, term, direction, &r))?;
    if let Some(path) = &a.trace {
        fs::write(path, trace_csv(&r)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(exit_code(r.status))
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let ov = merged_overrides(&a.solver, a.term.clone(), a.direction.clone())?;
    let terms: Vec<TermKind> = match &ov.term {
        Some(t) => parse_list(t)?,
        None => TermKind::NONMONOTONE.to_vec(),
    };
    let directions: Vec<DirectionKind> = parse_list(ov.direction.as_deref().unwrap_or("NEWTON"))?;
    let measures: Vec<Measure> = parse_list(&a.measure)?;
    let solvers = solver_grid(&terms, &directions);
    if solvers.is_empty() || measures.is_empty() {
        bail!("bench needs at least one term, direction and measure");
    }
    let labels: Vec<String> = match &a.problem {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => list_problems(a.set.parse::<SizeClass>()?),
    };
    let problems = labels
        .iter()
        .map(|l| get_problem(l, None).map_err(|e| anyhow!("{e}\n{}", catalog_hint())))
        .collect::<Result<Vec<_>>>()?;

    let runs = run_matrix(problems, &solvers, &ov, thread_cap()?)?;
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    write_file(&a.out.join("runs.csv"), &runs_csv(&runs))?;
    for m in measures {
        let (csv, dropped) = profile_csv(&runs, &solvers, m)?;
        write_file(&a.out.join(format!("profile_{m}.csv")), &csv)?;
        if !dropped.is_empty() {
            writeln!(err, "warning: {m}: every solver failed on {}", dropped.join(", "))?;
        }
    }
    let converged = runs.iter().filter(|r| r.converged()).count();
    writeln!(out, "{} runs, {converged} converged, written to {}", runs.len(), a.out.display())?;
    Ok(EXIT_OK)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_deblur(a: DeblurArgs, out: &mut dyn Write) -> Result<i32> {
    let x_true = match (&a.input, a.synthetic) {
        (Some(path), false) => pgm::read(path)?,
        (None, true) => deblur::synthetic_image(a.size, a.size),
        _ => bail!("deblur needs either --input FILE or --synthetic"),
    };
    let terms: Vec<TermKind> = match &a.term {
        Some(t) => parse_list(t)?,
        None => TermKind::NONMONOTONE.to_vec(),
    };
    let y = deblur::degrade(&x_true, a.radius, a.noise_sigma, a.seed)?;
    let p = DeblurProblem::new(y, a.radius, a.lambda)?;
    let f_star = deblur::reference_f_star(&p, REFERENCE_ITERS)?;

    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    pgm::write(&p.y, &a.out.join("observed.pgm"))?;
    writeln!(out, "{DEBLUR_SUMMARY_HEADER}")?;
    for term in terms {
        let run = deblur::run_deblur(&p, term, a.iters, Some(&x_true), Some(f_star))?;
        pgm::write(&run.x_b, &a.out.join(format!("restored_{term}.pgm")))?;
        write_file(&a.out.join(format!("metrics_{term}.csv")), &metrics_csv(&run.metrics))?;
        let last = run.metrics.last().expect("metrics start with iter 0");
        writeln!(
            out,
            "{term},{},{},{},{},{}",
            last.iter,
            nonmono_core::profiles::format_real(last.f),
            nonmono_core::profiles::format_real(last.isnr.unwrap_or(f64::NAN)),
            nonmono_core::profiles::format_real(deblur::psnr_linear(&run.x_b.pixels, &x_true.pixels)),
            nonmono_core::profiles::format_real(deblur::psnr_std(&run.x_b.pixels, &x_true.pixels)),
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_list(a: ListArgs, out: &mut dyn Write) -> Result<i32> {
    for name in list_problems(a.set.parse()?) {
        writeln!(out, "{name}")?;
    }
    Ok(EXIT_OK)
}
