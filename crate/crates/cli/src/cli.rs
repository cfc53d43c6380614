use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::settings::Overrides;

/// Nonmonotone Armijo line-search solvers: single runs, benchmark matrices and
/// image deblurring.
#[derive(Debug, Parser)]
#[command(name = "nonmono-opt", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one catalog problem and print a summary line.
    Solve(SolveArgs),
    /// Run a problem set against a list of solvers and write run and profile CSVs.
    Bench(BenchArgs),
    /// Restore a blurred, noisy image with BB2 under each requested term.
    Deblur(DeblurArgs),
    /// List catalog problem labels.
    List(ListArgs),
}

/// Overrides of individual solver parameters.
#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Initial weight of the adaptive η sequence.
    #[arg(long)]
    pub eta0: Option<f64>,
    /// Sufficient-decrease coefficient.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Backtracking factor.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Initial trial step.
    #[arg(long = "s")]
    pub s: Option<f64>,
    /// Nonmonotone memory.
    #[arg(long = "N")]
    pub memory: Option<usize>,
    /// Gradient-norm tolerance.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub maxiter: Option<usize>,
    /// Flat JSON file with SolverConfig keys; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl SolverFlags {
    pub fn overrides(&self, term: Option<String>, direction: Option<String>) -> Overrides {
        Overrides {
            rho: self.rho,
            sigma: self.sigma,
            s: self.s,
            eps: self.eps,
            maxiter: self.maxiter,
            memory: self.memory,
            eta0: self.eta0,
            term,
            direction,
            ..Overrides::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Catalog label, e.g. `beale` or `penalty2-10`.
    #[arg(long)]
    pub problem: String,
    /// Dimension for variable-size families (overrides a `-<n>` suffix).
    #[arg(long)]
    pub dim: Option<usize>,
    /// MONO, G, H, N, M, NM1 or NM2 [default: G]
    #[arg(long)]
    pub term: Option<String>,
    /// GD, NEWTON, BFGS, LBFGS, BB1 or BB2 [default: LBFGS]
    #[arg(long)]
    pub direction: Option<String>,
    /// Write the per-iteration trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// small, large or all.
    #[arg(long, default_value = "small")]
    pub set: String,
    /// Restrict the run to these comma-separated labels instead of a set.
    #[arg(long)]
    pub problem: Option<String>,
    /// Comma-separated terms [default: G,H,N,M,NM1,NM2]
    #[arg(long)]
    pub term: Option<String>,
    /// Comma-separated directions [default: NEWTON]
    #[arg(long)]
    pub direction: Option<String>,
    /// Comma-separated profile measures: ni, nf, ng, nf3ng.
    #[arg(long, default_value = "ni,nf,ng,nf3ng")]
    pub measure: String,
    /// Output directory for runs.csv and profile_<measure>.csv.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverFlags,
}

#[derive(Debug, Args)]
pub struct DeblurArgs {
    /// Clean 8-bit binary PGM to blur, corrupt and restore.
    #[arg(long, conflicts_with = "synthetic")]
    pub input: Option<PathBuf>,
    /// Use the built-in synthetic scene instead of --input.
    #[arg(long)]
    pub synthetic: bool,
    /// Side length of the synthetic scene.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    /// Comma-separated terms [default: G,H,N,M,NM1,NM2]
    #[arg(long)]
    pub term: Option<String>,
    #[arg(long, default_value_t = nonmono_core::deblur::DEFAULT_ITERS)]
    pub iters: usize,
    #[arg(long, default_value_t = nonmono_core::deblur::DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Standard deviation of the additive Gaussian noise (0 to 255 scale).
    #[arg(long, default_value_t = nonmono_core::deblur::DEFAULT_NOISE_SIGMA)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Disk blur radius.
    #[arg(long, default_value_t = nonmono_core::deblur::DEFAULT_RADIUS)]
    pub radius: usize,
    /// Output directory for images and metrics.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    /// small, large or all.
    #[arg(long, default_value = "all")]
    pub set: String,
}
