//! Nonmonotone Armijo-type line searches for smooth unconstrained minimization.
//!
//! The crate is `no_std` (with `alloc`) and contains only computation:
//!
//! * [`terms`]: reference values `T_k` for the Armijo test (max-based, Zhang–Hager,
//!   convex-combination, relaxed-max and the two windowed convex terms)
//! * [`linesearch`]: the backtracking loop
//! * [`directions`]: gradient, Newton, BFGS, L-BFGS and safeguarded Barzilai–Borwein
//!   directions
//! * [`solver`]: the outer iteration
//! * [`problems`]: standard unconstrained test functions
//! * [`profiles`]: Dolan–Moré performance profiles
//! * [`deblur`]: a quadratic image-deblurring objective built from matrix-free operators
//!
//! File formats, the benchmark harness and the command line live in the `nonmono-opt` crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod config;
pub mod deblur;
pub mod directions;
mod error;
pub mod linesearch;
pub mod problem;
pub mod problems;
pub mod profiles;
pub mod report;
pub mod solver;
pub mod terms;
pub(crate) mod vecops;

pub use config::{DirectionKind, SolverConfig, TermKind};
pub use error::{Error, Result};
pub use problem::{finite_diff_grad, finite_diff_hessian, grad_check, GradCheckReport, Objective, Problem};
pub use problems::{catalog, family_names, get_problem, list_problems, CatalogEntry, SizeClass};
pub use report::{EvalCounters, SolveResult, Status, TraceRecord};
pub use solver::{solve, solve_pure_newton, solve_pure_newton_with, solve_with_observer, IterateView, PureNewtonSystem};
pub use terms::{EtaRule, TermState};
