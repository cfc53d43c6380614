//! Objectives and the finite-difference oracles used to validate them.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vecops::{norm, sub_into};

/// A smooth objective `f: R^n -> R`.
///
/// Implementations must be pure: the same input always yields the same output, and
/// evaluation may happen concurrently from several threads.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Writes `∇f(x)` into `g` (`g.len() == x.len()`).
    fn gradient(&self, x: &[f64], g: &mut [f64]);

    /// Analytic Hessian, when one is available.
    fn hessian(&self, _x: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    fn has_hessian(&self) -> bool {
        false
    }
}

struct FnObjective<F, G> {
    f: F,
    g: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        (self.g)(x, g)
    }
}

struct WithHessian<H> {
    inner: Arc<dyn Objective>,
    h: H,
}

impl<H> Objective for WithHessian<H>
where
    H: Fn(&[f64]) -> DMatrix<f64> + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        self.inner.gradient(x, g)
    }

    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        Some((self.h)(x))
    }

    fn has_hessian(&self) -> bool {
        true
    }
}

/// A named unconstrained problem with its standard starting point.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub x0: Vec<f64>,
    /// Known optimal value, when the literature reports one.
    pub f_star: Option<f64>,
    objective: Arc<dyn Objective>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.x0.len())
            .field("f_star", &self.f_star)
            .field("hessian", &self.objective.has_hessian())
            .finish()
    }
}

impl Problem {
    pub fn new(name: impl Into<String>, x0: Vec<f64>, objective: impl Objective + 'static) -> Self {
        Self {
            name: name.into(),
            x0,
            f_star: None,
            objective: Arc::new(objective),
        }
    }

    pub fn from_fns<F, G>(name: impl Into<String>, x0: Vec<f64>, f: F, g: G) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(name, x0, FnObjective { f, g })
    }

    pub fn with_hessian<H>(mut self, h: H) -> Self
    where
        H: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.objective = Arc::new(WithHessian {
            inner: self.objective,
            h,
        });
        self
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        self.x0 = x0;
        self
    }

    pub fn n(&self) -> usize {
        self.x0.len()
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    pub fn grad_into(&self, x: &[f64], g: &mut [f64]) {
        self.objective.gradient(x, g)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.objective.gradient(x, &mut g);
        g
    }

    pub fn hess(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        self.objective.hessian(x)
    }

    pub fn has_hessian(&self) -> bool {
        self.objective.has_hessian()
    }
}

#[inline]
fn fd_step(xi: f64) -> f64 {
    // cube root of machine epsilon balances truncation against cancellation
    6.055_454_452_393_343e-6 * (1.0 + libm::fabs(xi))
}

/// Central-difference gradient with per-coordinate step `ε^(1/3) (1 + |x_i|)`.
pub fn finite_diff_grad(problem: &Problem, x: &[f64]) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut out = vec![0.0; x.len()];
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        let xp = x[i] + h;
        let xm = x[i] - h;
        probe[i] = xp;
        let fp = problem.f(&probe);
        probe[i] = xm;
        let fm = problem.f(&probe);
        probe[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::EvaluationDomain { index: i });
        }
        // divide by the representable step, not the nominal one
        out[i] = (fp - fm) / (xp - xm);
    }
    Ok(out)
}

/// Forward-difference Hessian of the analytic gradient, symmetrized.
///
/// Costs `n` gradient evaluations beyond the one already known at `x`.
pub fn finite_diff_hessian(problem: &Problem, x: &[f64], g: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    let mut probe = x.to_vec();
    let mut gp = vec![0.0; n];
    for j in 0..n {
        let step = 1.490_116_119_384_765_6e-8 * (1.0 + libm::fabs(x[j]));
        let xp = x[j] + step;
        probe[j] = xp;
        problem.grad_into(&probe, &mut gp);
        probe[j] = x[j];
        let actual = xp - x[j];
        for i in 0..n {
            h[(i, j)] = (gp[i] - g[i]) / actual;
        }
    }
    let ht = h.transpose();
    (h + ht) * 0.5
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    /// `max ‖∇f − fd‖ / (1 + ‖∇f‖)` over the sampled points.
    pub max_rel_err: f64,
    /// Index of the sampled point attaining the maximum (0 is `x0` itself).
    pub worst_point: usize,
    pub points: usize,
}

/// Compares the analytic gradient with central differences at `x0` and at
/// `n_points - 1` seeded random perturbations of it.
pub fn grad_check(problem: &Problem, n_points: usize, seed: u64) -> GradCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = problem.n();
    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst_point: 0,
        points: n_points.max(1),
    };
    let mut x = problem.x0.clone();
    let mut diff = vec![0.0; n];
    for p in 0..report.points {
        if p > 0 {
            for (xi, x0i) in x.iter_mut().zip(&problem.x0) {
                let u: f64 = rng.random_range(-1.0..1.0);
                *xi = x0i + 0.1 * u * (1.0 + libm::fabs(*x0i));
            }
        }
        let g = problem.grad(&x);
        let err = match finite_diff_grad(problem, &x) {
            Ok(fd) => {
                sub_into(&mut diff, &g, &fd);
                norm(&diff) / (1.0 + norm(&g))
            }
            Err(_) => f64::INFINITY,
        };
        if !(err <= report.max_rel_err) {
            report.max_rel_err = err;
            report.worst_point = p;
        }
    }
    report
}
