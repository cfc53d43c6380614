//! Search directions and their safeguards.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::config::DirectionKind;
use crate::problem::{finite_diff_hessian, Problem};
use crate::report::EvalCounters;
use crate::vecops::{dot, norm, sub_into};

/// Directions with `g'd` above this are replaced by `-g`.
pub const DESCENT_THRESHOLD: f64 = -1e-14;

/// Admissible range of the Barzilai–Borwein step `σ⁻¹`.
pub const BB_STEP_MIN: f64 = 1e-10;
pub const BB_STEP_MAX: f64 = 1e10;

/// Curvature pairs with `y's <= CURVATURE_TOL ‖y‖ ‖s‖` are skipped.
pub const CURVATURE_TOL: f64 = 1e-10;

/// Diagonal shifts tried, in units of `1 + ‖H‖_∞`, when the Hessian is not positive definite.
const SHIFT_LADDER: [f64; 14] = [
    1e-8, 1e-4, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e12,
];

pub fn gradient_dir(g: &[f64]) -> Vec<f64> {
    g.iter().map(|v| -v).collect()
}

/// Keeps `d` when `g'd <= -1e-14`, otherwise falls back to `-g`.
pub fn descent_safeguard(d: Vec<f64>, g: &[f64]) -> Vec<f64> {
    if dot(g, &d) <= DESCENT_THRESHOLD {
        d
    } else {
        gradient_dir(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonStep {
    pub d: Vec<f64>,
    /// Diagonal shift that made the factorization succeed (0 when `H` was already SPD).
    pub shift: f64,
    /// Every shift failed and `-g` was returned.
    pub fell_back: bool,
}

fn inf_norm(h: &DMatrix<f64>) -> f64 {
    h.row_iter()
        .map(|r| r.iter().map(|v| libm::fabs(*v)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `(H + τI) d = -g` with the smallest `τ` on the shift ladder for which the
/// Cholesky factorization exists, then applies [`descent_safeguard`].
pub fn newton_dir(h: &DMatrix<f64>, g: &[f64]) -> NewtonStep {
    let rhs = -DVector::from_column_slice(g);
    let scale = 1.0 + inf_norm(h);
    let shifts = core::iter::once(0.0).chain(SHIFT_LADDER.iter().map(|c| c * scale));
    for shift in shifts {
        let mut m = h.clone();
        if shift > 0.0 {
            for i in 0..m.nrows() {
                m[(i, i)] += shift;
            }
        }
        if let Some(chol) = m.cholesky() {
            let d = chol.solve(&rhs);
            if d.iter().all(|v| v.is_finite()) {
                let d = descent_safeguard(d.as_slice().to_vec(), g);
                return NewtonStep {
                    d,
                    shift,
                    fell_back: false,
                };
            }
        }
    }
    NewtonStep {
        d: gradient_dir(g),
        shift: f64::INFINITY,
        fell_back: true,
    }
}

/// Solves `H d = -g` by LU without any modification; `None` when `H` is singular.
pub fn raw_newton_dir(h: &DMatrix<f64>, g: &[f64]) -> Option<Vec<f64>> {
    let rhs = -DVector::from_column_slice(g);
    let d = h.clone().lu().solve(&rhs)?;
    d.iter().all(|v| v.is_finite()).then(|| d.as_slice().to_vec())
}

/// Direction used by the solver.
///
/// Solves `H d = -g` exactly. The step is kept when it descends and reversed when it
/// ascends (`g'd > 0`); a singular `H` or a step nearly orthogonal to `g` falls back to
/// the repaired [`newton_dir`].
pub fn hybrid_newton_dir(h: &DMatrix<f64>, g: &[f64]) -> Vec<f64> {
    match raw_newton_dir(h, g) {
        Some(d) if dot(g, &d) <= DESCENT_THRESHOLD => d,
        Some(mut d) if dot(g, &d) >= -DESCENT_THRESHOLD => {
            d.iter_mut().for_each(|v| *v = -*v);
            d
        }
        _ => newton_dir(h, g).d,
    }
}

/// Inverse BFGS update `H' = (I − ρsy')H(I − ρys') + ρss'`, skipped when the curvature
/// `y's` is not safely positive. Returns whether the update was applied.
pub fn bfgs_update(hinv: &mut DMatrix<f64>, s: &[f64], y: &[f64]) -> bool {
    let ys = dot(y, s);
    if !(ys > CURVATURE_TOL * norm(y) * norm(s)) {
        return false;
    }
    let rho = 1.0 / ys;
    let s = DVector::from_column_slice(s);
    let y = DVector::from_column_slice(y);
    let hy = &*hinv * &y;
    let yhy = y.dot(&hy);
    let cross = &s * hy.transpose();
    *hinv -= (&cross + cross.transpose()) * rho;
    *hinv += (&s * s.transpose()) * (rho * rho * yhy + rho);
    let sym = (&*hinv + hinv.transpose()) * 0.5;
    *hinv = sym;
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair {
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    /// `1 / y's`
    pub rho: f64,
}

impl CurvaturePair {
    /// `None` when the pair fails the curvature test.
    pub fn new(s: Vec<f64>, y: Vec<f64>) -> Option<Self> {
        let ys = dot(&y, &s);
        (ys > CURVATURE_TOL * norm(&y) * norm(&s)).then(|| Self {
            rho: 1.0 / ys,
            s,
            y,
        })
    }

    /// `s'y / y'y`, the usual initial inverse-Hessian scaling.
    pub fn gamma(&self) -> f64 {
        1.0 / (self.rho * dot(&self.y, &self.y))
    }
}

/// Two-loop recursion for `-H g` with `H₀ = γI`; `pairs` ordered oldest first.
pub fn lbfgs_dir<'a, I>(pairs: I, g: &[f64], gamma: f64) -> Vec<f64>
where
    I: IntoIterator<Item = &'a CurvaturePair>,
    I::IntoIter: DoubleEndedIterator + Clone,
{
    let pairs = pairs.into_iter();
    let mut q = g.to_vec();
    let mut alphas = Vec::new();
    for p in pairs.clone().rev() {
        let a = p.rho * dot(&p.s, &q);
        for (qi, yi) in q.iter_mut().zip(&p.y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for (p, a) in pairs.zip(alphas.iter().rev()) {
        let b = p.rho * dot(&p.y, &q);
        for (qi, si) in q.iter_mut().zip(&p.s) {
            *qi += (a - b) * si;
        }
    }
    let d = gradient_dir(&q);
    descent_safeguard(d, g)
}

fn bb_dir(step_num: f64, step_den: f64, g: &[f64]) -> Vec<f64> {
    if step_den == 0.0 {
        return gradient_dir(g);
    }
    let step = step_num / step_den;
    if (BB_STEP_MIN..=BB_STEP_MAX).contains(&step) {
        g.iter().map(|v| -step * v).collect()
    } else {
        gradient_dir(g)
    }
}

/// `σ = s'y / s's`, `d = -σ⁻¹ g` when `σ⁻¹ ∈ [1e-10, 1e10]`, else `-g`.
pub fn bb1_dir(s: &[f64], y: &[f64], g: &[f64]) -> Vec<f64> {
    let ss = dot(s, s);
    if ss == 0.0 {
        return gradient_dir(g);
    }
    bb_dir(ss, dot(s, y), g)
}

/// `σ⁻¹ = s'y / y'y` (least-squares fit of `σ⁻¹ y ≈ s`), `d = -σ⁻¹ g` under the same
/// clamp as [`bb1_dir`].
pub fn bb2_dir(s: &[f64], y: &[f64], g: &[f64]) -> Vec<f64> {
    let yy = dot(y, y);
    if yy == 0.0 {
        return gradient_dir(g);
    }
    bb_dir(dot(s, y), yy, g)
}

/// Per-run memory of a direction family.
#[derive(Debug, Clone)]
pub struct DirectionState {
    kind: DirectionKind,
    hinv: Option<DMatrix<f64>>,
    pairs: VecDeque<CurvaturePair>,
    cap: usize,
    /// `(s, y)` of the most recent accepted step.
    last_step: Option<(Vec<f64>, Vec<f64>)>,
}

impl DirectionState {
    pub fn new(kind: DirectionKind, n: usize, lbfgs_m_cap: usize) -> Self {
        Self {
            kind,
            hinv: (kind == DirectionKind::Bfgs).then(|| DMatrix::identity(n, n)),
            pairs: VecDeque::with_capacity(lbfgs_m_cap),
            cap: lbfgs_m_cap,
            last_step: None,
        }
    }

    pub fn kind(&self) -> DirectionKind {
        self.kind
    }

    pub fn inverse_hessian(&self) -> Option<&DMatrix<f64>> {
        self.hinv.as_ref()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &CurvaturePair> {
        self.pairs.iter()
    }

    /// Descent direction at `x`; Hessian work is charged to `counters.n_h`.
    pub fn direction(
        &mut self,
        problem: &Problem,
        x: &[f64],
        g: &[f64],
        counters: &mut EvalCounters,
    ) -> Vec<f64> {
        match self.kind {
            DirectionKind::Gd => gradient_dir(g),
            DirectionKind::Newton => {
                let h = hessian(problem, x, g, counters);
                hybrid_newton_dir(&h, g)
            }
            DirectionKind::Bfgs => {
                let hinv = self.hinv.as_ref().expect("BFGS state holds a matrix");
                let d = -(hinv * DVector::from_column_slice(g));
                descent_safeguard(d.as_slice().to_vec(), g)
            }
            DirectionKind::Lbfgs => {
                let gamma = self.pairs.back().map_or(1.0, CurvaturePair::gamma);
                lbfgs_dir(self.pairs.iter(), g, gamma)
            }
            DirectionKind::Bb1 | DirectionKind::Bb2 => match &self.last_step {
                None => gradient_dir(g),
                Some((s, y)) => {
                    let d = if self.kind == DirectionKind::Bb1 {
                        bb1_dir(s, y, g)
                    } else {
                        bb2_dir(s, y, g)
                    };
                    descent_safeguard(d, g)
                }
            },
        }
    }

    /// Feeds an accepted step `x_old → x_new`.
    pub fn observe_step(&mut self, x_old: &[f64], g_old: &[f64], x_new: &[f64], g_new: &[f64]) {
        let n = x_old.len();
        let mut s = vec![0.0; n];
        let mut y = vec![0.0; n];
        sub_into(&mut s, x_new, x_old);
        sub_into(&mut y, g_new, g_old);
        match self.kind {
            DirectionKind::Gd | DirectionKind::Newton => {}
            DirectionKind::Bfgs => {
                if let Some(h) = self.hinv.as_mut() {
                    bfgs_update(h, &s, &y);
                }
            }
            DirectionKind::Lbfgs => {
                if let Some(pair) = CurvaturePair::new(s, y) {
                    if self.pairs.len() == self.cap {
                        self.pairs.pop_front();
                    }
                    self.pairs.push_back(pair);
                }
            }
            DirectionKind::Bb1 | DirectionKind::Bb2 => self.last_step = Some((s, y)),
        }
    }
}

/// Analytic Hessian when the problem has one, forward differences of the gradient
/// otherwise. Either way one Hessian evaluation is charged.
pub fn hessian(problem: &Problem, x: &[f64], g: &[f64], counters: &mut EvalCounters) -> DMatrix<f64> {
    counters.n_h += 1;
    problem
        .hess(x)
        .unwrap_or_else(|| finite_diff_hessian(problem, x, g))
}
