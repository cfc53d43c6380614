//! Moré–Garbow–Hillstrom least-squares problems `f = Σ r_i(x)²`.
//!
//! Each problem supplies residuals, the Jacobian and the second derivatives of every
//! residual, so gradients and Hessians are exact:
//! `∇f = 2 Jᵀ r`, `∇²f = 2 (JᵀJ + Σ r_i ∇² r_i)`.

use alloc::vec;
use core::f64::consts::PI;

use libm::{atan, cos, exp, fabs, log, pow, sin, sqrt};
use nalgebra::DMatrix;

use crate::problem::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mgh {
    Rosenbrock,
    Beale,
    BrownBadlyScaled,
    PowellBadlyScaled,
    VariablyDimensioned,
    Watson,
    Box3d,
    Gaussian,
    Gulf,
    HelicalValley,
    BrownDennis,
    Penalty1,
    Penalty2,
    Trigonometric,
    Wood,
    BiggsExp6,
    Chebyquad,
}

const GAUSSIAN_Y: [f64; 15] = [
    0.0009, 0.0044, 0.0175, 0.0540, 0.1295, 0.2420, 0.3521, 0.3989, 0.3521, 0.2420, 0.1295, 0.0540, 0.0175,
    0.0044, 0.0009,
];
const BEALE_Y: [f64; 3] = [1.5, 2.25, 2.625];
const PENALTY_A: f64 = 1e-5;
const GULF_M: usize = 99;

/// `(r_i, ∇r_i, ∇²r_i)` collector handed to the per-problem residual code.
struct Acc<'a> {
    r: &'a mut [f64],
    jac: Option<&'a mut DMatrix<f64>>,
    /// Weights `w_i` and the accumulator for `Σ w_i ∇² r_i`.
    second: Option<(&'a [f64], &'a mut DMatrix<f64>)>,
}

impl Acc<'_> {
    fn val(&mut self, i: usize, v: f64) {
        self.r[i] = v;
    }

    fn d(&mut self, i: usize, j: usize, v: f64) {
        if let Some(jac) = self.jac.as_deref_mut() {
            jac[(i, j)] += v;
        }
    }

    /// Adds `v` to `∂²r_i/∂x_j∂x_k` (and its mirror when `j != k`).
    fn dd(&mut self, i: usize, j: usize, k: usize, v: f64) {
        if let Some((w, h)) = self.second.as_mut() {
            let wv = w[i] * v;
            h[(j, k)] += wv;
            if j != k {
                h[(k, j)] += wv;
            }
        }
    }

    fn wants_derivs(&self) -> bool {
        self.jac.is_some() || self.second.is_some()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LeastSquares {
    kind: Mgh,
    n: usize,
    m: usize,
}

impl LeastSquares {
    pub(crate) fn new(kind: Mgh, n: usize) -> Self {
        let m = match kind {
            Mgh::Rosenbrock | Mgh::PowellBadlyScaled => 2,
            Mgh::Beale | Mgh::BrownBadlyScaled | Mgh::HelicalValley => 3,
            Mgh::VariablyDimensioned => n + 2,
            Mgh::Watson => 31,
            Mgh::Box3d => 10,
            Mgh::Gaussian => 15,
            Mgh::Gulf => GULF_M,
            Mgh::BrownDennis => 20,
            Mgh::Penalty1 => n + 1,
            Mgh::Penalty2 => 2 * n,
            Mgh::Trigonometric | Mgh::Chebyquad => n,
            Mgh::Wood => 6,
            Mgh::BiggsExp6 => 13,
        };
        Self { kind, n, m }
    }

    fn fill(&self, x: &[f64], acc: &mut Acc<'_>) {
        let n = self.n;
        let deriv = acc.wants_derivs();
        match self.kind {
            Mgh::Rosenbrock => {
                acc.val(0, 10.0 * (x[1] - x[0] * x[0]));
                acc.val(1, 1.0 - x[0]);
                if deriv {
                    acc.d(0, 0, -20.0 * x[0]);
                    acc.d(0, 1, 10.0);
                    acc.d(1, 0, -1.0);
                    acc.dd(0, 0, 0, -20.0);
                }
            }
            Mgh::Beale => {
                for (i, y) in BEALE_Y.iter().enumerate() {
                    let p = (i + 1) as i32;
                    let xp = libm::pow(x[1], p as f64);
                    acc.val(i, y - x[0] * (1.0 - xp));
                    if deriv {
                        let xp1 = pow(x[1], (p - 1) as f64);
                        acc.d(i, 0, -(1.0 - xp));
                        acc.d(i, 1, x[0] * p as f64 * xp1);
                        acc.dd(i, 0, 1, p as f64 * xp1);
                        if p >= 2 {
                            let xp2 = pow(x[1], (p - 2) as f64);
                            acc.dd(i, 1, 1, x[0] * (p * (p - 1)) as f64 * xp2);
                        }
                    }
                }
            }
            Mgh::BrownBadlyScaled => {
                acc.val(0, x[0] - 1e6);
                acc.val(1, x[1] - 2e-6);
                acc.val(2, x[0] * x[1] - 2.0);
                if deriv {
                    acc.d(0, 0, 1.0);
                    acc.d(1, 1, 1.0);
                    acc.d(2, 0, x[1]);
                    acc.d(2, 1, x[0]);
                    acc.dd(2, 0, 1, 1.0);
                }
            }
            Mgh::PowellBadlyScaled => {
                let (e0, e1) = (exp(-x[0]), exp(-x[1]));
                acc.val(0, 1e4 * x[0] * x[1] - 1.0);
                acc.val(1, e0 + e1 - 1.0001);
                if deriv {
                    acc.d(0, 0, 1e4 * x[1]);
                    acc.d(0, 1, 1e4 * x[0]);
                    acc.d(1, 0, -e0);
                    acc.d(1, 1, -e1);
                    acc.dd(0, 0, 1, 1e4);
                    acc.dd(1, 0, 0, e0);
                    acc.dd(1, 1, 1, e1);
                }
            }
            Mgh::VariablyDimensioned => {
                let mut s = 0.0;
                for j in 0..n {
                    acc.val(j, x[j] - 1.0);
                    s += (j + 1) as f64 * (x[j] - 1.0);
                }
                acc.val(n, s);
                acc.val(n + 1, s * s);
                if deriv {
                    for j in 0..n {
                        let wj = (j + 1) as f64;
                        acc.d(j, j, 1.0);
                        acc.d(n, j, wj);
                        acc.d(n + 1, j, 2.0 * s * wj);
                        for k in 0..=j {
                            acc.dd(n + 1, j, k, 2.0 * wj * (k + 1) as f64);
                        }
                    }
                }
            }
            Mgh::Watson => {
                let mut tp = vec![0.0; n];
                for i in 0..29 {
                    let t = (i + 1) as f64 / 29.0;
                    // tp[j] = t^j
                    let mut p = 1.0;
                    for v in tp.iter_mut() {
                        *v = p;
                        p *= t;
                    }
                    let a: f64 = (1..n).map(|j| j as f64 * x[j] * tp[j - 1]).sum();
                    let b: f64 = (0..n).map(|j| x[j] * tp[j]).sum();
                    acc.val(i, a - b * b - 1.0);
                    if deriv {
                        for j in 0..n {
                            let da = if j >= 1 { j as f64 * tp[j - 1] } else { 0.0 };
                            acc.d(i, j, da - 2.0 * b * tp[j]);
                            for k in 0..=j {
                                acc.dd(i, j, k, -2.0 * tp[j] * tp[k]);
                            }
                        }
                    }
                }
                acc.val(29, x[0]);
                acc.val(30, x[1] - x[0] * x[0] - 1.0);
                if deriv {
                    acc.d(29, 0, 1.0);
                    acc.d(30, 0, -2.0 * x[0]);
                    acc.d(30, 1, 1.0);
                    acc.dd(30, 0, 0, -2.0);
                }
            }
            Mgh::Box3d => {
                for i in 0..self.m {
                    let t = 0.1 * (i + 1) as f64;
                    let (e1, e2) = (exp(-t * x[0]), exp(-t * x[1]));
                    let c = exp(-t) - exp(-10.0 * t);
                    acc.val(i, e1 - e2 - x[2] * c);
                    if deriv {
                        acc.d(i, 0, -t * e1);
                        acc.d(i, 1, t * e2);
                        acc.d(i, 2, -c);
                        acc.dd(i, 0, 0, t * t * e1);
                        acc.dd(i, 1, 1, -t * t * e2);
                    }
                }
            }
            Mgh::Gaussian => {
                for (i, y) in GAUSSIAN_Y.iter().enumerate() {
                    let t = (7.0 - i as f64) / 2.0;
                    let u = t - x[2];
                    let e = exp(-x[1] * u * u / 2.0);
                    acc.val(i, x[0] * e - y);
                    if deriv {
                        let u2 = u * u;
                        acc.d(i, 0, e);
                        acc.d(i, 1, -x[0] * e * u2 / 2.0);
                        acc.d(i, 2, x[0] * e * x[1] * u);
                        acc.dd(i, 0, 1, -e * u2 / 2.0);
                        acc.dd(i, 0, 2, e * x[1] * u);
                        acc.dd(i, 1, 1, x[0] * e * u2 * u2 / 4.0);
                        acc.dd(i, 1, 2, -x[0] * e * (x[1] * u2 * u / 2.0 - u));
                        acc.dd(i, 2, 2, x[0] * x[1] * e * (x[1] * u2 - 1.0));
                    }
                }
            }
            Mgh::Gulf => {
                for i in 0..self.m {
                    let t = (i + 1) as f64 / 100.0;
                    let y = 25.0 + pow(-50.0 * log(t), 2.0 / 3.0);
                    let diff = y - x[1];
                    let u = fabs(diff);
                    let p = pow(u, x[2]);
                    let e = exp(-p / x[0]);
                    acc.val(i, e - t);
                    if deriv {
                        let s = if diff >= 0.0 { 1.0 } else { -1.0 };
                        let lu = log(u);
                        let x1 = x[0];
                        let um1 = pow(u, x[2] - 1.0);
                        // q = p / x1, r = e^{-q} - t
                        let q = [-p / (x1 * x1), -s * x[2] * um1 / x1, p * lu / x1];
                        for (j, qj) in q.iter().enumerate() {
                            acc.d(i, j, -e * qj);
                        }
                        let qq = [
                            [2.0 * p / (x1 * x1 * x1), s * x[2] * um1 / (x1 * x1), -p * lu / (x1 * x1)],
                            [0.0, x[2] * (x[2] - 1.0) * pow(u, x[2] - 2.0) / x1, -s * um1 * (1.0 + x[2] * lu) / x1],
                            [0.0, 0.0, p * lu * lu / x1],
                        ];
                        for j in 0..3 {
                            for k in j..3 {
                                acc.dd(i, j, k, e * (q[j] * q[k] - qq[j][k]));
                            }
                        }
                    }
                }
            }
            Mgh::HelicalValley => {
                let rho = x[0] * x[0] + x[1] * x[1];
                let theta = atan(x[1] / x[0]) / (2.0 * PI) + if x[0] < 0.0 { 0.5 } else { 0.0 };
                let r = sqrt(rho);
                acc.val(0, 10.0 * (x[2] - 10.0 * theta));
                acc.val(1, 10.0 * (r - 1.0));
                acc.val(2, x[2]);
                if deriv {
                    let c = 2.0 * PI * rho;
                    let c2 = 2.0 * PI * rho * rho;
                    acc.d(0, 0, 100.0 * x[1] / c);
                    acc.d(0, 1, -100.0 * x[0] / c);
                    acc.d(0, 2, 10.0);
                    acc.dd(0, 0, 0, -100.0 * 2.0 * x[0] * x[1] / c2);
                    acc.dd(0, 1, 1, 100.0 * 2.0 * x[0] * x[1] / c2);
                    acc.dd(0, 0, 1, -100.0 * (x[1] * x[1] - x[0] * x[0]) / c2);
                    acc.d(1, 0, 10.0 * x[0] / r);
                    acc.d(1, 1, 10.0 * x[1] / r);
                    let r3 = r * rho;
                    acc.dd(1, 0, 0, 10.0 * (1.0 / r - x[0] * x[0] / r3));
                    acc.dd(1, 1, 1, 10.0 * (1.0 / r - x[1] * x[1] / r3));
                    acc.dd(1, 0, 1, -10.0 * x[0] * x[1] / r3);
                    acc.d(2, 2, 1.0);
                }
            }
            Mgh::BrownDennis => {
                for i in 0..self.m {
                    let t = (i + 1) as f64 / 5.0;
                    let (st, ct) = (sin(t), cos(t));
                    let a = x[0] + t * x[1] - exp(t);
                    let b = x[2] + x[3] * st - ct;
                    acc.val(i, a * a + b * b);
                    if deriv {
                        acc.d(i, 0, 2.0 * a);
                        acc.d(i, 1, 2.0 * a * t);
                        acc.d(i, 2, 2.0 * b);
                        acc.d(i, 3, 2.0 * b * st);
                        acc.dd(i, 0, 0, 2.0);
                        acc.dd(i, 0, 1, 2.0 * t);
                        acc.dd(i, 1, 1, 2.0 * t * t);
                        acc.dd(i, 2, 2, 2.0);
                        acc.dd(i, 2, 3, 2.0 * st);
                        acc.dd(i, 3, 3, 2.0 * st * st);
                    }
                }
            }
            Mgh::Penalty1 => {
                let sa = sqrt(PENALTY_A);
                let mut s = 0.0;
                for j in 0..n {
                    acc.val(j, sa * (x[j] - 1.0));
                    s += x[j] * x[j];
                }
                acc.val(n, s - 0.25);
                if deriv {
                    for j in 0..n {
                        acc.d(j, j, sa);
                        acc.d(n, j, 2.0 * x[j]);
                        acc.dd(n, j, j, 2.0);
                    }
                }
            }
            Mgh::Penalty2 => {
                let sa = sqrt(PENALTY_A);
                let ex: alloc::vec::Vec<f64> = x.iter().map(|v| exp(v / 10.0)).collect();
                acc.val(0, x[0] - 0.2);
                if deriv {
                    acc.d(0, 0, 1.0);
                }
                for i in 1..n {
                    let y = exp((i + 1) as f64 / 10.0) + exp(i as f64 / 10.0);
                    acc.val(i, sa * (ex[i] + ex[i - 1] - y));
                    if deriv {
                        for j in [i, i - 1] {
                            acc.d(i, j, sa * ex[j] / 10.0);
                            acc.dd(i, j, j, sa * ex[j] / 100.0);
                        }
                    }
                }
                let e1 = exp(-0.1);
                for j in 1..n {
                    let i = n + j - 1;
                    acc.val(i, sa * (ex[j] - e1));
                    if deriv {
                        acc.d(i, j, sa * ex[j] / 10.0);
                        acc.dd(i, j, j, sa * ex[j] / 100.0);
                    }
                }
                let s: f64 = (0..n).map(|j| (n - j) as f64 * x[j] * x[j]).sum();
                acc.val(2 * n - 1, s - 1.0);
                if deriv {
                    for j in 0..n {
                        let w = (n - j) as f64;
                        acc.d(2 * n - 1, j, 2.0 * w * x[j]);
                        acc.dd(2 * n - 1, j, j, 2.0 * w);
                    }
                }
            }
            Mgh::Trigonometric => {
                let sum_cos: f64 = x.iter().map(|v| cos(*v)).sum();
                for i in 0..n {
                    let ii = (i + 1) as f64;
                    let (si, ci) = (sin(x[i]), cos(x[i]));
                    acc.val(i, n as f64 - sum_cos + ii * (1.0 - ci) - si);
                    if deriv {
                        for j in 0..n {
                            acc.d(i, j, sin(x[j]));
                            acc.dd(i, j, j, cos(x[j]));
                        }
                        acc.d(i, i, ii * si - ci);
                        acc.dd(i, i, i, ii * ci + si);
                    }
                }
            }
            Mgh::Wood => {
                let s90 = sqrt(90.0);
                let s10 = sqrt(10.0);
                acc.val(0, 10.0 * (x[1] - x[0] * x[0]));
                acc.val(1, 1.0 - x[0]);
                acc.val(2, s90 * (x[3] - x[2] * x[2]));
                acc.val(3, 1.0 - x[2]);
                acc.val(4, s10 * (x[1] + x[3] - 2.0));
                acc.val(5, (x[1] - x[3]) / s10);
                if deriv {
                    acc.d(0, 0, -20.0 * x[0]);
                    acc.d(0, 1, 10.0);
                    acc.dd(0, 0, 0, -20.0);
                    acc.d(1, 0, -1.0);
                    acc.d(2, 2, -2.0 * s90 * x[2]);
                    acc.d(2, 3, s90);
                    acc.dd(2, 2, 2, -2.0 * s90);
                    acc.d(3, 2, -1.0);
                    acc.d(4, 1, s10);
                    acc.d(4, 3, s10);
                    acc.d(5, 1, 1.0 / s10);
                    acc.d(5, 3, -1.0 / s10);
                }
            }
            Mgh::BiggsExp6 => {
                for i in 0..self.m {
                    let t = 0.1 * (i + 1) as f64;
                    let y = exp(-t) - 5.0 * exp(-10.0 * t) + 3.0 * exp(-4.0 * t);
                    let (e1, e2, e5) = (exp(-t * x[0]), exp(-t * x[1]), exp(-t * x[4]));
                    acc.val(i, x[2] * e1 - x[3] * e2 + x[5] * e5 - y);
                    if deriv {
                        acc.d(i, 0, -t * x[2] * e1);
                        acc.d(i, 1, t * x[3] * e2);
                        acc.d(i, 2, e1);
                        acc.d(i, 3, -e2);
                        acc.d(i, 4, -t * x[5] * e5);
                        acc.d(i, 5, e5);
                        acc.dd(i, 0, 0, t * t * x[2] * e1);
                        acc.dd(i, 0, 2, -t * e1);
                        acc.dd(i, 1, 1, -t * t * x[3] * e2);
                        acc.dd(i, 1, 3, t * e2);
                        acc.dd(i, 4, 4, t * t * x[5] * e5);
                        acc.dd(i, 4, 5, -t * e5);
                    }
                }
            }
            Mgh::Chebyquad => {
                let nf = n as f64;
                for v in acc.r.iter_mut() {
                    *v = 0.0;
                }
                for j in 0..n {
                    let z = 2.0 * x[j] - 1.0;
                    // T_k, T_k', T_k'' in z, advanced together
                    let (mut t0, mut t1) = (1.0, z);
                    let (mut d0, mut d1) = (0.0, 1.0);
                    let (mut s0, mut s1) = (0.0, 0.0);
                    for i in 0..n {
                        acc.r[i] += t1 / nf;
                        if deriv {
                            acc.d(i, j, 2.0 * d1 / nf);
                            acc.dd(i, j, j, 4.0 * s1 / nf);
                        }
                        let t2 = 2.0 * z * t1 - t0;
                        let d2 = 2.0 * t1 + 2.0 * z * d1 - d0;
                        let s2 = 4.0 * d1 + 2.0 * z * s1 - s0;
                        (t0, t1, d0, d1, s0, s1) = (t1, t2, d1, d2, s1, s2);
                    }
                }
                for i in 0..n {
                    let k = i + 1;
                    if k % 2 == 0 {
                        acc.r[i] += 1.0 / ((k * k) as f64 - 1.0);
                    }
                }
            }
        }
    }

    fn residuals(&self, x: &[f64]) -> alloc::vec::Vec<f64> {
        let mut r = vec![0.0; self.m];
        self.fill(
            x,
            &mut Acc {
                r: &mut r,
                jac: None,
                second: None,
            },
        );
        r
    }
}

impl Objective for LeastSquares {
    fn value(&self, x: &[f64]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        let mut r = vec![0.0; self.m];
        let mut jac = DMatrix::zeros(self.m, self.n);
        self.fill(
            x,
            &mut Acc {
                r: &mut r,
                jac: Some(&mut jac),
                second: None,
            },
        );
        for (j, gj) in g.iter_mut().enumerate() {
            *gj = 2.0 * (0..self.m).map(|i| jac[(i, j)] * r[i]).sum::<f64>();
        }
    }

    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        let r = self.residuals(x);
        let mut jac = DMatrix::zeros(self.m, self.n);
        let mut second = DMatrix::zeros(self.n, self.n);
        let mut scratch = vec![0.0; self.m];
        self.fill(
            x,
            &mut Acc {
                r: &mut scratch,
                jac: Some(&mut jac),
                second: Some((&r, &mut second)),
            },
        );
        Some((jac.transpose() * &jac + second) * 2.0)
    }

    fn has_hessian(&self) -> bool {
        true
    }
}
