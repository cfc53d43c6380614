//! Large-scale unconstrained test functions in the style of Andrei's collection.
//!
//! All evaluations are `O(n)`; only the separable Rosenbrock and Powell extensions carry
//! an analytic Hessian (they double as small Newton test problems).

use alloc::vec::Vec;

use libm::{cos, exp, log, sin, sqrt};
use nalgebra::DMatrix;

use crate::problem::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Large {
    ExtRosenbrock,
    ExtBeale,
    Dixmaan(char),
    Tridia,
    Dqdrtic,
    Arwhead,
    Liarwhd,
    Nondquar,
    Qf1,
    Qf2,
    Edensch,
    Engval1,
    Bdqrtic,
    Diagonal2,
    Diagonal3,
    Diagonal4,
    Diagonal5,
    Diagonal7,
    Diagonal8,
    ExtWood,
    ExtPowell,
    Raydan1,
    Sincos,
    Cosine,
    Himmelbg,
    BroydenTridiagonal,
    ExtTrid1,
    ExtTrid2,
    ExtHimmelblau,
    Quartc,
    ExtDenschnb,
    ExtDenschnf,
    ExtTet,
    Hager,
    ExtPenalty,
    ExtWhiteHolst,
    ExtQp1,
    ExtBd1,
    ExtMaratos,
    Bdexp,
    PerturbedQuadratic,
    Dixon3dq,
    Nonscomp,
}

/// `(α, β, γ, δ, k1, k2, k3, k4)` of the DIXMAAN family, variants `A` to `L`.
fn dixmaan_params(variant: char) -> (f64, f64, f64, f64, i32, i32, i32, i32) {
    let (beta, gamma, delta) = match variant {
        'A' | 'E' | 'I' => (0.0, 0.125, 0.125),
        'B' | 'F' | 'J' => (0.0625, 0.0625, 0.0625),
        'C' | 'G' | 'K' => (0.125, 0.125, 0.125),
        _ => (0.26, 0.26, 0.26),
    };
    let k = match variant {
        'A'..='D' => 0,
        'E'..='H' => 1,
        _ => 2,
    };
    (1.0, beta, gamma, delta, k, 0, 0, k)
}

impl Large {
    /// Required divisor of `n`, and the smallest admissible `n`.
    pub(crate) fn shape(self) -> (usize, usize) {
        match self {
            Large::ExtRosenbrock
            | Large::ExtBeale
            | Large::Diagonal4
            | Large::Sincos
            | Large::Himmelbg
            | Large::ExtTrid1
            | Large::ExtHimmelblau
            | Large::ExtDenschnb
            | Large::ExtDenschnf
            | Large::ExtTet
            | Large::ExtWhiteHolst
            | Large::ExtBd1
            | Large::ExtMaratos => (2, 2),
            Large::ExtWood | Large::ExtPowell => (4, 4),
            Large::Dixmaan(_) => (3, 3),
            Large::Bdqrtic => (1, 5),
            Large::Nondquar | Large::Dqdrtic | Large::Bdexp => (1, 3),
            _ => (1, 2),
        }
    }

    pub(crate) fn x0(self, n: usize) -> Vec<f64> {
        let alt = |a: f64, b: f64| (0..n).map(|i| if i % 2 == 0 { a } else { b }).collect();
        let fill = |v: f64| alloc::vec![v; n];
        match self {
            Large::ExtRosenbrock | Large::ExtWhiteHolst => alt(-1.2, 1.0),
            Large::ExtBeale => alt(1.0, 0.8),
            Large::Dixmaan(_) => fill(2.0),
            Large::Tridia
            | Large::Arwhead
            | Large::Qf1
            | Large::Bdqrtic
            | Large::Diagonal3
            | Large::Diagonal4
            | Large::Diagonal7
            | Large::Diagonal8
            | Large::Raydan1
            | Large::Cosine
            | Large::ExtTrid2
            | Large::ExtHimmelblau
            | Large::ExtDenschnb
            | Large::ExtQp1
            | Large::Hager
            | Large::Bdexp => fill(1.0),
            Large::Dqdrtic | Large::Nonscomp => fill(3.0),
            Large::Liarwhd => fill(4.0),
            Large::Nondquar => alt(1.0, -1.0),
            Large::Qf2 | Large::PerturbedQuadratic => fill(0.5),
            Large::Edensch => fill(0.0),
            Large::Engval1 | Large::ExtTrid1 | Large::Quartc => fill(2.0),
            Large::Diagonal2 => (1..=n).map(|i| 1.0 / i as f64).collect(),
            Large::Diagonal5 => fill(1.1),
            Large::ExtWood => (0..n).map(|i| if i % 2 == 0 { -3.0 } else { -1.0 }).collect(),
            Large::ExtPowell => (0..n).map(|i| [3.0, -1.0, 0.0, 1.0][i % 4]).collect(),
            Large::Sincos => alt(3.0, 0.1),
            Large::Himmelbg => fill(1.5),
            Large::BroydenTridiagonal | Large::Dixon3dq => fill(-1.0),
            Large::ExtDenschnf => alt(2.0, 0.0),
            Large::ExtTet => fill(0.1),
            Large::ExtPenalty => (1..=n).map(|i| i as f64).collect(),
            Large::ExtBd1 => fill(0.1),
            Large::ExtMaratos => alt(1.1, 0.1),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LargeProblem {
    pub(crate) kind: Large,
}

impl LargeProblem {
    /// Value and, when `g` is given, gradient.
    fn eval(&self, x: &[f64], mut g: Option<&mut [f64]>) -> f64 {
        let n = x.len();
        if let Some(g) = g.as_deref_mut() {
            g.fill(0.0);
        }
        // adds to g[i] when a gradient is requested
        macro_rules! gadd {
            ($i:expr, $v:expr) => {
                if let Some(g) = g.as_deref_mut() {
                    g[$i] += $v;
                }
            };
        }
        let mut f = 0.0;
        match self.kind {
            Large::ExtRosenbrock => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let t = b - a * a;
                    f += 100.0 * t * t + (1.0 - a) * (1.0 - a);
                    gadd!(i, -400.0 * a * t - 2.0 * (1.0 - a));
                    gadd!(i + 1, 200.0 * t);
                }
            }
            Large::ExtBeale => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let mut bp = 1.0;
                    for (k, y) in [1.5, 2.25, 2.625].iter().enumerate() {
                        let bp_prev = bp;
                        bp *= b;
                        let r = y - a * (1.0 - bp);
                        f += r * r;
                        gadd!(i, -2.0 * r * (1.0 - bp));
                        gadd!(i + 1, 2.0 * r * a * (k + 1) as f64 * bp_prev);
                    }
                }
            }
            Large::Dixmaan(v) => {
                let (alpha, beta, gamma, delta, k1, k2, k3, k4) = dixmaan_params(v);
                let m = n / 3;
                let nf = n as f64;
                let w = |i: usize, k: i32| libm::pow((i + 1) as f64 / nf, k as f64);
                f = 1.0;
                for i in 0..n {
                    let c = alpha * w(i, k1);
                    f += c * x[i] * x[i];
                    gadd!(i, 2.0 * c * x[i]);
                }
                if beta != 0.0 {
                    for i in 0..n - 1 {
                        let c = beta * w(i, k2);
                        let u = x[i + 1] + x[i + 1] * x[i + 1];
                        f += c * x[i] * x[i] * u * u;
                        gadd!(i, 2.0 * c * x[i] * u * u);
                        gadd!(i + 1, 2.0 * c * x[i] * x[i] * u * (1.0 + 2.0 * x[i + 1]));
                    }
                }
                for i in 0..2 * m {
                    let c = gamma * w(i, k3);
                    let y = x[i + m];
                    let y2 = y * y;
                    f += c * x[i] * x[i] * y2 * y2;
                    gadd!(i, 2.0 * c * x[i] * y2 * y2);
                    gadd!(i + m, 4.0 * c * x[i] * x[i] * y2 * y);
                }
                for i in 0..m {
                    let c = delta * w(i, k4);
                    f += c * x[i] * x[i + 2 * m];
                    gadd!(i, c * x[i + 2 * m]);
                    gadd!(i + 2 * m, c * x[i]);
                }
            }
            Large::Tridia => {
                let r = x[0] - 1.0;
                f += r * r;
                gadd!(0, 2.0 * r);
                for i in 1..n {
                    let c = (i + 1) as f64;
                    let r = 2.0 * x[i] - x[i - 1];
                    f += c * r * r;
                    gadd!(i, 4.0 * c * r);
                    gadd!(i - 1, -2.0 * c * r);
                }
            }
            Large::Dqdrtic => {
                for i in 0..n - 2 {
                    f += x[i] * x[i] + 100.0 * x[i + 1] * x[i + 1] + 100.0 * x[i + 2] * x[i + 2];
                    gadd!(i, 2.0 * x[i]);
                    gadd!(i + 1, 200.0 * x[i + 1]);
                    gadd!(i + 2, 200.0 * x[i + 2]);
                }
            }
            Large::Arwhead => {
                let xn = x[n - 1];
                for i in 0..n - 1 {
                    let q = x[i] * x[i] + xn * xn;
                    f += -4.0 * x[i] + 3.0 + q * q;
                    gadd!(i, -4.0 + 4.0 * q * x[i]);
                    gadd!(n - 1, 4.0 * q * xn);
                }
            }
            Large::Liarwhd => {
                for i in 0..n {
                    let t = x[i] * x[i] - x[0];
                    f += 4.0 * t * t + (x[i] - 1.0) * (x[i] - 1.0);
                    gadd!(i, 16.0 * t * x[i] + 2.0 * (x[i] - 1.0));
                    gadd!(0, -8.0 * t);
                }
            }
            Large::Nondquar => {
                let d = x[0] - x[1];
                f += d * d;
                gadd!(0, 2.0 * d);
                gadd!(1, -2.0 * d);
                let xn = x[n - 1];
                for i in 0..n - 2 {
                    let s = x[i] + x[i + 1] + xn;
                    f += s * s * s * s;
                    let ds = 4.0 * s * s * s;
                    gadd!(i, ds);
                    gadd!(i + 1, ds);
                    gadd!(n - 1, ds);
                }
                let s = x[n - 2] + xn;
                f += s * s;
                gadd!(n - 2, 2.0 * s);
                gadd!(n - 1, 2.0 * s);
            }
            Large::Qf1 => {
                for i in 0..n {
                    let c = (i + 1) as f64;
                    f += 0.5 * c * x[i] * x[i];
                    gadd!(i, c * x[i]);
                }
                f -= x[n - 1];
                gadd!(n - 1, -1.0);
            }
            Large::Qf2 => {
                for i in 0..n {
                    let c = (i + 1) as f64;
                    let t = x[i] * x[i] - 1.0;
                    f += 0.5 * c * t * t;
                    gadd!(i, 2.0 * c * t * x[i]);
                }
                f -= x[n - 1];
                gadd!(n - 1, -1.0);
            }
            Large::Edensch => {
                f = 16.0;
                for i in 0..n - 1 {
                    let a = x[i] - 2.0;
                    let b = x[i] * x[i + 1] - 2.0 * x[i + 1];
                    let c = x[i + 1] + 1.0;
                    f += a * a * a * a + b * b + c * c;
                    gadd!(i, 4.0 * a * a * a + 2.0 * b * x[i + 1]);
                    gadd!(i + 1, 2.0 * b * (x[i] - 2.0) + 2.0 * c);
                }
            }
            Large::Engval1 => {
                for i in 0..n - 1 {
                    let q = x[i] * x[i] + x[i + 1] * x[i + 1];
                    f += q * q - 4.0 * x[i] + 3.0;
                    gadd!(i, 4.0 * q * x[i] - 4.0);
                    gadd!(i + 1, 4.0 * q * x[i + 1]);
                }
            }
            Large::Bdqrtic => {
                let xn = x[n - 1];
                for i in 0..n - 4 {
                    let a = -4.0 * x[i] + 3.0;
                    let q = x[i] * x[i]
                        + 2.0 * x[i + 1] * x[i + 1]
                        + 3.0 * x[i + 2] * x[i + 2]
                        + 4.0 * x[i + 3] * x[i + 3]
                        + 5.0 * xn * xn;
                    f += a * a + q * q;
                    gadd!(i, -8.0 * a);
                    for k in 0..4 {
                        gadd!(i + k, 4.0 * q * (k + 1) as f64 * x[i + k]);
                    }
                    gadd!(n - 1, 20.0 * q * xn);
                }
            }
            Large::Diagonal2 => {
                for i in 0..n {
                    let e = exp(x[i]);
                    let c = 1.0 / (i + 1) as f64;
                    f += e - c * x[i];
                    gadd!(i, e - c);
                }
            }
            Large::Diagonal3 => {
                for i in 0..n {
                    let c = (i + 1) as f64;
                    f += exp(x[i]) - c * sin(x[i]);
                    gadd!(i, exp(x[i]) - c * cos(x[i]));
                }
            }
            Large::Diagonal4 => {
                for i in (0..n).step_by(2) {
                    f += 0.5 * (x[i] * x[i] + 100.0 * x[i + 1] * x[i + 1]);
                    gadd!(i, x[i]);
                    gadd!(i + 1, 100.0 * x[i + 1]);
                }
            }
            Large::Diagonal5 => {
                for &xi in x.iter() {
                    // log(e^x + e^-x) = |x| + log(1 + e^{-2|x|})
                    let a = xi.abs();
                    f += a + log(1.0 + exp(-2.0 * a));
                }
                if let Some(g) = g.as_deref_mut() {
                    for (gi, xi) in g.iter_mut().zip(x) {
                        *gi = libm::tanh(*xi);
                    }
                }
            }
            Large::Diagonal7 => {
                for i in 0..n {
                    let e = exp(x[i]);
                    f += e - 2.0 * x[i] - x[i] * x[i];
                    gadd!(i, e - 2.0 - 2.0 * x[i]);
                }
            }
            Large::Diagonal8 => {
                for i in 0..n {
                    let e = exp(x[i]);
                    f += x[i] * e - 2.0 * x[i] - x[i] * x[i];
                    gadd!(i, e + x[i] * e - 2.0 - 2.0 * x[i]);
                }
            }
            Large::ExtWood => {
                for i in (0..n).step_by(4) {
                    let (a, b, c, d) = (x[i], x[i + 1], x[i + 2], x[i + 3]);
                    let t1 = a * a - b;
                    let t2 = c * c - d;
                    f += 100.0 * t1 * t1
                        + (a - 1.0) * (a - 1.0)
                        + 90.0 * t2 * t2
                        + (1.0 - c) * (1.0 - c)
                        + 10.1 * ((b - 1.0) * (b - 1.0) + (d - 1.0) * (d - 1.0))
                        + 19.8 * (b - 1.0) * (d - 1.0);
                    gadd!(i, 400.0 * t1 * a + 2.0 * (a - 1.0));
                    gadd!(i + 1, -200.0 * t1 + 20.2 * (b - 1.0) + 19.8 * (d - 1.0));
                    gadd!(i + 2, 360.0 * t2 * c - 2.0 * (1.0 - c));
                    gadd!(i + 3, -180.0 * t2 + 20.2 * (d - 1.0) + 19.8 * (b - 1.0));
                }
            }
            Large::ExtPowell => {
                for i in (0..n).step_by(4) {
                    let (a, b, c, d) = (x[i], x[i + 1], x[i + 2], x[i + 3]);
                    let t1 = a + 10.0 * b;
                    let t2 = c - d;
                    let t3 = b - 2.0 * c;
                    let t4 = a - d;
                    f += t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3 + 10.0 * t4 * t4 * t4 * t4;
                    let t3c = 4.0 * t3 * t3 * t3;
                    let t4c = 40.0 * t4 * t4 * t4;
                    gadd!(i, 2.0 * t1 + t4c);
                    gadd!(i + 1, 20.0 * t1 + t3c);
                    gadd!(i + 2, 10.0 * t2 - 2.0 * t3c);
                    gadd!(i + 3, -10.0 * t2 - t4c);
                }
            }
            Large::Raydan1 => {
                for i in 0..n {
                    let c = (i + 1) as f64 / 10.0;
                    let e = exp(x[i]);
                    f += c * (e - x[i]);
                    gadd!(i, c * (e - 1.0));
                }
            }
            Large::Sincos => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let q = a * a + b * b + a * b;
                    let (sa, cb) = (sin(a), cos(b));
                    f += q * q + sa * sa + cb * cb;
                    gadd!(i, 2.0 * q * (2.0 * a + b) + 2.0 * sa * cos(a));
                    gadd!(i + 1, 2.0 * q * (2.0 * b + a) - 2.0 * cb * sin(b));
                }
            }
            Large::Cosine => {
                for i in 0..n - 1 {
                    let u = -0.5 * x[i + 1] + x[i] * x[i];
                    f += cos(u);
                    let s = -sin(u);
                    gadd!(i, 2.0 * x[i] * s);
                    gadd!(i + 1, -0.5 * s);
                }
            }
            Large::Himmelbg => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let p = 2.0 * a * a + 3.0 * b * b;
                    let e = exp(-a - b);
                    f += p * e;
                    gadd!(i, (4.0 * a - p) * e);
                    gadd!(i + 1, (6.0 * b - p) * e);
                }
            }
            Large::BroydenTridiagonal => {
                for i in 0..n {
                    let prev = if i > 0 { x[i - 1] } else { 0.0 };
                    let next = if i + 1 < n { x[i + 1] } else { 0.0 };
                    let r = (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0;
                    f += r * r;
                    gadd!(i, 2.0 * r * (3.0 - 4.0 * x[i]));
                    if i > 0 {
                        gadd!(i - 1, -2.0 * r);
                    }
                    if i + 1 < n {
                        gadd!(i + 1, -4.0 * r);
                    }
                }
            }
            Large::ExtTrid1 => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let s = a + b - 3.0;
                    let d = a - b + 1.0;
                    f += s * s + d * d * d * d;
                    let dc = 4.0 * d * d * d;
                    gadd!(i, 2.0 * s + dc);
                    gadd!(i + 1, 2.0 * s - dc);
                }
            }
            Large::ExtTrid2 => {
                for i in 0..n - 1 {
                    let p = x[i] * x[i + 1] - 1.0;
                    f += p * p + 0.1 * (x[i] + 1.0) * (x[i + 1] + 1.0);
                    gadd!(i, 2.0 * p * x[i + 1] + 0.1 * (x[i + 1] + 1.0));
                    gadd!(i + 1, 2.0 * p * x[i] + 0.1 * (x[i] + 1.0));
                }
            }
            Large::ExtHimmelblau => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let u = a * a + b - 11.0;
                    let v = a + b * b - 7.0;
                    f += u * u + v * v;
                    gadd!(i, 4.0 * u * a + 2.0 * v);
                    gadd!(i + 1, 2.0 * u + 4.0 * v * b);
                }
            }
            Large::Quartc => {
                for i in 0..n {
                    let t = x[i] - 1.0;
                    f += t * t * t * t;
                    gadd!(i, 4.0 * t * t * t);
                }
            }
            Large::ExtDenschnb => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let u = a - 2.0;
                    f += u * u + u * u * b * b + (b + 1.0) * (b + 1.0);
                    gadd!(i, 2.0 * u + 2.0 * u * b * b);
                    gadd!(i + 1, 2.0 * u * u * b + 2.0 * (b + 1.0));
                }
            }
            Large::ExtDenschnf => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let u = 2.0 * (a + b) * (a + b) + (a - b) * (a - b) - 8.0;
                    let v = 5.0 * a * a + (b - 3.0) * (b - 3.0) - 9.0;
                    f += u * u + v * v;
                    gadd!(i, 2.0 * u * (4.0 * (a + b) + 2.0 * (a - b)) + 20.0 * v * a);
                    gadd!(i + 1, 2.0 * u * (4.0 * (a + b) - 2.0 * (a - b)) + 4.0 * v * (b - 3.0));
                }
            }
            Large::ExtTet => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let e1 = exp(a + 3.0 * b - 0.1);
                    let e2 = exp(a - 3.0 * b - 0.1);
                    let e3 = exp(-a - 0.1);
                    f += e1 + e2 + e3;
                    gadd!(i, e1 + e2 - e3);
                    gadd!(i + 1, 3.0 * e1 - 3.0 * e2);
                }
            }
            Large::Hager => {
                for i in 0..n {
                    let c = sqrt((i + 1) as f64);
                    let e = exp(x[i]);
                    f += e - c * x[i];
                    gadd!(i, e - c);
                }
            }
            Large::ExtPenalty => {
                let s: f64 = x.iter().map(|v| v * v).sum::<f64>() - 0.25;
                f = s * s;
                for i in 0..n {
                    if i < n - 1 {
                        f += (x[i] - 1.0) * (x[i] - 1.0);
                        gadd!(i, 2.0 * (x[i] - 1.0));
                    }
                    gadd!(i, 4.0 * s * x[i]);
                }
            }
            Large::ExtWhiteHolst => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let t = b - a * a * a;
                    f += 100.0 * t * t + (1.0 - a) * (1.0 - a);
                    gadd!(i, -600.0 * t * a * a - 2.0 * (1.0 - a));
                    gadd!(i + 1, 200.0 * t);
                }
            }
            Large::ExtQp1 => {
                let s: f64 = x.iter().map(|v| v * v).sum::<f64>() - 0.5;
                f = s * s;
                for i in 0..n {
                    if i < n - 1 {
                        let t = x[i] * x[i] - 2.0;
                        f += t * t;
                        gadd!(i, 4.0 * t * x[i]);
                    }
                    gadd!(i, 4.0 * s * x[i]);
                }
            }
            Large::ExtBd1 => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let u = a * a + b - 2.0;
                    let e = exp(a - 1.0);
                    let v = e - b;
                    f += u * u + v * v;
                    gadd!(i, 4.0 * u * a + 2.0 * v * e);
                    gadd!(i + 1, 2.0 * u - 2.0 * v);
                }
            }
            Large::ExtMaratos => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    let t = a * a + b * b - 1.0;
                    f += a + 100.0 * t * t;
                    gadd!(i, 1.0 + 400.0 * t * a);
                    gadd!(i + 1, 400.0 * t * b);
                }
            }
            Large::Bdexp => {
                for i in 0..n - 2 {
                    let s = x[i] + x[i + 1];
                    let e = exp(-x[i + 2] * s);
                    f += s * e;
                    let ds = e * (1.0 - x[i + 2] * s);
                    gadd!(i, ds);
                    gadd!(i + 1, ds);
                    gadd!(i + 2, -s * s * e);
                }
            }
            Large::PerturbedQuadratic => {
                let s: f64 = x.iter().sum();
                f = s * s / 100.0;
                for i in 0..n {
                    let c = (i + 1) as f64;
                    f += c * x[i] * x[i];
                    gadd!(i, 2.0 * c * x[i] + s / 50.0);
                }
            }
            Large::Dixon3dq => {
                let a = x[0] - 1.0;
                let b = x[n - 1] - 1.0;
                f = a * a + b * b;
                gadd!(0, 2.0 * a);
                gadd!(n - 1, 2.0 * b);
                for j in 1..n - 1 {
                    let d = x[j] - x[j + 1];
                    f += d * d;
                    gadd!(j, 2.0 * d);
                    gadd!(j + 1, -2.0 * d);
                }
            }
            Large::Nonscomp => {
                let a = x[0] - 1.0;
                f = a * a;
                gadd!(0, 2.0 * a);
                for i in 1..n {
                    let t = x[i] - x[i - 1] * x[i - 1];
                    f += 4.0 * t * t;
                    gadd!(i, 8.0 * t);
                    gadd!(i - 1, -16.0 * t * x[i - 1]);
                }
            }
        }
        f
    }

    fn block_hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        let n = x.len();
        let mut h = DMatrix::zeros(n, n);
        match self.kind {
            Large::ExtRosenbrock => {
                for i in (0..n).step_by(2) {
                    let (a, b) = (x[i], x[i + 1]);
                    h[(i, i)] = 1200.0 * a * a - 400.0 * b + 2.0;
                    h[(i, i + 1)] = -400.0 * a;
                    h[(i + 1, i)] = -400.0 * a;
                    h[(i + 1, i + 1)] = 200.0;
                }
            }
            Large::ExtPowell => {
                for i in (0..n).step_by(4) {
                    let (a, b, c, d) = (x[i], x[i + 1], x[i + 2], x[i + 3]);
                    let t3 = 12.0 * (b - 2.0 * c) * (b - 2.0 * c);
                    let t4 = 120.0 * (a - d) * (a - d);
                    let block = [
                        [2.0 + t4, 20.0, 0.0, -t4],
                        [20.0, 200.0 + t3, -2.0 * t3, 0.0],
                        [0.0, -2.0 * t3, 10.0 + 4.0 * t3, -10.0],
                        [-t4, 0.0, -10.0, 10.0 + t4],
                    ];
                    for (r, row) in block.iter().enumerate() {
                        for (c, v) in row.iter().enumerate() {
                            h[(i + r, i + c)] = *v;
                        }
                    }
                }
            }
            _ => return None,
        }
        Some(h)
    }
}

impl Objective for LargeProblem {
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x, None)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        self.eval(x, Some(g));
    }

    fn hessian(&self, x: &[f64]) -> Option<DMatrix<f64>> {
        self.block_hessian(x)
    }

    fn has_hessian(&self) -> bool {
        matches!(self.kind, Large::ExtRosenbrock | Large::ExtPowell)
    }
}
