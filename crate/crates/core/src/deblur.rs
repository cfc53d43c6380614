//! Quadratic image deblurring `min ½‖Ax − y‖² + (λ/2)‖Wx‖²`.
//!
//! `A` is an out-of-focus (disk) blur with reflective boundaries and `W` stacks the
//! forward differences along rows and columns with a zero difference at the far edge,
//! so `WᵀW` is the Neumann 5-point Laplacian. Both are applied matrix-free.

use alloc::vec;
use alloc::vec::Vec;

use libm::{log10, sqrt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{DirectionKind, SolverConfig, TermKind};
use crate::error::{Error, Result};
use crate::problem::{Objective, Problem};
use crate::report::SolveResult;
use crate::solver::solve_with_observer;
use crate::vecops::dot;

pub const DEFAULT_RADIUS: usize = 3;
pub const DEFAULT_LAMBDA: f64 = 0.1;
pub const DEFAULT_NOISE_SIGMA: f64 = 2.0;
pub const DEFAULT_ITERS: usize = 25;
/// Iterations of the reference solve that defines `f*`.
pub const REFERENCE_ITERS: usize = 2000;
/// Relative gradient norm at which the reference solve stops early.
pub const REFERENCE_GRAD_RATIO: f64 = 1e-10;

/// Row-major grayscale image. Pixels are nominally on the 0 to 255 scale but iterates
/// and noisy observations may leave it; only PGM output clamps.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter("image dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::Dimension {
                expected: width * height,
                got: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    fn same_shape(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::Dimension {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}

/// Half-sample reflection of an index into `0..n`; valid for `-n <= i < 2n`.
#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let r = if i < 0 {
        -i - 1
    } else if i >= n {
        2 * n - 1 - i
    } else {
        i
    };
    r as usize
}

/// Normalized disk blur `K(i, j) = 1/|D|` for `i² + j² <= r²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskBlur {
    pub radius: usize,
    /// `(dx, dy)` offsets of the disk.
    offsets: Vec<(isize, isize)>,
    weight: f64,
}

impl DiskBlur {
    pub fn new(radius: usize) -> Self {
        let r = radius as isize;
        let mut offsets = Vec::new();
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    offsets.push((dx, dy));
                }
            }
        }
        let weight = 1.0 / offsets.len() as f64;
        Self {
            radius,
            offsets,
            weight,
        }
    }

    pub fn support(&self) -> usize {
        self.offsets.len()
    }

    pub fn check_fits(&self, width: usize, height: usize) -> Result<()> {
        if 2 * self.radius > width.min(height) {
            return Err(Error::KernelTooLarge {
                radius: self.radius,
                width,
                height,
            });
        }
        Ok(())
    }

    /// `out = A x` for a `width × height` image stored row-major.
    pub fn apply(&self, width: usize, height: usize, x: &[f64], out: &mut [f64]) {
        let r = self.radius;
        let pw = width + 2 * r;
        let mut padded = vec![0.0; pw * (height + 2 * r)];
        for py in 0..height + 2 * r {
            let sy = reflect(py as isize - r as isize, height);
            for px in 0..pw {
                let sx = reflect(px as isize - r as isize, width);
                padded[py * pw + px] = x[sy * width + sx];
            }
        }
        let shifts: Vec<usize> = self
            .offsets
            .iter()
            .map(|&(dx, dy)| ((dy + r as isize) as usize) * pw + (dx + r as isize) as usize)
            .collect();
        for row in 0..height {
            for col in 0..width {
                let base = row * pw + col;
                let mut acc = 0.0;
                for &s in &shifts {
                    acc += padded[base + s];
                }
                out[row * width + col] = self.weight * acc;
            }
        }
    }

    /// `out = Aᵀ z`, computed by scattering each output pixel back over the padded
    /// grid and folding the margin onto the image.
    pub fn adjoint(&self, width: usize, height: usize, z: &[f64], out: &mut [f64]) {
        let r = self.radius;
        let pw = width + 2 * r;
        let mut padded = vec![0.0; pw * (height + 2 * r)];
        for row in 0..height {
            for col in 0..width {
                let v = self.weight * z[row * width + col];
                for &(dx, dy) in &self.offsets {
                    let py = (row as isize + dy + r as isize) as usize;
                    let px = (col as isize + dx + r as isize) as usize;
                    padded[py * pw + px] += v;
                }
            }
        }
        out.fill(0.0);
        for py in 0..height + 2 * r {
            let sy = reflect(py as isize - r as isize, height);
            for px in 0..pw {
                let sx = reflect(px as isize - r as isize, width);
                out[sy * width + sx] += padded[py * pw + px];
            }
        }
    }
}

/// `W x`: horizontal differences in `field[..n]`, vertical in `field[n..]`.
pub fn reg_apply(width: usize, height: usize, x: &[f64], field: &mut [f64]) {
    let n = width * height;
    let (dh, dv) = field.split_at_mut(n);
    for row in 0..height {
        for col in 0..width {
            let p = row * width + col;
            dh[p] = if col + 1 < width { x[p + 1] - x[p] } else { 0.0 };
            dv[p] = if row + 1 < height { x[p + width] - x[p] } else { 0.0 };
        }
    }
}

/// `Wᵀ field`.
pub fn reg_adjoint(width: usize, height: usize, field: &[f64], out: &mut [f64]) {
    let n = width * height;
    let (dh, dv) = field.split_at(n);
    out.fill(0.0);
    for row in 0..height {
        for col in 0..width {
            let p = row * width + col;
            if col + 1 < width {
                out[p + 1] += dh[p];
                out[p] -= dh[p];
            }
            if row + 1 < height {
                out[p + width] += dv[p];
                out[p] -= dv[p];
            }
        }
    }
}

/// Blurs an image with the disk kernel of the given radius.
pub fn blur_apply(img: &GrayImage, radius: usize) -> Result<GrayImage> {
    let blur = DiskBlur::new(radius);
    blur.check_fits(img.width, img.height)?;
    let mut out = vec![0.0; img.len()];
    blur.apply(img.width, img.height, &img.pixels, &mut out);
    GrayImage::new(img.width, img.height, out)
}

/// Observation, blur and regularization weight of one deblurring instance.
#[derive(Debug, Clone)]
pub struct DeblurProblem {
    pub y: GrayImage,
    pub blur: DiskBlur,
    pub lambda: f64,
}

impl DeblurProblem {
    /// `radius = 0` gives the identity blur.
    pub fn new(y: GrayImage, radius: usize, lambda: f64) -> Result<Self> {
        let blur = DiskBlur::new(radius);
        blur.check_fits(y.width, y.height)?;
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter("lambda must be finite and nonnegative".into()));
        }
        Ok(Self { y, blur, lambda })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// `(f, ∇f)` at `x`.
    pub fn objective(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut g = vec![0.0; x.len()];
        let f = self.eval(x, Some(&mut g));
        (f, g)
    }

    fn eval(&self, x: &[f64], g: Option<&mut [f64]>) -> f64 {
        let (w, h) = (self.y.width, self.y.height);
        let n = self.n();
        let mut resid = vec![0.0; n];
        self.blur.apply(w, h, x, &mut resid);
        for (r, yi) in resid.iter_mut().zip(&self.y.pixels) {
            *r -= yi;
        }
        let mut field = vec![0.0; 2 * n];
        reg_apply(w, h, x, &mut field);
        let f = 0.5 * dot(&resid, &resid) + 0.5 * self.lambda * dot(&field, &field);
        if let Some(g) = g {
            let mut tmp = vec![0.0; n];
            self.blur.adjoint(w, h, &resid, g);
            reg_adjoint(w, h, &field, &mut tmp);
            for (gi, ti) in g.iter_mut().zip(&tmp) {
                *gi += self.lambda * ti;
            }
        }
        f
    }

    /// `vᵀ(AᵀA + λWᵀW)v`, evaluated through the operators.
    pub fn curvature(&self, v: &[f64]) -> f64 {
        let (w, h) = (self.y.width, self.y.height);
        let mut av = vec![0.0; v.len()];
        self.blur.apply(w, h, v, &mut av);
        let mut wv = vec![0.0; 2 * v.len()];
        reg_apply(w, h, v, &mut wv);
        dot(&av, &av) + self.lambda * dot(&wv, &wv)
    }

    /// Smallest Rayleigh quotient of `AᵀA + λWᵀW` over `probes` seeded random directions.
    pub fn curvature_probe(&self, probes: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let mut min = f64::INFINITY;
        for _ in 0..probes {
            let v: Vec<f64> = (0..self.n()).map(|_| normal.sample(&mut rng)).collect();
            let q = self.curvature(&v) / dot(&v, &v);
            min = min.min(q);
        }
        min
    }

    /// The instance as a [`Problem`] starting from the observation.
    pub fn to_problem(&self) -> Problem {
        Problem::new("deblur", self.y.pixels.clone(), DeblurObjective(self.clone()))
    }
}

struct DeblurObjective(DeblurProblem);

impl Objective for DeblurObjective {
    fn value(&self, x: &[f64]) -> f64 {
        self.0.eval(x, None)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        self.0.eval(x, Some(g));
    }
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum())
}

/// `20 log10(‖y − x_true‖ / ‖x_b − x_true‖)`; `+∞` when `x_b` is exact.
pub fn isnr(y: &[f64], x_true: &[f64], x_b: &[f64]) -> f64 {
    let den = diff_norm(x_b, x_true);
    if den == 0.0 {
        return f64::INFINITY;
    }
    20.0 * log10(diff_norm(y, x_true) / den)
}

/// `20 log10(255 n / ‖x_b − x0‖)` with `n` the pixel count.
pub fn psnr_linear(x_b: &[f64], x0: &[f64]) -> f64 {
    psnr_with_peak(x_b, x0, 255.0 * x_b.len() as f64)
}

/// The usual `20 log10(255 √n / ‖x_b − x0‖)`.
pub fn psnr_std(x_b: &[f64], x0: &[f64]) -> f64 {
    psnr_with_peak(x_b, x0, 255.0 * sqrt(x_b.len() as f64))
}

fn psnr_with_peak(x_b: &[f64], x0: &[f64], peak: f64) -> f64 {
    let den = diff_norm(x_b, x0);
    if den == 0.0 {
        return f64::INFINITY;
    }
    20.0 * log10(peak / den)
}

/// Deterministic test scene: a diagonal ramp, a checkerboard patch, a bright disk
/// and a dark bar, all within `[20, 235]`.
pub fn synthetic_image(width: usize, height: usize) -> GrayImage {
    let mut px = Vec::with_capacity(width * height);
    let (wf, hf) = (width as f64, height as f64);
    for row in 0..height {
        for col in 0..width {
            let (u, v) = (col as f64 / wf, row as f64 / hf);
            let mut val = 40.0 + 100.0 * (u + v) / 2.0;
            if (0.1..0.45).contains(&u) && (0.1..0.45).contains(&v) {
                let cell = (col * 8 / width + row * 8 / height) % 2;
                val = if cell == 0 { 60.0 } else { 200.0 };
            }
            let (du, dv) = (u - 0.7, v - 0.65);
            if du * du + dv * dv < 0.04 {
                val = 235.0;
            }
            if (0.15..0.85).contains(&u) && (0.8..0.86).contains(&v) {
                val = 20.0;
            }
            px.push(val);
        }
    }
    GrayImage {
        width,
        height,
        pixels: px,
    }
}

/// `A x_true + e` with `e ~ N(0, noise_sigma²)` drawn from a seeded generator.
pub fn degrade(x_true: &GrayImage, radius: usize, noise_sigma: f64, seed: u64) -> Result<GrayImage> {
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::Parameter("noise sigma must be finite and nonnegative".into()));
    }
    let mut y = blur_apply(x_true, radius)?;
    if noise_sigma > 0.0 {
        let normal = Normal::new(0.0, noise_sigma).expect("validated sigma");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in y.pixels.iter_mut() {
            *p += normal.sample(&mut rng);
        }
    }
    Ok(y)
}

/// Solver settings for a deblurring run: BB2 direction, `ε = 0`, fixed iteration budget.
pub fn deblur_config(term: TermKind, iters: usize) -> SolverConfig {
    SolverConfig {
        eps: 0.0,
        maxiter: iters,
        ..SolverConfig::new(term, DirectionKind::Bb2)
    }
}

/// Objective value of a long BB2 run (at most `max_iters` iterations), used as `f*`
/// in the relative error.
///
/// The run stops once `‖g‖ <= 1e-10 ‖g_0‖`: the objective is then exact to double
/// precision and further iterations only backtrack against rounding noise.
pub fn reference_f_star(p: &DeblurProblem, max_iters: usize) -> Result<f64> {
    let problem = p.to_problem();
    let g0 = problem.grad(&problem.x0);
    let cfg = SolverConfig {
        eps: REFERENCE_GRAD_RATIO * sqrt(dot(&g0, &g0)),
        ..deblur_config(TermKind::G, max_iters)
    };
    Ok(crate::solver::solve(&problem, &cfg)?.f_b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeblurMetrics {
    pub iter: usize,
    pub f: f64,
    /// `(f_k − f*)/(f_0 − f*)`, when `f*` is known.
    pub rel: Option<f64>,
    /// ISNR of the iterate, when the clean image is known.
    pub isnr: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DeblurRun {
    pub x_b: GrayImage,
    /// One row per iterate, starting with `x_0 = y` at `iter = 0`.
    pub metrics: Vec<DeblurMetrics>,
    pub result: SolveResult,
}

/// Runs `iters` BB2 iterations from `x_0 = y` under the given term.
pub fn run_deblur(
    p: &DeblurProblem,
    term: TermKind,
    iters: usize,
    x_true: Option<&GrayImage>,
    f_star: Option<f64>,
) -> Result<DeblurRun> {
    if iters == 0 {
        return Err(Error::Parameter("iters must be at least 1".into()));
    }
    if let Some(t) = x_true {
        t.same_shape(&p.y)?;
    }
    let problem = p.to_problem();
    let mut rows: Vec<(usize, f64, Option<f64>)> = Vec::new();
    let result = solve_with_observer(&problem, &deblur_config(term, iters), |v| {
        let snr = x_true.map(|t| isnr(&p.y.pixels, &t.pixels, v.x));
        rows.push((v.k, v.f, snr));
    })?;
    let f0 = rows.first().map_or(result.f_b, |r| r.1);
    let metrics = rows
        .into_iter()
        .map(|(iter, f, isnr)| DeblurMetrics {
            iter,
            f,
            rel: f_star.map(|fs| (f - fs) / (f0 - fs)),
            isnr,
        })
        .collect();
    let x_b = GrayImage::new(p.y.width, p.y.height, result.x_b.clone())?;
    Ok(DeblurRun { x_b, metrics, result })
}

/// Variance of the pixel values.
pub fn variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}
