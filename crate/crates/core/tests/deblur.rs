use nonmono_core::deblur::{
    degrade, reference_f_star, run_deblur, synthetic_image, variance, DeblurProblem, GrayImage,
    REFERENCE_ITERS,
};
use nonmono_core::{grad_check, TermKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_instance(lambda: f64, seed: u64) -> (GrayImage, DeblurProblem) {
    let x = synthetic_image(24, 20);
    let y = degrade(&x, 3, 2.0, seed).unwrap();
    (x, DeblurProblem::new(y, 3, lambda).unwrap())
}

#[test]
fn gradient_matches_finite_differences_on_random_images() {
    let (_, p) = small_instance(0.1, 1);
    let problem = p.to_problem();
    // x0 plus five perturbations
    let rep = grad_check(&problem, 6, 17);
    assert!(rep.max_rel_err <= 1e-5, "{rep:?}");
}

#[test]
fn directional_derivative_on_a_full_size_image() {
    let x = synthetic_image(256, 256);
    let p = DeblurProblem::new(degrade(&x, 3, 2.0, 42).unwrap(), 3, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let at: Vec<f64> = x.pixels.iter().map(|v| v + rng.random_range(-20.0..20.0)).collect();
    let v: Vec<f64> = (0..at.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let (_, g) = p.objective(&at);
    let gv: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
    // the objective is quadratic, so central differences are exact up to rounding
    let t = 1e-3;
    let shifted = |s: f64| -> f64 {
        let z: Vec<f64> = at.iter().zip(&v).map(|(a, b)| a + s * b).collect();
        p.objective(&z).0
    };
    let fd = (shifted(t) - shifted(-t)) / (2.0 * t);
    assert!((fd - gv).abs() <= 1e-5 * (1.0 + gv.abs()), "fd {fd} vs {gv}");
}

#[test]
fn objective_is_nonnegative() {
    let (_, p) = small_instance(0.1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let x: Vec<f64> = (0..p.n()).map(|_| rng.random_range(-300.0..300.0)).collect();
        assert!(p.objective(&x).0 >= 0.0);
    }
}

#[test]
fn objective_is_strictly_convex() {
    let (_, p) = small_instance(0.1, 3);
    assert!(p.curvature_probe(20, 5) > 0.0);
    // gradient-difference form of the same probe
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let x: Vec<f64> = (0..p.n()).map(|_| rng.random_range(0.0..255.0)).collect();
        let v: Vec<f64> = (0..p.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = 1e-2;
        let xt: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + t * b).collect();
        let (_, g0) = p.objective(&x);
        let (_, g1) = p.objective(&xt);
        let curv: f64 = g1.iter().zip(&g0).zip(&v).map(|((a, b), c)| (a - b) * c).sum::<f64>() / t;
        assert!(curv > 0.0);
    }
}

#[test]
fn heavier_regularization_flattens_the_restoration() {
    let mut last = f64::INFINITY;
    for lambda in [0.1, 1.0, 10.0] {
        let (_, p) = small_instance(lambda, 9);
        let run = run_deblur(&p, TermKind::Nm1, 200, None, None).unwrap();
        let var = variance(&run.x_b.pixels);
        assert!(var < last, "lambda {lambda}: variance {var} >= {last}");
        last = var;
    }
}

#[test]
fn every_term_improves_on_the_observation() {
    let (x, p) = small_instance(0.1, 11);
    let f_star = reference_f_star(&p, REFERENCE_ITERS).unwrap();
    for term in [TermKind::G, TermKind::H, TermKind::N, TermKind::M, TermKind::Nm1, TermKind::Nm2] {
        let run = run_deblur(&p, term, 25, Some(&x), Some(f_star)).unwrap();
        let last = run.metrics.last().unwrap();
        assert!(last.isnr.unwrap() > 0.0, "{term:?}");
        assert!(last.rel.unwrap() < 0.05, "{term:?}");
        assert_eq!(run.metrics[0].iter, 0);
        assert_eq!(run.metrics[0].rel, Some(1.0));
    }
}

#[test]
fn one_iteration_budget_records_one_step() {
    let (_, p) = small_instance(0.1, 12);
    let run = run_deblur(&p, TermKind::G, 1, None, None).unwrap();
    assert_eq!(run.result.counters.n_iter, 1);
    assert_eq!(run.metrics.len(), 2);
    assert!(run_deblur(&p, TermKind::G, 0, None, None).is_err());
}
