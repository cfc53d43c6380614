use nonmono_core::{
    catalog, get_problem, solve, DirectionKind, Problem, SizeClass, SolveResult, SolverConfig, Status,
    TermKind,
};

const TERMS: [TermKind; 6] = [TermKind::G, TermKind::H, TermKind::N, TermKind::M, TermKind::Nm1, TermKind::Nm2];

/// Badly scaled at the solution: BB and GD stall far from ε within the iteration budget.
const BADLY_SCALED: [&str; 2] = ["brown_badly_scaled", "powell_badly_scaled"];

/// Small-set problems where steepest descent reaches ε = 1e-5 within the default budget.
const GD_SET: [&str; 9] = [
    "beale",
    "variably_dimensioned",
    "watson",
    "box3d",
    "gaussian",
    "helical_valley",
    "penalty1",
    "trigonometric",
    "chebyquad",
];

fn small_problems() -> Vec<Problem> {
    catalog(SizeClass::Small)
        .iter()
        .map(|e| get_problem(&e.label(), None).unwrap())
        .collect()
}

/// A local maximizer has no nearby point with a larger value; find one.
fn assert_not_a_maximum(p: &Problem, r: &SolveResult) {
    let mut probe = r.x_b.clone();
    let mut found = false;
    for i in 0..probe.len() {
        for sign in [1.0, -1.0] {
            probe[i] = r.x_b[i] + sign * 1e-3 * (1.0 + r.x_b[i].abs());
            found |= p.f(&probe) > r.f_b;
            probe[i] = r.x_b[i];
        }
    }
    assert!(found, "{}: no nearby point above f_b", p.name);
}

fn check_runs(problems: &[Problem], direction: DirectionKind) {
    for p in problems {
        for term in TERMS {
            let r = solve(p, &SolverConfig::new(term, direction)).unwrap();
            assert_eq!(r.status, Status::Converged, "{} {term:?} {direction:?}", p.name);
            assert!(r.g_norm < 1e-5);
            assert_not_a_maximum(p, &r);
            assert_eq!(r.counters.n_iter + 1, r.counters.n_g);
        }
    }
}

#[test]
fn quasi_newton_runs_converge_everywhere() {
    let problems = small_problems();
    check_runs(&problems, DirectionKind::Lbfgs);
    check_runs(&problems, DirectionKind::Bfgs);
}

#[test]
fn bb_runs_converge_off_the_badly_scaled_pair() {
    let problems: Vec<Problem> = small_problems()
        .into_iter()
        .filter(|p| !BADLY_SCALED.contains(&p.name.as_str()))
        .collect();
    assert_eq!(problems.len(), 17);
    check_runs(&problems, DirectionKind::Bb1);
    check_runs(&problems, DirectionKind::Bb2);
}

#[test]
fn gradient_descent_converges_on_well_conditioned_problems() {
    let problems: Vec<Problem> = GD_SET.iter().map(|n| get_problem(n, None).unwrap()).collect();
    check_runs(&problems, DirectionKind::Gd);
}

#[test]
fn trace_respects_the_reference_value_bounds() {
    for p in small_problems() {
        for term in [TermKind::Mono, TermKind::G, TermKind::N, TermKind::Nm1, TermKind::Nm2] {
            for direction in [DirectionKind::Newton, DirectionKind::Lbfgs, DirectionKind::Bb2] {
                let r = solve(&p, &SolverConfig::new(term, direction)).unwrap();
                for t in &r.trace {
                    let tol = 1e-12 * (1.0 + t.f_k.abs());
                    assert!(t.f_k <= t.t_k + tol, "{} {term:?}: f_k > T_k at {}", p.name, t.k);
                    assert!(t.t_k <= t.f_lk + tol, "{} {term:?}: T_k > f_l(k) at {}", p.name, t.k);
                }
            }
        }
    }
}

#[test]
fn grippo_window_maximum_never_increases() {
    for p in small_problems() {
        for direction in [DirectionKind::Newton, DirectionKind::Bb1] {
            let r = solve(&p, &SolverConfig::new(TermKind::G, direction)).unwrap();
            for w in r.trace.windows(2) {
                assert!(w[1].f_lk <= w[0].f_lk, "{} at k = {}", p.name, w[1].k);
            }
        }
    }
}

#[test]
fn monotone_term_gives_nonincreasing_values() {
    for p in small_problems() {
        let r = solve(&p, &SolverConfig::new(TermKind::Mono, DirectionKind::Lbfgs)).unwrap();
        for w in r.trace.windows(2) {
            assert!(w[1].f_k <= w[0].f_k, "{}", p.name);
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[test]
fn reference_gap_shrinks_along_convergent_runs() {
    let mut checked = 0;
    for p in small_problems() {
        for term in TERMS {
            let r = solve(&p, &SolverConfig::new(term, DirectionKind::Lbfgs)).unwrap();
            if r.status != Status::Converged || r.trace.len() < 20 {
                continue;
            }
            let gap: Vec<f64> = r.trace.iter().map(|t| (t.t_k - t.f_k).abs()).collect();
            let first = median(gap[..10].to_vec());
            let last = median(gap[gap.len() - 10..].to_vec());
            assert!(last <= first, "{} {term:?}: {last} > {first}", p.name);
            checked += 1;
        }
    }
    assert!(checked > 50);
}
