mod common;

use approx::assert_relative_eq;
use cflab_core::dirichlet::{
    decompose, dirichlet_energy, harmonic_residual, p_laplacian, solve_dirichlet,
    solve_dirichlet_from, Initialization,
};
use cflab_core::{build_ball, Ball, Error, ScalarField, SolverConfig};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn hashed_boundary(ball: &Ball) -> BTreeMap<usize, f64> {
    ball.sphere(ball.radius())
        .into_iter()
        .map(|i| (i, ((i * 7919) % 101) as f64 / 100.0))
        .collect()
}

// Solve the p = 2 problem as a sparse-free dense linear system:
// deg·h(g) - Σ_{interior nbrs} h = Σ_{boundary nbrs} b.
fn linear_oracle(ball: &Ball, boundary: &BTreeMap<usize, f64>) -> Vec<f64> {
    let interior: Vec<usize> = (0..ball.len()).filter(|&i| ball.is_interior(i)).collect();
    let mut slot = vec![usize::MAX; ball.len()];
    for (k, &i) in interior.iter().enumerate() {
        slot[i] = k;
    }
    let n = interior.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for (k, &i) in interior.iter().enumerate() {
        for j in ball.neighbors(i).iter().map(|j| j.unwrap()) {
            a[(k, k)] += 1.0;
            match boundary.get(&j) {
                Some(&b) => rhs[k] += b,
                None => a[(k, slot[j])] -= 1.0,
            }
        }
    }
    let x = a.lu().solve(&rhs).unwrap();
    let mut out = vec![0.0; ball.len()];
    for (&i, &b) in boundary {
        out[i] = b;
    }
    for (k, &i) in interior.iter().enumerate() {
        out[i] = x[k];
    }
    out
}

#[test]
fn p2_solver_matches_the_linear_system() {
    for (g, r) in [
        (common::z2(), 6),
        (common::f2(), 4),
        (common::z2_star_z3(), 5),
    ] {
        let ball = build_ball(&g, r).unwrap();
        let boundary = hashed_boundary(&ball);
        let (h, report) = solve_dirichlet(&ball, &boundary, &SolverConfig::new(2.0)).unwrap();
        assert!(report.converged);
        let exact = linear_oracle(&ball, &boundary);
        let err = h
            .values()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
    }
}

#[test]
fn energy_gradient_is_minus_2p_laplacian() {
    let ball = build_ball(&common::f2(), 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [1.5, 2.0, 3.0, 4.0] {
        for _ in 0..5 {
            let f = ScalarField::from_fn(&ball, |_| rng.gen_range(-1.0..1.0));
            for g in (0..ball.len()).filter(|&i| ball.is_interior(i)).step_by(4) {
                let step = 1e-6;
                let mut plus = f.clone();
                plus.set(g, f.get(g) + step);
                let mut minus = f.clone();
                minus.set(g, f.get(g) - step);
                let fd = (dirichlet_energy(&ball, &plus, p).unwrap()
                    - dirichlet_energy(&ball, &minus, p).unwrap())
                    / (2.0 * step);
                let exact = -2.0 * p * p_laplacian(&ball, &f, p, g).unwrap();
                assert_relative_eq!(fd, exact, max_relative = 1e-4);
            }
        }
    }
}

#[test]
fn solver_contracts_hold() {
    for (g, r) in [(common::z2(), 5), (common::f2(), 3)] {
        let ball = build_ball(&g, r).unwrap();
        let boundary = hashed_boundary(&ball);
        let lo = boundary.values().copied().fold(f64::INFINITY, f64::min);
        let hi = boundary.values().copied().fold(f64::NEG_INFINITY, f64::max);
        for p in [1.5, 2.0, 4.0] {
            let config = SolverConfig::new(p);
            let (h1, r1) = solve_dirichlet_from(
                &ball,
                &boundary,
                &config,
                &Initialization::Random { seed: 1 },
            )
            .unwrap();
            let (h2, _) = solve_dirichlet_from(
                &ball,
                &boundary,
                &config,
                &Initialization::Random { seed: 2 },
            )
            .unwrap();
            assert!(r1.converged && r1.residual <= config.tolerance);
            assert!(r1.energy_trace.windows(2).all(|w| w[1] <= w[0]));
            assert!(h1.values().iter().all(|&v| lo <= v && v <= hi));
            assert!(h1.sup_distance(&h2) <= 10.0 * config.tolerance, "p={p}");
            for (&i, &b) in &boundary {
                assert_eq!(h1.get(i), b);
            }
            assert!(harmonic_residual(&ball, &h1, p).unwrap() <= config.tolerance);
        }
    }
}

#[test]
fn p_harmonic_extension_is_nonlinear_away_from_p2() {
    let ball = build_ball(&common::f2(), 1).unwrap();
    let e =
        |k: usize| -> BTreeMap<usize, f64> { (1..5).map(|i| (i, (i == k) as u8 as f64)).collect() };
    let both: BTreeMap<usize, f64> = (1..5).map(|i| (i, (i <= 2) as u8 as f64)).collect();
    let solve = |b: &BTreeMap<usize, f64>, p: f64| {
        solve_dirichlet(&ball, b, &SolverConfig::new(p))
            .unwrap()
            .0
            .get(0)
    };
    let linear2 = solve(&e(1), 2.0) + solve(&e(2), 2.0);
    assert_relative_eq!(solve(&both, 2.0), linear2, epsilon = 1e-10);
    let sum4 = solve(&e(1), 4.0) + solve(&e(2), 4.0);
    assert!((solve(&both, 4.0) - sum4).abs() > 0.1);
    // Single interior vertex: 3t³ = (1 - t)³.
    assert_relative_eq!(solve(&e(1), 4.0), 1.0 / (1.0 + 3f64.cbrt()), epsilon = 1e-9);
}

#[test]
fn decomposition_splits_off_a_vanishing_part() {
    let ball = build_ball(&common::z2(), 4).unwrap();
    let f = ScalarField::from_fn(&ball, |i| (ball.length(i) as f64).sin());
    let d = decompose(&ball, &f, &SolverConfig::new(3.0)).unwrap();
    for i in ball.sphere(4) {
        assert_eq!(d.u.get(i), 0.0);
    }
    for i in 0..ball.len() {
        assert_relative_eq!(d.u.get(i) + d.h.get(i), f.get(i), epsilon = 1e-15);
    }
    assert!(
        dirichlet_energy(&ball, &d.h, 3.0).unwrap() <= dirichlet_energy(&ball, &f, 3.0).unwrap()
    );
}

#[test]
fn bad_boundaries_are_rejected() {
    let ball = build_ball(&common::f2(), 2).unwrap();
    let mut boundary = hashed_boundary(&ball);
    boundary.remove(&ball.sphere(2)[0]);
    assert!(matches!(
        solve_dirichlet(&ball, &boundary, &SolverConfig::new(2.0)),
        Err(Error::BoundaryMismatch(_))
    ));
    let full = hashed_boundary(&ball);
    assert!(solve_dirichlet(&ball, &full, &SolverConfig::new(1.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_translation_invariant_and_homogeneous(
        values in prop::collection::vec(-10.0f64..10.0, 17),
        shift in -5.0f64..5.0,
        scale in -3.0f64..3.0,
        p in 1.0f64..4.0,
    ) {
        let ball = build_ball(&common::f2(), 2).unwrap();
        let f = ScalarField::new(values.clone()).unwrap();
        let e = dirichlet_energy(&ball, &f, p).unwrap();
        let shifted = ScalarField::new(values.iter().map(|v| v + shift).collect()).unwrap();
        let scaled = ScalarField::new(values.iter().map(|v| v * scale).collect()).unwrap();
        prop_assert!((dirichlet_energy(&ball, &shifted, p).unwrap() - e).abs() <= 1e-9 * e.max(1.0));
        let expect = scale.abs().powf(p) * e;
        prop_assert!((dirichlet_energy(&ball, &scaled, p).unwrap() - expect).abs() <= 1e-9 * expect.max(1.0));
    }

    #[test]
    fn solver_commutes_with_affine_maps(c in 0.5f64..2.0, d in -1.0f64..1.0) {
        let ball = build_ball(&common::z2(), 3).unwrap();
        let boundary = hashed_boundary(&ball);
        let mapped: BTreeMap<usize, f64> = boundary.iter().map(|(&i, &b)| (i, c * b + d)).collect();
        let config = SolverConfig::new(3.0);
        let (h, _) = solve_dirichlet(&ball, &boundary, &config).unwrap();
        let (hm, _) = solve_dirichlet(&ball, &mapped, &config).unwrap();
        for i in 0..ball.len() {
            prop_assert!((hm.get(i) - (c * h.get(i) + d)).abs() <= 1e-8);
        }
    }
}
