use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sta_ident::bench::BenchFunction;
use sta_ident::plants::{
    closed_loop_example1, simulate_fopdt, Example1Params, FopdtParams, PidGains,
};
use sta_ident::problems::IdentificationProblem;
use sta_ident::pso::{pso_minimize, PsoConfig};
use sta_ident::sta::{axesion, expand, rotate, sta_minimize, translate, StaConfig, Transformation};
use sta_ident::SearchSpace;

fn vec_in(dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    dim.prop_flat_map(|n| prop::collection::vec(-100.0f64..100.0, n))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #[test]
    fn rotation_step_within_alpha(x in vec_in(1..=10), alpha in 1e-6f64..10.0, seed: u64) {
        prop_assume!(norm(&x) > 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = Transformation::Rotation { alpha }.draw(&x, &mut rng);
        let step: Vec<f64> = out.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&step) <= alpha * (1.0 + 1e-12));
    }

    #[test]
    fn rotation_with_extreme_matrix(x in vec_in(1..=10), alpha in 1e-3f64..5.0) {
        prop_assume!(norm(&x) > 0.0);
        let n = x.len();
        // All-ones attains the operator-norm bound when x is parallel to ones.
        let out = rotate(&x, alpha, &vec![1.0; n * n]);
        let step: Vec<f64> = out.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&step) <= alpha * (1.0 + 1e-12));
    }

    #[test]
    fn translation_is_collinear_and_short(
        xk in vec_in(1..=10),
        shift in prop::collection::vec(-5.0f64..5.0, 10),
        beta in 1e-3f64..10.0,
        r_t in 0.0f64..=1.0,
    ) {
        let prev: Vec<f64> = xk.iter().zip(&shift).map(|(a, s)| a - s).collect();
        let d: Vec<f64> = xk.iter().zip(&prev).map(|(a, b)| a - b).collect();
        prop_assume!(norm(&d) > 1e-9);
        let out = translate(&xk, &prev, beta, r_t);
        let step: Vec<f64> = out.iter().zip(&xk).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&step) <= beta * (1.0 + 1e-12));
        let c = step.iter().zip(&d).map(|(s, v)| s * v).sum::<f64>() / norm(&d).powi(2);
        prop_assert!(c >= 0.0);
        for (s, v) in step.iter().zip(&d) {
            prop_assert!((s - c * v).abs() <= 1e-9 * (1.0 + beta));
        }
    }

    #[test]
    fn expansion_scales_componentwise(
        x in vec_in(1..=10),
        g in prop::collection::vec(-3.0f64..3.0, 10),
        gamma in 1e-3f64..5.0,
    ) {
        let g = &g[..x.len()];
        let out = expand(&x, gamma, g);
        for i in 0..x.len() {
            if x[i] != 0.0 {
                prop_assert!((out[i] / x[i] - 1.0 - gamma * g[i]).abs() <= 1e-9 * (1.0 + gamma * g[i].abs()));
            } else {
                prop_assert_eq!(out[i], 0.0);
            }
        }
    }

    #[test]
    fn axesion_touches_one_axis(x in vec_in(1..=10), delta in 1e-3f64..5.0, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = Transformation::Axesion { delta }.draw(&x, &mut rng);
        prop_assert!(out.iter().zip(&x).filter(|(a, b)| a != b).count() <= 1);
        let direct = axesion(&x, delta, 0, 0.5);
        prop_assert!(direct[1..] == x[1..]);
    }

    #[test]
    fn sta_trace_non_increasing_and_feasible(seed: u64, dim in 1usize..6) {
        let space = SearchSpace::uniform(dim, -5.12, 5.12).unwrap();
        let cfg = StaConfig { seed, max_iter: 15, se: 10, ..Default::default() };
        let (best, trace) = sta_minimize(&BenchFunction::Rastrigin, &space, &cfg).unwrap();
        prop_assert!(trace.is_non_increasing());
        prop_assert!(space.contains(&best.x));
        prop_assert!(trace.rows.iter().all(|r| space.contains(&r.best_x)));
        prop_assert_eq!(best.value, BenchFunction::Rastrigin.value(&best.x));
    }

    #[test]
    fn pso_trace_non_increasing_and_feasible(seed: u64, dim in 1usize..6) {
        let space = SearchSpace::uniform(dim, -5.0, 5.0).unwrap();
        let cfg = PsoConfig { seed, max_iter: 15, swarm_size: 10, ..Default::default() };
        let (best, trace) = pso_minimize(&BenchFunction::Rosenbrock, &space, &cfg).unwrap();
        prop_assert!(trace.is_non_increasing());
        prop_assert!(space.contains(&best.x));
    }

    #[test]
    fn identification_mse_non_negative(t in prop::collection::vec(0.0f64..=2.0, 4)) {
        let p = IdentificationProblem::example1();
        prop_assert!(p.mse(&t).unwrap() >= 0.0);
    }

    #[test]
    fn fopdt_step_is_monotone_and_bounded(
        k in 0.1f64..20.0,
        t in 0.1f64..20.0,
        tau in 0.0f64..20.0,
    ) {
        let p = FopdtParams { k_gain: k, t_const: t, tau };
        let traj = simulate_fopdt(&p, &[1.0; 400], 400).unwrap();
        let d = p.delay_steps();
        for (i, x) in traj.y.iter().enumerate() {
            if i <= d {
                prop_assert_eq!(*x, 0.0);
            }
            if t >= 0.1 {
                // 1/(10T) <= 1 keeps the pole in [0, 1).
                prop_assert!(*x <= k * (1.0 + 1e-12));
            }
        }
        if d + 1 < traj.len() {
            prop_assert!((traj.y[d + 1] - k / (10.0 * t)).abs() <= 1e-12 * k.max(1.0));
        }
        prop_assert!(traj.y.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn closed_loop_is_deterministic() {
    let g = PidGains::new(0.2, 0.4, 0.05);
    let a = closed_loop_example1(&Example1Params::TRUE, &g, 2.0, 50);
    let b = closed_loop_example1(&Example1Params::TRUE, &g, 2.0, 50);
    assert_eq!(a, b);
}
