use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use rds_ergodic::dynamics::conditional_expectation;
use rds_ergodic::ergodic::{
    birkhoff_averages, convergence_report, exact_cesaro_limit, ExactLimits, ExpectationFlow, PathSampler,
    SimulationConfig, Start,
};
use rds_ergodic::kernels::{is_strictly_irreducible, validate_spec};
use rds_ergodic::oracles::{generate_system, FamilyStyle, GeneratorConfig};
use rds_ergodic::{FiniteMeasureSpace, ProbVector, SkewSystem, StochasticMatrix, TransformationFamily};

fn config(style: FamilyStyle) -> GeneratorConfig {
    GeneratorConfig {
        seed: 0xcafe,
        states: 1..=5,
        points: 1..=4,
        family_style: style,
        degenerate_bias: 0.4,
        ..Default::default()
    }
}

fn style() -> impl Strategy<Value = FamilyStyle> {
    prop_oneof![Just(FamilyStyle::UniformPermutations), Just(FamilyStyle::LevelSetPermutations)]
}

/// i.i.d. states with law `m`, rotation on even states, identity on odd ones.
fn bernoulli_rotation(m: &[f64], points: usize) -> SkewSystem {
    let rows = vec![m.to_vec(); m.len()];
    let spec = validate_spec(StochasticMatrix::from_rows(rows).unwrap(), ProbVector::new(m.to_vec()).unwrap()).unwrap();
    let rotate: Vec<usize> = (0..points).map(|x| (x + 1) % points).collect();
    let tables = (0..m.len()).map(|y| if y % 2 == 0 { rotate.clone() } else { (0..points).collect() }).collect();
    let family = TransformationFamily::from_tables(FiniteMeasureSpace::uniform(points), tables).unwrap();
    SkewSystem::new(spec, family).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expectation_flow_conserves_mass(index in any::<u64>(), style in style()) {
        let sys = generate_system(&config(style), index).unwrap();
        let x = sys.space().support()[index as usize % sys.space().support().len()];
        let ones = vec![1.0; sys.space().len()];
        let mut flow = ExpectationFlow::new(&sys, x).unwrap();
        for _ in 0..1000 {
            flow.advance();
            prop_assert!((flow.total_mass() - 1.0).abs() <= 1e-12);
        }
        prop_assert!((flow.expectation(&ones) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cesaro_limit_preserves_the_integral(index in any::<u64>(), style in style(), f in prop::collection::vec(-5.0f64..5.0, 4)) {
        let sys = generate_system(&config(style), index).unwrap();
        let f = &f[..sys.space().len()];
        let limits = ExactLimits::new(&sys);
        let tilde: Vec<f64> = (0..sys.space().len())
            .map(|x| if sys.space().mu().contains(x) { limits.cesaro_limit(f, x).unwrap() } else { 0.0 })
            .collect();
        prop_assert!((sys.space().integral(&tilde) - sys.space().integral(f)).abs() <= 1e-12);
    }

    #[test]
    fn birkhoff_limit_is_invariant(index in any::<u64>(), style in style(), f in prop::collection::vec(-5.0f64..5.0, 4)) {
        let sys = generate_system(&config(style), index).unwrap();
        let f = &f[..sys.space().len()];
        let limits = ExactLimits::new(&sys);
        let kernel = sys.spec().kernel();
        for &y in sys.spec().support() {
            for &x in sys.space().support() {
                let image = sys.family().map(y).apply(x);
                let pushed: f64 = kernel
                    .successors(y)
                    .iter()
                    .map(|&z| kernel.get(y, z) * limits.birkhoff_limit(z, image, f).unwrap())
                    .sum();
                prop_assert!((limits.birkhoff_limit(y, x, f).unwrap() - pushed).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn strict_limits_are_conditional_expectations(index in any::<u64>(), style in style(), f in prop::collection::vec(-5.0f64..5.0, 4)) {
        let sys = generate_system(&config(style), index).unwrap();
        prop_assume!(is_strictly_irreducible(sys.spec()).unwrap());
        let f = &f[..sys.space().len()];
        let ce = conditional_expectation(sys.family(), sys.spec().support(), f).unwrap();
        let limits = ExactLimits::new(&sys);
        for &x in sys.space().support() {
            for &y in sys.spec().support() {
                prop_assert!((limits.birkhoff_limit(y, x, f).unwrap() - ce[x]).abs() <= 1e-12);
            }
            prop_assert!((limits.cesaro_limit(f, x).unwrap() - ce[x]).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampled_paths_only_use_positive_transitions(index in any::<u64>(), style in style(), seed in any::<u64>()) {
        let sys = generate_system(&config(style), index).unwrap();
        let spec = sys.spec();
        let path = PathSampler::for_trial(spec, seed, 3, Start::Stationary).unwrap().sample_path(500);
        prop_assert!(spec.is_active(path[0]));
        for w in path.windows(2) {
            prop_assert!(spec.kernel().is_positive(w[0], w[1]));
        }
        let again = PathSampler::for_trial(spec, seed, 3, Start::Stationary).unwrap().sample_path(500);
        prop_assert_eq!(path, again);
    }
}

#[test]
fn expectation_flow_conserves_mass_over_long_horizons() {
    let sys = generate_system(&config(FamilyStyle::LevelSetPermutations), 7).unwrap();
    let mut flow = ExpectationFlow::new(&sys, sys.space().support()[0]).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        flow.advance();
        worst = worst.max((flow.total_mass() - 1.0).abs());
    }
    assert!(worst <= 1e-12, "mass drift {worst:e}");
}

/// Pearson statistic of `counts` against `expected` probabilities.
fn chi_square(counts: &[usize], expected: &[f64]) -> f64 {
    let total: usize = counts.iter().sum();
    counts
        .iter()
        .zip(expected)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn bernoulli_paths_are_iid_with_law_m() {
    let m = [0.2, 0.3, 0.5];
    let sys = bernoulli_rotation(&m, 2);
    let path = PathSampler::new(sys.spec(), 20240611, Start::Stationary).unwrap().sample_path(100_000);

    let mut marginal = [0usize; 3];
    for &y in &path {
        marginal[y] += 1;
    }
    // 0.999 quantile of chi-square with 2 degrees of freedom
    assert!(chi_square(&marginal, &m) < 13.816);

    let mut pairs = [0usize; 9];
    for w in path.windows(2) {
        pairs[3 * w[0] + w[1]] += 1;
    }
    let joint: Vec<f64> = (0..9).map(|k| m[k / 3] * m[k % 3]).collect();
    // 0.999 quantile with 8 degrees of freedom
    assert!(chi_square(&pairs, &joint) < 26.124);
}

#[test]
fn trials_use_distinct_streams() {
    let sys = bernoulli_rotation(&[0.5, 0.5], 3);
    let a = PathSampler::for_trial(sys.spec(), 1, 0, Start::Stationary).unwrap().sample_path(64);
    let b = PathSampler::for_trial(sys.spec(), 1, 1, Start::Stationary).unwrap().sample_path(64);
    assert_ne!(a, b);
}

#[test]
fn pathwise_averages_approach_the_integral_for_ergodic_rotation() {
    let sys = bernoulli_rotation(&[0.6, 0.4], 4);
    let f = [1.0, 0.0, 0.0, 3.0];
    let path = PathSampler::new(sys.spec(), 99, Start::Stationary).unwrap().sample_path(100_000);
    let averages = birkhoff_averages(&sys, &path, &f, 2, &[100_000]).unwrap();
    assert_abs_diff_eq!(averages[0], 1.0, epsilon = 0.02);
    assert_abs_diff_eq!(exact_cesaro_limit(&sys, &f, 2).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn convergence_report_ignores_pool_size() {
    let sys = bernoulli_rotation(&[0.6, 0.4], 4);
    let f = [1.0, 0.0, 0.0, 3.0];
    let cfg = SimulationConfig { seed: 5, horizons: vec![10, 100, 1000], trials: 16, start: Start::Stationary };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| convergence_report(&sys, &f, 0, &cfg).unwrap().to_csv())
    };
    assert_eq!(run(1), run(4));
}
