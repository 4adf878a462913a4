//! Ground truth for the property suites: brute-force enumerations that share
//! no code with the structural algorithms, a Monte Carlo ergodicity probe,
//! and seeded random instance generators.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{is_family_ergodic, DynamicsError, FiniteMeasureSpace, TransformationFamily};
use crate::ergodic::{birkhoff_average, ErgodicError, PathSampler, Start};
use crate::kernels::{
    closed_classes, is_irreducible, is_strictly_irreducible, stationary_distribution, stationary_on_class,
    validate_spec, KernelError, MarkovSpec, ProbVector, StochasticMatrix,
};
use crate::partition::StateSet;
use crate::skew::{PairChain, SkewError, SkewSystem};

/// Largest support handled by [`brute_force_deterministic_sets`].
pub const MAX_BRUTE_STATES: usize = 12;
/// Largest pair chain handled by [`brute_force_invariant_sets`].
pub const MAX_BRUTE_PAIRS: usize = 16;
/// Spread of Birkhoff averages above which the probe reports non-ergodicity.
pub const DISPERSION_THRESHOLD: f64 = 0.05;
pub const PROBE_TRIALS: usize = 50;
pub const PROBE_HORIZON: usize = 100_000;
pub const MIN_PROBE_TRIALS: usize = 30;
/// Attempts per generated instance before giving up.
pub const MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{size} elements exceed the enumeration limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("no acceptable instance after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid generator config: {0}")]
    InvalidConfig(&'static str),
    #[error("the probe needs at least {MIN_PROBE_TRIALS} trials, got {0}")]
    TooFewTrials(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Ergodic(#[from] ErgodicError),
}

/// Subsets `B` of `supp(m)` such that every active row lies inside `B` or
/// inside its complement, by exhaustive enumeration.
pub fn brute_force_deterministic_sets(spec: &MarkovSpec) -> Result<Vec<StateSet>, OracleError> {
    let support = spec.support();
    let s = support.len();
    if s > MAX_BRUTE_STATES {
        return Err(OracleError::TooLarge { size: s, limit: MAX_BRUTE_STATES });
    }
    let kernel = spec.kernel();
    let mut out = Vec::new();
    for mask in 0u32..(1 << s) {
        let mut inside = vec![false; spec.n()];
        for (bit, &y) in support.iter().enumerate() {
            inside[y] = mask >> bit & 1 == 1;
        }
        let deterministic = support.iter().all(|&y| {
            let row_hits_inside = (0..spec.n()).any(|z| inside[z] && kernel.get(y, z) > 0.0);
            let row_hits_outside = (0..spec.n()).any(|z| !inside[z] && kernel.get(y, z) > 0.0);
            !(row_hits_inside && row_hits_outside)
        });
        if deterministic {
            out.push(support.iter().enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, &y)| y).collect());
        }
    }
    Ok(out)
}

/// Sets of pair-states with no edge crossing their boundary in either
/// direction, by exhaustive enumeration. Sets hold pair-state indices.
pub fn brute_force_invariant_sets(chain: &PairChain) -> Result<Vec<StateSet>, OracleError> {
    let n = chain.len();
    if n > MAX_BRUTE_PAIRS {
        return Err(OracleError::TooLarge { size: n, limit: MAX_BRUTE_PAIRS });
    }
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| chain.edges(i).iter().map(move |&(t, _)| (i, t))).collect();
    Ok((0u32..(1 << n))
        .filter(|mask| edges.iter().all(|&(i, t)| (mask >> i & 1) == (mask >> t & 1)))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeVerdict {
    pub ergodic: bool,
    /// `max - min` of the sampled Birkhoff averages.
    pub spread: f64,
    pub averages: Vec<f64>,
}

/// A non-constant test function: evenly spaced values in `[0, 1]`, shuffled
/// by `seed`.
pub fn probe_function(points: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = (points.max(2) - 1) as f64;
    let mut f: Vec<f64> = (0..points).map(|i| i as f64 / denom).collect();
    f.shuffle(&mut rng);
    f
}

/// Monte Carlo contrapositive of the random ergodic theorem: if Birkhoff
/// averages from random `(w, x)` disagree, the skew product is not ergodic.
///
/// One-sided: a test function that happens to be nearly invariant can hide
/// non-ergodicity.
pub fn statistical_ergodicity_probe(
    sys: &SkewSystem,
    seed: u64,
    trials: usize,
    horizon: usize,
) -> Result<ProbeVerdict, OracleError> {
    let f = probe_function(sys.space().len(), seed);
    probe_with_function(sys, &f, seed, trials, horizon)
}

pub fn probe_with_function(
    sys: &SkewSystem,
    f: &[f64],
    seed: u64,
    trials: usize,
    horizon: usize,
) -> Result<ProbeVerdict, OracleError> {
    if trials < MIN_PROBE_TRIALS {
        return Err(OracleError::TooFewTrials(trials));
    }
    let mu = sys.space().mu().values().to_vec();
    let point_law = rand::distr::weighted::WeightedIndex::new(&mu).expect("mu is a probability vector");
    let averages = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut point_rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
            point_rng.set_stream(t);
            let x = rand::distr::Distribution::sample(&point_law, &mut point_rng);
            let path = PathSampler::for_trial(sys.spec(), seed, t, Start::Stationary)?.sample_path(horizon);
            birkhoff_average(sys, &path, f, x, horizon)
        })
        .collect::<Result<Vec<f64>, ErgodicError>>()?;
    let max = averages.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = averages.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    Ok(ProbeVerdict { ergodic: spread <= DISPERSION_THRESHOLD, spread, averages })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyStyle {
    /// Uniform `mu`; every permutation is admissible.
    UniformPermutations,
    /// `mu` with repeated levels; permutations preserve each level set.
    LevelSetPermutations,
}

/// Degenerate structure forced into a generated kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stitch {
    None,
    /// Two column groups; every row targets one group only. The result is
    /// irreducible but not strictly irreducible.
    Deterministic,
    /// Two closed blocks, both charged by `m`. The result is reducible.
    Absorbing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub states: RangeInclusive<usize>,
    pub points: RangeInclusive<usize>,
    /// Expected number of nonzeros per row.
    pub sparsity: f64,
    pub family_style: FamilyStyle,
    /// Probability that a generated kernel receives a [`Stitch`].
    pub degenerate_bias: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            states: 1..=6,
            points: 1..=5,
            sparsity: 2.0,
            family_style: FamilyStyle::UniformPermutations,
            degenerate_bias: 0.3,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.states.is_empty() || *self.states.start() == 0 {
            return Err(OracleError::InvalidConfig("state count range must be non-empty and positive"));
        }
        if self.points.is_empty() || *self.points.start() == 0 {
            return Err(OracleError::InvalidConfig("point count range must be non-empty and positive"));
        }
        if self.sparsity.is_nan() || self.sparsity < 1.0 {
            return Err(OracleError::InvalidConfig("sparsity must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.degenerate_bias) {
            return Err(OracleError::InvalidConfig("degenerate bias must lie in [0, 1]"));
        }
        Ok(())
    }

    /// The generator stream for instance `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

fn random_row(n: usize, targets: &[usize], sparsity: f64, rng: &mut impl Rng) -> Vec<f64> {
    let p = (sparsity / targets.len() as f64).min(1.0);
    let mut chosen: Vec<usize> = targets.iter().copied().filter(|_| rng.random_bool(p)).collect();
    if chosen.is_empty() {
        chosen.push(targets[rng.random_range(0..targets.len())]);
    }
    let mut row = vec![0.0; n];
    for &j in &chosen {
        let w: f64 = rng.sample(Exp1);
        row[j] = w.max(1e-3);
    }
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= sum);
    row
}

/// Random split of `0..n` into two non-empty groups.
fn split(n: usize, rng: &mut impl Rng) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cut = rng.random_range(1..n);
    let (mut a, mut b) = (order[..cut].to_vec(), order[cut..].to_vec());
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Attaches a stationary distribution, restricting to a uniformly chosen
/// closed class when there are several.
fn with_stationary(kernel: StochasticMatrix, rng: &mut impl Rng) -> Result<MarkovSpec, KernelError> {
    match stationary_distribution(&kernel) {
        Ok(m) => validate_spec(kernel, m),
        Err(KernelError::MultipleStationary(_)) => {
            let classes = closed_classes(&kernel);
            let class = &classes[rng.random_range(0..classes.len())];
            let restricted = kernel.restrict(class);
            let m = stationary_distribution(&restricted)?;
            validate_spec(restricted, m)
        }
        Err(e) => Err(e),
    }
}

fn sample_state_count(config: &GeneratorConfig, stitch: Stitch, rng: &mut impl Rng) -> (usize, Stitch) {
    let (lo, hi) = (*config.states.start(), *config.states.end());
    match stitch {
        Stitch::None => (rng.random_range(lo..=hi), Stitch::None),
        _ if hi < 2 => (rng.random_range(lo..=hi), Stitch::None),
        _ => (rng.random_range(lo.max(2)..=hi), stitch),
    }
}

fn try_generate(config: &GeneratorConfig, stitch: Stitch, rng: &mut impl Rng) -> Result<Option<MarkovSpec>, KernelError> {
    let (n, stitch) = sample_state_count(config, stitch, rng);
    let all: Vec<usize> = (0..n).collect();
    match stitch {
        Stitch::None => {
            let rows = (0..n).map(|_| random_row(n, &all, config.sparsity, rng)).collect();
            with_stationary(StochasticMatrix::from_rows(rows)?, rng).map(Some)
        }
        Stitch::Deterministic => {
            let (a, b) = split(n, rng);
            let mut to_a: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            if to_a.iter().all(|&t| t) || to_a.iter().all(|&t| !t) {
                to_a[0] = !to_a[0];
            }
            let rows = to_a
                .iter()
                .map(|&t| random_row(n, if t { &a } else { &b }, config.sparsity, rng))
                .collect();
            let spec = with_stationary(StochasticMatrix::from_rows(rows)?, rng)?;
            let ok = is_irreducible(&spec) && !is_strictly_irreducible(&spec)?;
            Ok(ok.then_some(spec))
        }
        Stitch::Absorbing => {
            let (a, b) = split(n, rng);
            let mut rows = vec![Vec::new(); n];
            for group in [&a, &b] {
                for &y in group.iter() {
                    rows[y] = random_row(n, group, config.sparsity, rng);
                }
            }
            let kernel = StochasticMatrix::from_rows(rows)?;
            let w = rng.random_range(0.25..0.75);
            let mut m = vec![0.0; n];
            for (group, weight) in [(&a, w), (&b, 1.0 - w)] {
                let block = kernel.restrict(group);
                let classes = closed_classes(&block);
                let class = &classes[rng.random_range(0..classes.len())];
                let local = stationary_on_class(&block, class);
                for (pos, &y) in group.iter().enumerate() {
                    m[y] += weight * local[pos];
                }
            }
            let spec = validate_spec(kernel, ProbVector::new(m)?)?;
            debug_assert!(!is_irreducible(&spec));
            Ok(Some(spec))
        }
    }
}

/// Generated kernel number `index`; a stitch is applied with probability
/// `degenerate_bias`.
pub fn generate_spec(config: &GeneratorConfig, index: u64) -> Result<MarkovSpec, OracleError> {
    config.validate()?;
    let mut rng = config.rng(index);
    let stitch = if rng.random_bool(config.degenerate_bias) {
        if rng.random_bool(0.5) {
            Stitch::Deterministic
        } else {
            Stitch::Absorbing
        }
    } else {
        Stitch::None
    };
    generate_spec_with(config, stitch, &mut rng)
}

pub fn generate_spec_with(config: &GeneratorConfig, stitch: Stitch, rng: &mut impl Rng) -> Result<MarkovSpec, OracleError> {
    config.validate()?;
    for _ in 0..MAX_RETRIES {
        if let Some(spec) = try_generate(config, stitch, rng)? {
            return Ok(spec);
        }
    }
    Err(OracleError::GenerationFailed(MAX_RETRIES))
}

/// A random space in the config's style; every point has positive mass.
pub fn generate_space(config: &GeneratorConfig, rng: &mut impl Rng) -> FiniteMeasureSpace {
    let k = rng.random_range(config.points.clone());
    match config.family_style {
        FamilyStyle::UniformPermutations => FiniteMeasureSpace::uniform(k),
        FamilyStyle::LevelSetPermutations => {
            let weights: Vec<f64> = (0..k).map(|_| rng.random_range(1..=3) as f64).collect();
            let total: f64 = weights.iter().sum();
            let mu = ProbVector::new(weights.iter().map(|w| w / total).collect()).expect("weights are normalized");
            FiniteMeasureSpace::with_measure(mu)
        }
    }
}

/// One random measure-preserving permutation per state.
pub fn generate_family(
    config: &GeneratorConfig,
    space: &FiniteMeasureSpace,
    states: usize,
    rng: &mut impl Rng,
) -> Result<TransformationFamily, OracleError> {
    let k = space.len();
    let level_sets: Vec<Vec<usize>> = match config.family_style {
        FamilyStyle::UniformPermutations => vec![(0..k).collect()],
        FamilyStyle::LevelSetPermutations => {
            let mut by_level: Vec<(u64, usize)> = (0..k).map(|x| (space.mu()[x].to_bits(), x)).collect();
            by_level.sort_unstable();
            by_level
                .chunk_by(|a, b| a.0 == b.0)
                .map(|chunk| chunk.iter().map(|&(_, x)| x).collect())
                .collect()
        }
    };
    let tables = (0..states)
        .map(|_| {
            let mut table = vec![0; k];
            for level in &level_sets {
                let mut images = level.clone();
                images.shuffle(rng);
                for (&x, &t) in level.iter().zip(&images) {
                    table[x] = t;
                }
            }
            table
        })
        .collect();
    Ok(TransformationFamily::from_tables(space.clone(), tables)?)
}

/// Rejection-samples a family that is ergodic on `active`.
pub fn generate_ergodic_family(
    config: &GeneratorConfig,
    space: &FiniteMeasureSpace,
    states: usize,
    active: &[usize],
    rng: &mut impl Rng,
) -> Result<TransformationFamily, OracleError> {
    for _ in 0..MAX_RETRIES {
        let family = generate_family(config, space, states, rng)?;
        if is_family_ergodic(&family, active) {
            return Ok(family);
        }
    }
    Err(OracleError::GenerationFailed(MAX_RETRIES))
}

/// Generated kernel `index` with a random space and family from the same
/// stream.
pub fn generate_system(config: &GeneratorConfig, index: u64) -> Result<SkewSystem, OracleError> {
    let spec = generate_spec(config, index)?;
    let mut rng = config.rng(index);
    // Skip ahead so the family does not reuse the kernel's draws.
    rng.set_word_pos(1 << 20);
    let space = generate_space(config, &mut rng);
    let family = generate_family(config, &space, spec.n(), &mut rng)?;
    Ok(SkewSystem::new(spec, family)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::build_pair_chain;

    fn spec(rows: Vec<Vec<f64>>, m: Vec<f64>) -> MarkovSpec {
        validate_spec(StochasticMatrix::from_rows(rows).unwrap(), ProbVector::new(m).unwrap()).unwrap()
    }

    fn set(items: &[usize]) -> StateSet {
        items.iter().copied().collect()
    }

    #[test]
    fn brute_deterministic_examples() {
        let flip = spec(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5]);
        assert_eq!(
            brute_force_deterministic_sets(&flip).unwrap(),
            vec![set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]
        );
        let tri = spec(
            vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]],
            vec![1.0 / 3.0; 3],
        );
        assert_eq!(brute_force_deterministic_sets(&tri).unwrap(), vec![set(&[]), set(&[0, 1, 2])]);
        let n = 13;
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let big = spec(rows, vec![1.0 / n as f64; n]);
        assert_eq!(
            brute_force_deterministic_sets(&big).unwrap_err(),
            OracleError::TooLarge { size: 13, limit: 12 }
        );
    }

    #[test]
    fn brute_invariant_examples() {
        let flip = spec(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5]);
        let family =
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(3), vec![vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        let sys = SkewSystem::new(flip.clone(), family).unwrap();
        assert_eq!(brute_force_invariant_sets(&build_pair_chain(&sys)).unwrap().len(), 8);

        let ergodic = SkewSystem::new(
            spec(vec![vec![0.5, 0.5], vec![0.5, 0.5]], vec![0.5, 0.5]),
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(3), vec![vec![1, 2, 0], vec![0, 1, 2]]).unwrap(),
        )
        .unwrap();
        let sets = brute_force_invariant_sets(&build_pair_chain(&ergodic)).unwrap();
        assert_eq!(sets, vec![set(&[]), (0..6).collect()]);

        let big = SkewSystem::new(
            spec(vec![vec![1.0]], vec![1.0]),
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(17), vec![(0..17).collect()]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            brute_force_invariant_sets(&build_pair_chain(&big)).unwrap_err(),
            OracleError::TooLarge { size: 17, limit: 16 }
        );
    }

    #[test]
    fn probe_needs_enough_trials() {
        let sys = SkewSystem::new(
            spec(vec![vec![1.0]], vec![1.0]),
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(2), vec![vec![1, 0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(statistical_ergodicity_probe(&sys, 0, 10, 100).unwrap_err(), OracleError::TooFewTrials(10));
    }

    #[test]
    fn probe_on_identity_family_with_constant_function() {
        let sys = SkewSystem::new(
            spec(vec![vec![0.5, 0.5], vec![0.5, 0.5]], vec![0.5, 0.5]),
            TransformationFamily::from_tables(FiniteMeasureSpace::uniform(3), vec![vec![0, 1, 2]; 2]).unwrap(),
        )
        .unwrap();
        let verdict = probe_with_function(&sys, &[0.25; 3], 1, 30, 50).unwrap();
        assert_eq!(verdict.spread, 0.0);
        assert!(verdict.ergodic);
        let verdict = statistical_ergodicity_probe(&sys, 1, 30, 50).unwrap();
        assert!(!verdict.ergodic);
    }

    #[test]
    fn probe_function_is_non_constant() {
        let f = probe_function(4, 5);
        let mut sorted = f.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert_eq!(f, probe_function(4, 5));
    }

    #[test]
    fn config_validation() {
        let mut c = GeneratorConfig::default();
        assert!(c.validate().is_ok());
        c.sparsity = 0.5;
        assert!(matches!(c.validate(), Err(OracleError::InvalidConfig(_))));
        c.sparsity = 2.0;
        c.states = 0..=3;
        assert!(matches!(generate_spec(&c, 0), Err(OracleError::InvalidConfig(_))));
    }

    #[test]
    fn generated_specs_are_valid_and_deterministic() {
        let config = GeneratorConfig { degenerate_bias: 0.0, ..Default::default() };
        for i in 0..50 {
            let a = generate_spec(&config, i).unwrap();
            let b = generate_spec(&config, i).unwrap();
            assert_eq!(a, b);
            assert!(validate_spec(a.kernel().clone(), a.m().clone()).is_ok());
        }
    }

    #[test]
    fn stitches_force_their_property() {
        let config = GeneratorConfig { states: 2..=6, ..Default::default() };
        for i in 0..50 {
            let mut rng = config.rng(i);
            let d = generate_spec_with(&config, Stitch::Deterministic, &mut rng).unwrap();
            assert!(is_irreducible(&d));
            assert_eq!(is_strictly_irreducible(&d), Ok(false));
            let a = generate_spec_with(&config, Stitch::Absorbing, &mut rng).unwrap();
            assert!(!is_irreducible(&a));
        }
    }

    #[test]
    fn family_examples() {
        let config = GeneratorConfig::default();
        let mut rng = config.rng(0);
        let fam = generate_family(&config, &FiniteMeasureSpace::uniform(3), 40, &mut rng).unwrap();
        let distinct: std::collections::HashSet<_> = fam.maps().iter().collect();
        assert_eq!(distinct.len(), 6);

        let level = GeneratorConfig { family_style: FamilyStyle::LevelSetPermutations, ..config.clone() };
        let space = FiniteMeasureSpace::with_measure(ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap());
        let fam = generate_family(&level, &space, 20, &mut rng).unwrap();
        assert!(fam.maps().iter().all(|m| m.apply(0) == 0));

        let one = generate_family(&config, &FiniteMeasureSpace::uniform(1), 3, &mut rng).unwrap();
        assert!(one.maps().iter().all(|m| m.is_identity()));
    }

    #[test]
    fn uniform_style_rejects_non_uniform_space() {
        let config = GeneratorConfig::default();
        let space = FiniteMeasureSpace::with_measure(ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap());
        let mut rng = config.rng(1);
        let result = (0..20).map(|_| generate_family(&config, &space, 3, &mut rng)).find(|r| r.is_err());
        assert!(matches!(result, Some(Err(OracleError::Dynamics(_)))));
    }

    #[test]
    fn ergodic_family_generation() {
        let config = GeneratorConfig::default();
        let mut rng = config.rng(2);
        let space = FiniteMeasureSpace::uniform(5);
        let fam = generate_ergodic_family(&config, &space, 1, &[0], &mut rng).unwrap();
        assert!(is_family_ergodic(&fam, &[0]));
        let level = GeneratorConfig { family_style: FamilyStyle::LevelSetPermutations, ..config };
        let lumpy = FiniteMeasureSpace::with_measure(ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap());
        assert_eq!(
            generate_ergodic_family(&level, &lumpy, 2, &[0, 1], &mut rng).unwrap_err(),
            OracleError::GenerationFailed(MAX_RETRIES)
        );
    }
}
