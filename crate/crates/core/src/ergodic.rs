//! Random ergodic theorems on finite systems.
//!
//! Birkhoff averages `A_n f(w, x) = (1/n) sum_{i<n} f(T_w^i x)` along sampled
//! paths, the expectation operators `M_n f(x) = E_nu[f(T_w^n x)]` by exact
//! propagation on the pair chain, and both limits in closed form from the
//! pair chain's closed classes:
//!
//! * the pathwise limit is `f^(w_0, x)`, the `m (x) mu`-average of `f` over
//!   the class of `(w_0, x)`;
//! * the Cesaro limit of `M_n` is `sum_y m(y) f^(y, x)`.
//!
//! Monte Carlo runs are reproducible: trial `t` draws from the ChaCha8 stream
//! `t` under the run's seed, and per-trial results are reduced in trial
//! order, so output does not depend on the number of worker threads.

use std::fmt::Write as _;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::kernels::MarkovSpec;
use crate::skew::{build_pair_chain, ergodicity_of_chain, ErgodicityReport, PairChain, SkewSystem};

pub const DEFAULT_HORIZONS: [usize; 4] = [100, 1_000, 10_000, 100_000];
pub const DEFAULT_TRIALS: usize = 200;

/// Column header of [`ConvergenceTrace::to_csv`].
pub const CSV_HEADER: &str = "n,empirical_birkhoff,mc_mean,cesaro_partial,reference,abs_err_birkhoff,abs_err_cesaro";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErgodicError {
    #[error("state {0} does not exist")]
    InvalidState(usize),
    #[error("start point {0} is outside the support of mu")]
    StartOffSupport(usize),
    #[error("({y}, {x}) is not a pair-state")]
    InvalidPairState { y: usize, x: usize },
    #[error("horizon {n} needs a path of length at least {n} (got {len})")]
    InvalidHorizon { n: usize, len: usize },
    #[error("horizons must be positive and strictly increasing")]
    HorizonsNotIncreasing,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("function has {found} values, expected {expected}")]
    FunctionLength { expected: usize, found: usize },
}

/// Law of the initial state `w_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// `w_0 ~ m`
    Stationary,
    /// `w_0 = y`
    Fixed(usize),
}

impl std::fmt::Display for Start {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Start::Stationary => f.write_str("stationary"),
            Start::Fixed(y) => write!(f, "state:{y}"),
        }
    }
}

/// An endless stream of Markov states.
#[derive(Debug, Clone)]
pub struct PathSampler {
    rows: Vec<WeightedIndex<f64>>,
    initial: Option<WeightedIndex<f64>>,
    start: Start,
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    current: Option<usize>,
}

impl PathSampler {
    pub fn new(spec: &MarkovSpec, seed: u64, start: Start) -> Result<Self, ErgodicError> {
        Self::for_trial(spec, seed, 0, start)
    }

    /// Sampler on ChaCha stream `trial` of `seed`.
    pub fn for_trial(spec: &MarkovSpec, seed: u64, trial: u64, start: Start) -> Result<Self, ErgodicError> {
        let rows = (0..spec.n())
            .map(|i| WeightedIndex::new(spec.kernel().row(i).values()).expect("kernel rows are probability vectors"))
            .collect();
        let initial = match start {
            Start::Stationary => Some(WeightedIndex::new(spec.m().values()).expect("m is a probability vector")),
            Start::Fixed(y) if y < spec.n() => None,
            Start::Fixed(y) => return Err(ErgodicError::InvalidState(y)),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Ok(PathSampler { rows, initial, start, seed, stream: trial, rng, current: None })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn start(&self) -> Start {
        self.start
    }

    /// The next `length` states.
    pub fn sample_path(&mut self, length: usize) -> Vec<usize> {
        self.by_ref().take(length).collect()
    }
}

impl Iterator for PathSampler {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let next = match (self.current, &self.initial, self.start) {
            (Some(y), _, _) => self.rows[y].sample(&mut self.rng),
            (None, Some(initial), _) => initial.sample(&mut self.rng),
            (None, None, Start::Fixed(y)) => y,
            (None, None, Start::Stationary) => unreachable!(),
        };
        self.current = Some(next);
        Some(next)
    }
}

fn check_function(sys: &SkewSystem, f: &[f64]) -> Result<(), ErgodicError> {
    let k = sys.space().len();
    if f.len() != k {
        return Err(ErgodicError::FunctionLength { expected: k, found: f.len() });
    }
    Ok(())
}

fn check_start(sys: &SkewSystem, x: usize) -> Result<(), ErgodicError> {
    if !sys.space().mu().contains(x) {
        return Err(ErgodicError::StartOffSupport(x));
    }
    Ok(())
}

/// `A_n f(w, x)` along `path`.
pub fn birkhoff_average(sys: &SkewSystem, path: &[usize], f: &[f64], x: usize, n: usize) -> Result<f64, ErgodicError> {
    Ok(birkhoff_averages(sys, path, f, x, &[n])?[0])
}

/// `A_n` at each of the increasing horizons, in one pass.
pub fn birkhoff_averages(
    sys: &SkewSystem,
    path: &[usize],
    f: &[f64],
    x: usize,
    horizons: &[usize],
) -> Result<Vec<f64>, ErgodicError> {
    check_function(sys, f)?;
    check_start(sys, x)?;
    check_horizons(horizons)?;
    let last = *horizons.last().unwrap();
    if last > path.len() {
        return Err(ErgodicError::InvalidHorizon { n: last, len: path.len() });
    }
    Ok(running_averages(sys, path.iter().copied(), f, x, horizons))
}

fn check_horizons(horizons: &[usize]) -> Result<(), ErgodicError> {
    if horizons.is_empty() || horizons[0] == 0 || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ErgodicError::HorizonsNotIncreasing);
    }
    Ok(())
}

/// Streams `T_{w_{i-1}} o ... o T_{w_0} x` and records the running mean of
/// `f` at each horizon. Draws at most `max(horizons)` states.
fn running_averages(
    sys: &SkewSystem,
    mut path: impl Iterator<Item = usize>,
    f: &[f64],
    x: usize,
    horizons: &[usize],
) -> Vec<f64> {
    let family = sys.family();
    let mut out = Vec::with_capacity(horizons.len());
    let mut point = x;
    let mut sum = 0.0;
    let mut next_horizon = horizons.iter().peekable();
    let last = *horizons.last().unwrap();
    for i in 1..=last {
        sum += f[point];
        if next_horizon.next_if_eq(&&i).is_some() {
            out.push(sum / i as f64);
        }
        if i < last {
            let y = path.next().expect("path is long enough");
            point = family.map(y).apply(point);
        }
    }
    out
}

/// Closed-form limits for one system, sharing a single class decomposition.
#[derive(Debug, Clone)]
pub struct ExactLimits<'a> {
    sys: &'a SkewSystem,
    chain: PairChain,
    report: ErgodicityReport,
}

impl<'a> ExactLimits<'a> {
    pub fn new(sys: &'a SkewSystem) -> Self {
        let chain = build_pair_chain(sys);
        let report = ergodicity_of_chain(sys, &chain);
        ExactLimits { sys, chain, report }
    }

    pub fn chain(&self) -> &PairChain {
        &self.chain
    }

    pub fn report(&self) -> &ErgodicityReport {
        &self.report
    }

    /// `m (x) mu`-average of `f` over each closed class.
    pub fn class_averages(&self, f: &[f64]) -> Result<Vec<f64>, ErgodicError> {
        check_function(self.sys, f)?;
        let stationary = self.chain.stationary();
        Ok(self
            .report
            .classes
            .blocks()
            .iter()
            .map(|block| {
                let mass: f64 = block.iter().map(|&i| stationary[i]).sum();
                let weighted: f64 = block.iter().map(|&i| stationary[i] * f[self.chain.states()[i].1]).sum();
                weighted / mass
            })
            .collect())
    }

    /// `f^(y, x)`.
    pub fn birkhoff_limit(&self, y: usize, x: usize, f: &[f64]) -> Result<f64, ErgodicError> {
        let i = self.chain.index_of(y, x).ok_or(ErgodicError::InvalidPairState { y, x })?;
        Ok(self.class_averages(f)?[self.report.class_of[i]])
    }

    /// `f~(x) = sum_y m(y) f^(y, x)`.
    pub fn cesaro_limit(&self, f: &[f64], x: usize) -> Result<f64, ErgodicError> {
        check_start(self.sys, x)?;
        let averages = self.class_averages(f)?;
        let m = self.sys.spec().m();
        Ok(self
            .sys
            .spec()
            .support()
            .iter()
            .map(|&y| {
                let i = self.chain.index_of(y, x).expect("support pairs exist");
                m[y] * averages[self.report.class_of[i]]
            })
            .sum())
    }
}

pub fn exact_birkhoff_limit(sys: &SkewSystem, y: usize, x: usize, f: &[f64]) -> Result<f64, ErgodicError> {
    ExactLimits::new(sys).birkhoff_limit(y, x, f)
}

pub fn exact_cesaro_limit(sys: &SkewSystem, f: &[f64], x: usize) -> Result<f64, ErgodicError> {
    ExactLimits::new(sys).cesaro_limit(f, x)
}

/// Law of `(w_n, T_w^n x)` under `w ~ nu`, advanced one step at a time.
#[derive(Debug, Clone)]
pub struct ExpectationFlow {
    chain: PairChain,
    distribution: Vec<f64>,
    steps: usize,
}

impl ExpectationFlow {
    pub fn new(sys: &SkewSystem, x: usize) -> Result<Self, ErgodicError> {
        check_start(sys, x)?;
        let chain = build_pair_chain(sys);
        let mut distribution = vec![0.0; chain.len()];
        for &y in sys.spec().support() {
            distribution[chain.index_of(y, x).expect("support pairs exist")] = sys.spec().m()[y];
        }
        Ok(ExpectationFlow { chain, distribution, steps: 0 })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    pub fn total_mass(&self) -> f64 {
        self.distribution.iter().sum()
    }

    /// `M_steps f(x)`.
    pub fn expectation(&self, f: &[f64]) -> f64 {
        self.chain
            .states()
            .iter()
            .zip(&self.distribution)
            .map(|(&(_, u), &p)| p * f[u])
            .sum()
    }

    pub fn advance(&mut self) {
        self.distribution = self.chain.step(&self.distribution);
        self.steps += 1;
    }
}

/// `M_n f(x)`.
pub fn expectation_operator(sys: &SkewSystem, f: &[f64], x: usize, n: usize) -> Result<f64, ErgodicError> {
    Ok(*expectation_sequence(sys, f, x, n)?.last().unwrap())
}

/// `M_0 f(x), ..., M_n f(x)`.
pub fn expectation_sequence(sys: &SkewSystem, f: &[f64], x: usize, n: usize) -> Result<Vec<f64>, ErgodicError> {
    check_function(sys, f)?;
    let mut flow = ExpectationFlow::new(sys, x)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(flow.expectation(f));
    for _ in 0..n {
        flow.advance();
        out.push(flow.expectation(f));
    }
    Ok(out)
}

/// `(1/n) sum_{j<n} M_j f(x)` at each horizon.
pub fn cesaro_partial_averages(sys: &SkewSystem, f: &[f64], x: usize, horizons: &[usize]) -> Result<Vec<f64>, ErgodicError> {
    check_horizons(horizons)?;
    let last = *horizons.last().unwrap();
    let sequence = expectation_sequence(sys, f, x, last - 1)?;
    let mut out = Vec::with_capacity(horizons.len());
    let mut sum = 0.0;
    let mut next_horizon = horizons.iter().peekable();
    for (j, m) in sequence.iter().enumerate() {
        sum += m;
        if next_horizon.next_if_eq(&&(j + 1)).is_some() {
            out.push(sum / (j + 1) as f64);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub seed: u64,
    pub horizons: Vec<usize>,
    pub trials: usize,
    pub start: Start,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 0,
            horizons: DEFAULT_HORIZONS.to_vec(),
            trials: DEFAULT_TRIALS,
            start: Start::Stationary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    /// `A_n` along the path of trial 0.
    pub empirical_birkhoff: f64,
    /// Mean of `A_n` over all trials.
    pub mc_mean: f64,
    /// `(1/n) sum_{j<n} M_j f(x)`.
    pub cesaro_partial: f64,
    /// The Cesaro limit `f~(x)`, which is also the expected pathwise limit.
    pub reference: f64,
    /// Distance of `empirical_birkhoff` from its own pathwise limit.
    pub abs_err_birkhoff: f64,
    pub abs_err_cesaro: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
    pub seed: u64,
    pub start: Start,
    pub trials: usize,
    pub system: String,
    pub function: String,
    pub point: String,
    /// First state of the trial-0 path.
    pub path_start: usize,
    /// `f^(path_start, x)`.
    pub path_limit: f64,
}

impl ConvergenceTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed={}", self.seed);
        let _ = writeln!(out, "# system={}", self.system);
        let _ = writeln!(out, "# f={}", self.function);
        let _ = writeln!(out, "# x={}", self.point);
        let _ = writeln!(out, "# start={}", self.start);
        let _ = writeln!(out, "# trials={}", self.trials);
        let _ = writeln!(out, "# path_start={}", self.path_start);
        let _ = writeln!(out, "# path_limit={}", self.path_limit);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n, r.empirical_birkhoff, r.mc_mean, r.cesaro_partial, r.reference, r.abs_err_birkhoff, r.abs_err_cesaro
            );
        }
        out
    }
}

/// Runs `config.trials` sampled paths from `(w_0, x)` and the exact
/// expectation flow from `x`, and compares both to their closed-form limits.
///
/// Trials run on the current rayon pool.
pub fn convergence_report(
    sys: &SkewSystem,
    f: &[f64],
    x: usize,
    config: &SimulationConfig,
) -> Result<ConvergenceTrace, ErgodicError> {
    check_function(sys, f)?;
    check_start(sys, x)?;
    check_horizons(&config.horizons)?;
    if config.trials == 0 {
        return Err(ErgodicError::NoTrials);
    }
    let spec = sys.spec();
    // Validates the start state once before fanning out.
    PathSampler::new(spec, config.seed, config.start)?;

    let per_trial: Vec<(usize, Vec<f64>)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut sampler = PathSampler::for_trial(spec, config.seed, t, config.start).expect("start validated");
            let mut path = sampler.by_ref().peekable();
            let first = *path.peek().unwrap();
            (first, running_averages(sys, path, f, x, &config.horizons))
        })
        .collect();

    let limits = ExactLimits::new(sys);
    let path_start = per_trial[0].0;
    let path_limit = limits.birkhoff_limit(path_start, x, f)?;
    let reference = limits.cesaro_limit(f, x)?;
    let cesaro = cesaro_partial_averages(sys, f, x, &config.horizons)?;

    let rows = config
        .horizons
        .iter()
        .enumerate()
        .map(|(h, &n)| {
            let mc_sum: f64 = per_trial.iter().map(|(_, a)| a[h]).sum();
            let empirical = per_trial[0].1[h];
            TraceRow {
                n,
                empirical_birkhoff: empirical,
                mc_mean: mc_sum / config.trials as f64,
                cesaro_partial: cesaro[h],
                reference,
                abs_err_birkhoff: (empirical - path_limit).abs(),
                abs_err_cesaro: (cesaro[h] - reference).abs(),
            }
        })
        .collect();

    Ok(ConvergenceTrace {
        rows,
        seed: config.seed,
        start: config.start,
        trials: config.trials,
        system: sys.fingerprint(),
        function: "f".to_string(),
        point: sys.space().label(x).to_string(),
        path_start,
        path_limit,
    })
}
