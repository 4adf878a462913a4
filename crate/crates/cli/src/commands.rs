//! Report builders behind each subcommand. Reports are plain text with one
//! `PREFIX: value` line per verdict.

use std::fmt::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use rds_ergodic::dynamics::{family_invariant_partition, is_family_ergodic};
use rds_ergodic::ergodic::{convergence_report, SimulationConfig, Start, DEFAULT_HORIZONS, DEFAULT_TRIALS};
use rds_ergodic::kernels::{
    deterministic_sets, dual_sim_classes, invariance_defect, is_irreducible, reverse_kernel, sim_classes,
    strict_report, KernelError,
};
use rds_ergodic::skew::{
    build_base_counterexample, build_counterexample_family, build_pair_chain, check_product_structure,
    is_skew_ergodic, Counterexample,
};
use rds_ergodic::{Partition, SkewSystem};

use crate::config::{parse_config, SystemConfig};

/// Most deterministic sets listed by `check`.
pub const MAX_LISTED_SETS: usize = 64;

pub fn load(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("loading {}", path.display()))
}

fn set_str<'a>(labels: &[String], items: impl IntoIterator<Item = &'a usize>) -> String {
    let inner: Vec<&str> = items.into_iter().map(|&i| labels[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

fn partition_str(labels: &[String], p: &Partition) -> String {
    let blocks: Vec<String> = p.blocks().iter().map(|b| set_str(labels, b)).collect();
    blocks.join(" ")
}

fn row_str(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn check_report(config: &SystemConfig) -> Result<String> {
    let sys = config.system()?;
    let spec = sys.spec();
    let states = &config.states;
    let mut out = String::new();

    writeln!(out, "STATES: {}", states.join(" "))?;
    writeln!(out, "STATIONARY: {}", row_str(spec.m().values().iter().copied()))?;
    writeln!(out, "SUPPORT: {}", set_str(states, spec.support()))?;
    writeln!(out, "INVARIANCE: ok (max defect {:e})", invariance_defect(spec.kernel(), spec.m().values()))?;
    writeln!(out, "IRREDUCIBLE: {}", is_irreducible(spec))?;

    let strict = strict_report(spec);
    if !strict.consistent() {
        return Err(KernelError::InternalInconsistency(format!("{strict:?}")).into());
    }
    writeln!(
        out,
        "STRICT: {} (sim_connected={} dual_sim_connected={} transpose_product_irreducible={} product_transpose_irreducible={})",
        strict.sim_connected,
        strict.sim_connected,
        strict.dual_sim_connected,
        strict.transpose_product_irreducible,
        strict.product_transpose_irreducible
    )?;
    writeln!(out, "SIM_CLASSES: {}", partition_str(states, &sim_classes(spec)))?;
    writeln!(out, "DUAL_SIM_CLASSES: {}", partition_str(states, &dual_sim_classes(spec)))?;

    let det = deterministic_sets(spec);
    if det.implicit_union_closure {
        let blocks: Vec<String> = det.sets.iter().map(|s| set_str(states, s)).collect();
        writeln!(out, "DETERMINISTIC_SETS: all unions of {} blocks: {}", det.sets.len(), blocks.join(" "))?;
    } else {
        let listed: Vec<String> = det.sets.iter().take(MAX_LISTED_SETS).map(|s| set_str(states, s)).collect();
        let more = det.sets.len().saturating_sub(MAX_LISTED_SETS);
        let tail = if more > 0 { format!(" ... ({more} more)") } else { String::new() };
        writeln!(out, "DETERMINISTIC_SETS: {} {}{tail}", det.sets.len(), listed.join(" "))?;
    }

    writeln!(out, "REVERSE_KERNEL:")?;
    for (label, row) in states.iter().zip(reverse_kernel(spec).to_rows()) {
        writeln!(out, "  {label}: {}", row_str(row))?;
    }
    Ok(out)
}

fn counterexample_lines(out: &mut String, kind: &str, states: &[String], ce: &Counterexample) -> Result<()> {
    let sys = &ce.system;
    let chain = build_pair_chain(sys);
    let mass: f64 = ce
        .invariant_pairs
        .iter()
        .map(|&(y, x)| chain.stationary()[chain.index_of(y, x).expect("active pair")])
        .sum();
    let maps: Vec<String> = states
        .iter()
        .zip(sys.family().maps())
        .map(|(y, map)| format!("{y}={}", if map.is_identity() { "id" } else { "swap" }))
        .collect();
    let pairs: Vec<String> = ce
        .invariant_pairs
        .iter()
        .map(|&(y, x)| format!("({},{})", states[y], sys.space().label(x)))
        .collect();
    writeln!(
        out,
        "COUNTEREXAMPLE: {kind} witness={} maps=[{}] family_ergodic={} skew_ergodic={}",
        set_str(states, &ce.witness),
        maps.join(" "),
        is_family_ergodic(sys.family(), sys.spec().support()),
        is_skew_ergodic(sys).ergodic
    )?;
    writeln!(out, "COUNTEREXAMPLE_INVARIANT: mass={mass} {}", pairs.join(" "))?;
    Ok(())
}

pub fn skew_report(config: &SystemConfig) -> Result<String> {
    let sys = config.system()?;
    let spec = sys.spec();
    let points = sys.space().labels();
    let states = &config.states;
    let mut out = String::new();

    let sigma = family_invariant_partition(sys.family(), spec.support());
    writeln!(out, "FAMILY_ERGODIC: {}", sigma.len() == 1)?;
    writeln!(out, "SIGMA: {}", partition_str(points, &sigma))?;
    let irreducible = is_irreducible(spec);
    let strict = rds_ergodic::kernels::is_strictly_irreducible(spec)?;
    writeln!(out, "IRREDUCIBLE: {irreducible}")?;
    writeln!(out, "STRICT: {strict}")?;

    let chain = build_pair_chain(&sys);
    let report = is_skew_ergodic(&sys);
    writeln!(out, "SKEW_ERGODIC: {}", report.ergodic)?;
    writeln!(out, "CLASSES: {}", report.classes.len())?;
    for (c, (block, mass)) in report.classes.blocks().iter().zip(&report.class_masses).enumerate() {
        let pairs: Vec<String> = block
            .iter()
            .map(|&i| {
                let (y, x) = chain.states()[i];
                format!("({},{})", states[y], points[x])
            })
            .collect();
        writeln!(out, "CLASS {c}: mass={mass} {}", pairs.join(" "))?;
    }
    writeln!(out, "PRODUCT_STRUCTURED: {}", check_product_structure(&sys)?)?;

    if strict {
        writeln!(out, "COUNTEREXAMPLE: none (kernel is strictly irreducible)")?;
    } else if irreducible {
        counterexample_lines(&mut out, "family", states, &build_counterexample_family(spec)?)?;
    } else {
        counterexample_lines(&mut out, "base", states, &build_base_counterexample(spec)?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOptions {
    pub seed: u64,
    pub horizons: Vec<usize>,
    pub trials: usize,
    /// A config function name or `ind:<point>`.
    pub f: Option<String>,
    /// Point label; defaults to the first point of positive mass.
    pub x: Option<String>,
    /// `stationary` or a state label.
    pub start: Option<String>,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            seed: 0,
            horizons: DEFAULT_HORIZONS.to_vec(),
            trials: DEFAULT_TRIALS,
            f: None,
            x: None,
            start: None,
        }
    }
}

/// Resolves `--f` to a name and a vector of values.
pub fn resolve_function(config: &SystemConfig, f: Option<&str>) -> Result<(String, Vec<f64>)> {
    let indicator = |label: &str| -> Result<(String, Vec<f64>)> {
        let x = config.point_index(label).ok_or_else(|| anyhow!("--f: {label:?} is not a point label"))?;
        let mut values = vec![0.0; config.space.points.len()];
        values[x] = 1.0;
        Ok((format!("ind:{label}"), values))
    };
    match (f, &config.function) {
        (Some(spec), _) if spec.starts_with("ind:") => indicator(&spec[4..]),
        (Some(name), Some(func)) if func.name == name => Ok((func.name.clone(), func.values.clone())),
        (Some(name), _) => bail!("--f: no function named {name:?} (use a config function name or ind:<point>)"),
        (None, Some(func)) => Ok((func.name.clone(), func.values.clone())),
        (None, None) => indicator(&config.space.points[0]),
    }
}

fn resolve_point(sys: &SkewSystem, x: Option<&str>) -> Result<usize> {
    match x {
        Some(label) => sys.space().point(label).ok_or_else(|| anyhow!("--x: {label:?} is not a point label")),
        None => Ok(sys.space().support()[0]),
    }
}

fn resolve_start(config: &SystemConfig, start: Option<&str>) -> Result<Start> {
    match start {
        None | Some("stationary") => Ok(Start::Stationary),
        Some(label) => config
            .state_index(label)
            .map(Start::Fixed)
            .ok_or_else(|| anyhow!("--start: {label:?} is neither \"stationary\" nor a state label")),
    }
}

/// Convergence trace as CSV. Trials run on the current rayon pool.
pub fn simulate_csv(config: &SystemConfig, opts: &SimulateOptions) -> Result<String> {
    let sys = config.system()?;
    let (name, f) = resolve_function(config, opts.f.as_deref())?;
    let x = resolve_point(&sys, opts.x.as_deref())?;
    let sim = SimulationConfig {
        seed: opts.seed,
        horizons: opts.horizons.clone(),
        trials: opts.trials,
        start: resolve_start(config, opts.start.as_deref())?,
    };
    let mut trace = convergence_report(&sys, &f, x, &sim)?;
    trace.function = name;
    Ok(trace.to_csv())
}
