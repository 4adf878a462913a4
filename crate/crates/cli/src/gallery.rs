//! Built-in systems.

use indexmap::IndexMap;
use thiserror::Error;

use crate::config::{FunctionConfig, SpaceConfig, SystemConfig};

pub const GALLERY: [&str; 4] = ["bufetov_period2", "bernoulli_rotation", "nonergodic_base", "deterministic_block"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown gallery system {0:?} (known: {known})", known = GALLERY.join(", "))]
pub struct UnknownSystem(pub String);

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn uniform_space(k: usize) -> SpaceConfig {
    SpaceConfig {
        points: (1..=k).map(|i| i.to_string()).collect(),
        mu: vec![1.0 / k as f64; k],
    }
}

fn family(maps: &[(&str, &[&str])]) -> IndexMap<String, Vec<String>> {
    maps.iter().map(|(y, images)| (y.to_string(), labels(images))).collect()
}

/// Period-two kernel driving a 3-cycle and its inverse. Irreducible, not
/// strictly irreducible, and the skew product splits into three classes.
pub fn bufetov_period2() -> SystemConfig {
    SystemConfig {
        states: labels(&["0", "1"]),
        kernel: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        stationary: Some(vec![0.5, 0.5]),
        space: uniform_space(3),
        family: family(&[("0", &["2", "3", "1"]), ("1", &["3", "1", "2"])]),
        function: Some(FunctionConfig {
            name: "ind_1".into(),
            values: vec![1.0, 0.0, 0.0],
        }),
    }
}

/// i.i.d. states (a trivial kernel); state 0 rotates four points, state 1
/// fixes them.
pub fn bernoulli_rotation() -> SystemConfig {
    SystemConfig {
        states: labels(&["0", "1"]),
        kernel: vec![vec![0.6, 0.4], vec![0.6, 0.4]],
        stationary: Some(vec![0.6, 0.4]),
        space: uniform_space(4),
        family: family(&[("0", &["2", "3", "4", "1"]), ("1", &["1", "2", "3", "4"])]),
        function: Some(FunctionConfig {
            name: "ramp".into(),
            values: vec![0.0, 1.0, 2.0, 3.0],
        }),
    }
}

/// Identity kernel: the base is not ergodic, so neither is any skew product.
/// State 0 swaps the two points and state 1 fixes them.
pub fn nonergodic_base() -> SystemConfig {
    SystemConfig {
        states: labels(&["0", "1"]),
        kernel: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        stationary: Some(vec![0.5, 0.5]),
        space: uniform_space(2),
        family: family(&[("0", &["2", "1"]), ("1", &["1", "2"])]),
        function: Some(FunctionConfig {
            name: "ind_1".into(),
            values: vec![1.0, 0.0],
        }),
    }
}

/// Irreducible on four states with deterministic set `{0, 1}`. The swap on
/// the states whose row crosses sides makes an ergodic family with a
/// non-ergodic skew product.
pub fn deterministic_block() -> SystemConfig {
    SystemConfig {
        states: labels(&["0", "1", "2", "3"]),
        kernel: vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0],
        ],
        stationary: Some(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
        space: uniform_space(2),
        family: family(&[
            ("0", &["1", "2"]),
            ("1", &["2", "1"]),
            ("2", &["2", "1"]),
            ("3", &["2", "1"]),
        ]),
        function: Some(FunctionConfig {
            name: "ind_1".into(),
            values: vec![1.0, 0.0],
        }),
    }
}

pub fn gallery(name: &str) -> Result<SystemConfig, UnknownSystem> {
    match name {
        "bufetov_period2" => Ok(bufetov_period2()),
        "bernoulli_rotation" => Ok(bernoulli_rotation()),
        "nonergodic_base" => Ok(nonergodic_base()),
        "deterministic_block" => Ok(deterministic_block()),
        _ => Err(UnknownSystem(name.to_string())),
    }
}
