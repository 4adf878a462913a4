//! JSON system descriptions.
//!
//! ```json
//! {
//!   "states": ["0", "1"],
//!   "kernel": [[0, 1], [1, 0]],
//!   "stationary": [0.5, 0.5],
//!   "space": { "points": ["1", "2", "3"], "mu": [0.3333333333333333, 0.3333333333333333, 0.3333333333333333] },
//!   "family": { "0": ["2", "3", "1"], "1": ["3", "1", "2"] },
//!   "function": { "name": "ind_1", "values": [1, 0, 0] }
//! }
//! ```
//!
//! `family[y][i]` is the image of `space.points[i]` under `T_y`. `stationary`
//! and `function` are optional.

use std::collections::HashSet;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rds_ergodic::dynamics::DynamicsError;
use rds_ergodic::kernels::{stationary_distribution, validate_spec, KernelError};
use rds_ergodic::{FiniteMeasureSpace, ProbVector, SkewSystem, StochasticMatrix, TransformationFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub states: Vec<String>,
    pub kernel: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary: Option<Vec<f64>>,
    pub space: SpaceConfig,
    pub family: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub points: Vec<String>,
    pub mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionConfig {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at `{field}`: {message}")]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }

    /// The offending field path, e.g. `kernel[1]`.
    pub fn field(&self) -> &str {
        match self {
            ConfigError::Parse { field, .. } | ConfigError::Validation { field, .. } => field,
        }
    }
}

/// Parses and validates a config. A missing `stationary` is filled in from
/// the kernel.
pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parse_error = |field: String, e: serde_json::Error| ConfigError::Parse {
        field,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let mut config: SystemConfig =
        serde_path_to_error::deserialize(&mut de).map_err(|e| parse_error(e.path().to_string(), e.into_inner()))?;
    de.end().map_err(|e| parse_error(".".to_string(), e))?;

    let sys = config.system()?;
    if config.stationary.is_none() {
        config.stationary = Some(sys.spec().m().values().to_vec());
    }
    Ok(config)
}

/// Pretty JSON that [`parse_config`] reads back to an equal config.
pub fn render(config: &SystemConfig) -> String {
    let mut out = serde_json::to_string_pretty(config).expect("config serializes");
    out.push('\n');
    out
}

fn kernel_field(e: &KernelError, base: &str) -> String {
    match e {
        KernelError::InvalidMatrixEntry { row, col, .. } => format!("{base}[{row}][{col}]"),
        KernelError::RowNotStochastic { row, .. } => format!("{base}[{row}]"),
        KernelError::InvalidEntry { index, .. } => format!("{base}[{index}]"),
        _ => base.to_string(),
    }
}

fn unique_labels(labels: &[String], field: &str) -> Result<(), ConfigError> {
    if labels.is_empty() {
        return Err(ConfigError::invalid(field, "no labels"));
    }
    let mut seen = HashSet::new();
    for (i, l) in labels.iter().enumerate() {
        if !seen.insert(l) {
            return Err(ConfigError::invalid(format!("{field}[{i}]"), format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

impl SystemConfig {
    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.space.points.iter().position(|p| p == label)
    }

    /// Validates every field and builds the system.
    pub fn system(&self) -> Result<SkewSystem, ConfigError> {
        unique_labels(&self.states, "states")?;
        let n = self.states.len();
        if self.kernel.len() != n {
            return Err(ConfigError::invalid("kernel", format!("{} rows for {n} states", self.kernel.len())));
        }
        for (i, row) in self.kernel.iter().enumerate() {
            if row.len() != n {
                return Err(ConfigError::invalid(format!("kernel[{i}]"), format!("{} entries for {n} states", row.len())));
            }
        }
        let kernel = StochasticMatrix::from_rows(self.kernel.clone())
            .map_err(|e| ConfigError::invalid(kernel_field(&e, "kernel"), &e))?;

        let spec = match &self.stationary {
            Some(values) => {
                if values.len() != n {
                    return Err(ConfigError::invalid("stationary", format!("{} entries for {n} states", values.len())));
                }
                let m = ProbVector::new(values.clone()).map_err(|e| ConfigError::invalid(kernel_field(&e, "stationary"), &e))?;
                validate_spec(kernel, m).map_err(|e| ConfigError::invalid("stationary", &e))?
            }
            None => {
                let m = stationary_distribution(&kernel).map_err(|e| match e {
                    KernelError::MultipleStationary(_) => {
                        ConfigError::invalid("stationary", format!("required: {e}"))
                    }
                    e => ConfigError::invalid("kernel", &e),
                })?;
                validate_spec(kernel, m).map_err(|e| ConfigError::invalid("kernel", &e))?
            }
        };

        unique_labels(&self.space.points, "space.points")?;
        let k = self.space.points.len();
        if self.space.mu.len() != k {
            return Err(ConfigError::invalid("space.mu", format!("{} entries for {k} points", self.space.mu.len())));
        }
        let mu = ProbVector::new(self.space.mu.clone()).map_err(|e| ConfigError::invalid(kernel_field(&e, "space.mu"), &e))?;
        let space = FiniteMeasureSpace::new(self.space.points.clone(), mu).map_err(|e| ConfigError::invalid("space", &e))?;

        for label in self.family.keys() {
            if self.state_index(label).is_none() {
                return Err(ConfigError::invalid(format!("family.{label}"), "not a state label"));
            }
        }
        let mut tables = Vec::with_capacity(n);
        for state in &self.states {
            let field = format!("family.{state}");
            let images = self
                .family
                .get(state)
                .ok_or_else(|| ConfigError::invalid("family", format!("no map for state {state:?}")))?;
            if images.len() != k {
                return Err(ConfigError::invalid(field, format!("{} images for {k} points", images.len())));
            }
            let table = images
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    self.point_index(p)
                        .ok_or_else(|| ConfigError::invalid(format!("{field}[{i}]"), format!("{p:?} is not a point label")))
                })
                .collect::<Result<Vec<usize>, _>>()?;
            let map = rds_ergodic::dynamics::validate_map(&space, table).map_err(|e| {
                let detail = match &e {
                    DynamicsError::NotMeasurePreserving { point, .. } | DynamicsError::NotBijective { point, .. } => {
                        format!("{e} ({:?})", self.space.points[*point])
                    }
                    _ => e.to_string(),
                };
                ConfigError::invalid(&field, detail)
            })?;
            tables.push(map);
        }
        let family = TransformationFamily::new(space, tables).map_err(|e| ConfigError::invalid("family", &e))?;

        if let Some(function) = &self.function {
            if function.values.len() != k {
                return Err(ConfigError::invalid(
                    "function.values",
                    format!("{} values for {k} points", function.values.len()),
                ));
            }
            if let Some(i) = function.values.iter().position(|v| !v.is_finite()) {
                return Err(ConfigError::invalid(format!("function.values[{i}]"), "not finite"));
            }
        }

        SkewSystem::new(spec, family).map_err(|e| ConfigError::invalid("family", &e))
    }
}
