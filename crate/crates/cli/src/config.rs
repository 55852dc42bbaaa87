//! Declarative experiment configuration.
//!
//! ```toml
//! seed = 7
//! out = "reports"
//! jobs = 4
//!
//! [[experiment]]
//! name = "funnel"
//! kind = "ess-bottom"
//! [experiment.params]
//! end = "funnel"
//! ```
//!
//! Parsing happens in two steps: the outer layout first, then each
//! `params` table against the schema of its experiment kind.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::registry;
use crate::RunnerError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Unique label; names the report file. Defaults to the kind.
    #[serde(default)]
    pub name: Option<String>,
    pub kind: String,
    #[serde(default = "empty_table")]
    pub params: toml::Value,
}

fn empty_table() -> toml::Value {
    toml::Value::Table(Default::default())
}

impl ExperimentSpec {
    pub fn new(kind: &str) -> Self {
        ExperimentSpec {
            name: None,
            kind: kind.to_string(),
            params: empty_table(),
        }
    }

    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or(&self.kind)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunnerError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| RunnerError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunnerError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| RunnerError::Io(path.to_path_buf(), e))?;
        Self::from_toml(&text)
    }

    /// Second parsing step: every kind must be registered, every label
    /// unique and every parameter table valid for its kind.
    pub fn validate(&self) -> Result<(), RunnerError> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, spec) in self.experiments.iter().enumerate() {
            let entry = registry::find(&spec.kind).ok_or_else(|| {
                RunnerError::Config(format!(
                    "experiment[{i}].kind: unknown experiment `{}`",
                    spec.kind
                ))
            })?;
            (entry.validate)(&spec.params).map_err(|e| {
                RunnerError::Config(format!("experiment[{i}].params ({}): {e}", spec.kind))
            })?;
            let label = spec.label();
            if label.is_empty() || label.contains(['/', '\\']) {
                return Err(RunnerError::Config(format!(
                    "experiment[{i}].name: `{label}` is not a usable file name"
                )));
            }
            if !seen.insert(label.to_string()) {
                return Err(RunnerError::Config(format!(
                    "experiment[{i}].name: duplicate name `{label}`"
                )));
            }
        }
        Ok(())
    }
}

/// Parses a parameter table into its typed form; unknown keys are errors.
pub fn parse_params<P: DeserializeOwned>(value: &toml::Value) -> Result<P, String> {
    value
        .clone()
        .try_into()
        .map_err(|e: toml::de::Error| e.message().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_and_empty_configs() {
        let cfg = ExperimentConfig::from_toml("").unwrap();
        assert!(cfg.experiments.is_empty());
        let cfg =
            ExperimentConfig::from_toml("seed = 3\n[[experiment]]\nkind = \"tables\"\n").unwrap();
        assert_eq!(cfg.seed, Some(3));
        assert_eq!(cfg.experiments[0].label(), "tables");
    }

    #[test]
    fn unknown_keys_are_named() {
        let top = ExperimentConfig::from_toml("sed = 3\n")
            .unwrap_err()
            .to_string();
        assert!(top.contains("sed"), "{top}");
        let inner = ExperimentConfig::from_toml(
            "[[experiment]]\nkind = \"tables\"\nparams = { field = \"R\", elll = 3 }\n",
        )
        .unwrap_err()
        .to_string();
        assert!(
            inner.contains("elll") && inner.contains("experiment[0]"),
            "{inner}"
        );
        let kind = ExperimentConfig::from_toml("[[experiment]]\nkind = \"nope\"\n")
            .unwrap_err()
            .to_string();
        assert!(kind.contains("nope"));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = "[[experiment]]\nkind = \"tables\"\n[[experiment]]\nkind = \"tables\"\n";
        assert!(ExperimentConfig::from_toml(text)
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
    }
}
