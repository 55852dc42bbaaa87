//! Catalog of named experiments.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::parse_params;
use crate::experiments::{self, Ctx, ExperimentError};
use crate::report::Outcome;

/// A runnable experiment with typed parameters.
pub trait Experiment {
    const NAME: &'static str;
    const SUMMARY: &'static str;
    /// The mathematical statement the experiment checks.
    const VERIFIES: &'static str;
    type Params: DeserializeOwned + Serialize + Default;
    fn run(params: &Self::Params, ctx: &mut Ctx) -> Result<Outcome, ExperimentError>;
}

type RunFn = fn(&toml::Value, &mut Ctx) -> Result<(serde_json::Value, Outcome), ExperimentError>;

#[derive(Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub verifies: &'static str,
    pub defaults: fn() -> serde_json::Value,
    pub validate: fn(&toml::Value) -> Result<(), String>,
    pub run: RunFn,
}

impl std::fmt::Debug for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Entry")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

fn defaults<E: Experiment>() -> serde_json::Value {
    serde_json::to_value(E::Params::default()).unwrap_or_default()
}

fn validate<E: Experiment>(v: &toml::Value) -> Result<(), String> {
    parse_params::<E::Params>(v).map(|_| ())
}

fn run<E: Experiment>(
    v: &toml::Value,
    ctx: &mut Ctx,
) -> Result<(serde_json::Value, Outcome), ExperimentError> {
    let p: E::Params = parse_params(v).map_err(ExperimentError::Params)?;
    let echo = serde_json::to_value(&p).unwrap_or_default();
    Ok((echo, E::run(&p, ctx)?))
}

pub fn entry<E: Experiment>() -> Entry {
    Entry {
        name: E::NAME,
        summary: E::SUMMARY,
        verifies: E::VERIFIES,
        defaults: defaults::<E>,
        validate: validate::<E>,
        run: run::<E>,
    }
}

/// Every registered experiment, sorted by name.
pub fn all() -> Vec<Entry> {
    let mut v = experiments::entries();
    v.sort_by_key(|e| e.name);
    v
}

pub fn find(name: &str) -> Option<Entry> {
    all().into_iter().find(|e| e.name == name)
}

/// Human-readable catalog with each parameter schema as TOML.
pub fn catalog() -> String {
    let mut out = String::new();
    for e in all() {
        out.push_str(&format!(
            "{}\n  {}\n  verifies: {}\n",
            e.name, e.summary, e.verifies
        ));
        let params = (e.defaults)();
        let as_toml = serde_json::from_value::<toml::Value>(params)
            .ok()
            .and_then(|v| toml::to_string(&v).ok())
            .unwrap_or_default();
        for line in as_toml.lines().filter(|l| !l.is_empty()) {
            out.push_str(&format!("    {line}\n"));
        }
    }
    out
}
