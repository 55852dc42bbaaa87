//! Executes a validated configuration and writes its reports.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentSpec};
use crate::experiments::Ctx;
use crate::registry;
use crate::report::{Report, Summary, Verdict};
use crate::RunnerError;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Command-line overrides; `None` falls back to the configuration.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub filter: Option<String>,
}

#[derive(Debug)]
pub struct RunResult {
    pub reports: Vec<Report>,
    pub summary: Summary,
    pub out: PathBuf,
}

impl RunResult {
    pub fn exit_code(&self) -> i32 {
        if self.summary.all_pass {
            0
        } else {
            1
        }
    }
}

#[derive(Serialize)]
struct Timing {
    name: String,
    millis: u128,
}

#[derive(Serialize)]
struct Metadata {
    version: &'static str,
    seed: u64,
    jobs: usize,
    started_unix: u64,
    finished_unix: u64,
    timings: Vec<Timing>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<(), RunnerError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let io = |e: std::io::Error| RunnerError::Io(path.to_path_buf(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn to_json(v: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

/// Runs one experiment without touching the file system.
pub fn run_spec(spec: &ExperimentSpec, seed: u64) -> (Report, Vec<crate::report::Artifact>) {
    let label = spec.label().to_string();
    let mut ctx = Ctx::new(seed, &label);
    let base = |verdict, error| Report {
        name: label.clone(),
        kind: spec.kind.clone(),
        seed,
        params: serde_json::Value::Null,
        verdict,
        checks: Vec::new(),
        data: serde_json::Value::Null,
        artifacts: Vec::new(),
        error,
    };
    let Some(entry) = registry::find(&spec.kind) else {
        return (
            base(
                Verdict::Error,
                Some(format!("unknown experiment `{}`", spec.kind)),
            ),
            Vec::new(),
        );
    };
    match (entry.run)(&spec.params, &mut ctx) {
        Ok((params, outcome)) => {
            let verdict = if outcome.passed() {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let artifacts = outcome
                .artifacts
                .iter()
                .map(|a| format!("{label}.{}", a.file))
                .collect();
            let report = Report {
                params,
                verdict,
                checks: outcome.checks,
                data: outcome.data,
                artifacts,
                ..base(verdict, None)
            };
            (report, outcome.artifacts)
        }
        Err(e) => (base(Verdict::Error, Some(e.to_string())), Vec::new()),
    }
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunResult, RunnerError> {
    cfg.validate()?;
    let seed = opts.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let out = opts
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("reports"));
    let jobs = opts
        .jobs
        .or(cfg.jobs)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let pattern = opts
        .filter
        .as_deref()
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| RunnerError::Filter(e.to_string()))?;
    let selected: Vec<&ExperimentSpec> = cfg
        .experiments
        .iter()
        .filter(|s| pattern.as_ref().is_none_or(|p| p.matches(s.label())))
        .collect();
    std::fs::create_dir_all(&out).map_err(|e| RunnerError::Io(out.clone(), e))?;

    let started = unix_now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| RunnerError::Pool(e.to_string()))?;
    let results: Vec<Result<(Report, u128), RunnerError>> = pool.install(|| {
        selected
            .par_iter()
            .map(|spec| {
                let clock = Instant::now();
                let (report, artifacts) = run_spec(spec, seed);
                let millis = clock.elapsed().as_millis();
                for a in &artifacts {
                    write_atomic(
                        &out.join(format!("{}.{}", report.name, a.file)),
                        a.content.as_bytes(),
                    )?;
                }
                write_atomic(
                    &out.join(format!("{}.json", report.name)),
                    &to_json(&report),
                )?;
                Ok((report, millis))
            })
            .collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut timings = Vec::with_capacity(results.len());
    for r in results {
        let (report, millis) = r?;
        timings.push(Timing {
            name: report.name.clone(),
            millis,
        });
        reports.push(report);
    }
    let summary = Summary::from_reports(seed, &reports);
    write_atomic(&out.join("summary.json"), &to_json(&summary))?;
    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        seed,
        jobs,
        started_unix: started,
        finished_unix: unix_now(),
        timings,
    };
    write_atomic(&out.join("metadata.json"), &to_json(&meta))?;
    Ok(RunResult {
        reports,
        summary,
        out,
    })
}
