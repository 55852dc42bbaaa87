use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
    Holds,
}

/// One numeric acceptance check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound,
            relation: Relation::Le,
            pass: value <= bound,
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound,
            relation: Relation::Ge,
            pass: value >= bound,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: f64::from(u8::from(ok)),
            bound: 1.0,
            relation: Relation::Holds,
            pass: ok,
        }
    }
}

/// Tabular side output of an experiment, written next to its report.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub content: String,
}

/// What an experiment hands back to the runner.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn new(checks: Vec<Check>, data: impl Serialize) -> Self {
        Outcome {
            checks,
            data: serde_json::to_value(data).unwrap_or_default(),
            artifacts: Vec::new(),
        }
    }

    pub fn with_artifact(mut self, file: &str, content: String) -> Self {
        self.artifacts.push(Artifact {
            file: file.to_string(),
            content,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// First failing check, for one-line summaries.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        })
    }
}

/// Per-experiment JSON report. Holds no timing data so reruns with the
/// same seed are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub kind: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub name: String,
    pub kind: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub experiments: Vec<SummaryEntry>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub all_pass: bool,
}

impl Summary {
    pub fn from_reports(seed: u64, reports: &[Report]) -> Self {
        let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
        Summary {
            seed,
            experiments: reports
                .iter()
                .map(|r| SummaryEntry {
                    name: r.name.clone(),
                    kind: r.kind.clone(),
                    verdict: r.verdict,
                })
                .collect(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            errors: count(Verdict::Error),
            all_pass: reports.iter().all(|r| r.verdict == Verdict::Pass),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_never_passes() {
        assert!(!Check::le("x", f64::NAN, 1.0).pass);
        assert!(!Check::ge("x", f64::NAN, 1.0).pass);
        assert!(Check::holds("ok", true).pass);
    }

    #[test]
    fn empty_summary_passes() {
        let s = Summary::from_reports(1, &[]);
        assert!(s.all_pass && s.experiments.is_empty());
    }
}
