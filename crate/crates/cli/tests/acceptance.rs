//! Acceptance suite. Each criterion runs one or more registered experiments
//! with their default parameters and prints a single PASS/FAIL line.
//! Run with `cargo test -p orbispec-cli --release --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use orbispec_cli::runner::{run_spec, DEFAULT_SEED};
use orbispec_cli::{ExperimentSpec, Report, Verdict};

struct Criterion {
    id: u32,
    title: &'static str,
    specs: Vec<ExperimentSpec>,
    budget: Option<Duration>,
}

fn spec(kind: &str) -> ExperimentSpec {
    ExperimentSpec::new(kind)
}

fn spec_with(kind: &str, name: &str, params: &str) -> ExperimentSpec {
    ExperimentSpec {
        name: Some(name.into()),
        kind: kind.into(),
        params: toml::from_str(params).unwrap(),
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "delta tables",
            specs: vec![spec("hodge-sweep"), spec("tables")],
            budget: secs(1),
        },
        Criterion {
            id: 2,
            title: "Dolbeault spectra",
            specs: vec![spec("dolbeault")],
            budget: secs(1),
        },
        Criterion {
            id: 3,
            title: "essential bottom of funnel and cusp",
            specs: vec![
                spec_with("ess-bottom", "ess-funnel", r#"end = "funnel""#),
                spec_with("ess-bottom", "ess-cusp", r#"end = "cusp""#),
            ],
            budget: secs(30),
        },
        Criterion {
            id: 4,
            title: "Riccati sandwich",
            specs: vec![spec("riccati-sandwich")],
            budget: secs(60),
        },
        Criterion {
            id: 5,
            title: "Rauch II tightness",
            specs: vec![spec("rauch")],
            budget: None,
        },
        Criterion {
            id: 6,
            title: "Gronwall envelope and transverse decay",
            specs: vec![spec("gronwall"), spec("decay")],
            budget: None,
        },
        Criterion {
            id: 7,
            title: "IMS identity convergence",
            specs: vec![spec("ims")],
            budget: None,
        },
        Criterion {
            id: 8,
            title: "localization bounds",
            specs: vec![spec("localization-bounds")],
            budget: None,
        },
        Criterion {
            id: 9,
            title: "Casimir curvature potential",
            specs: vec![spec("casimir-alpha")],
            budget: None,
        },
        Criterion {
            id: 10,
            title: "mollifier bounds",
            specs: vec![spec("mollify-bounds")],
            budget: None,
        },
        Criterion {
            id: 11,
            title: "convex smoothing pipeline",
            specs: vec![spec("mollify-papa")],
            budget: secs(60),
        },
        Criterion {
            id: 12,
            title: "cutoff gradient decay",
            specs: vec![spec("cutoff-decay")],
            budget: None,
        },
        Criterion {
            id: 13,
            title: "Weyl sequences",
            specs: vec![spec("weyl")],
            budget: None,
        },
    ]
}

fn describe_failure(r: &Report) -> String {
    if let Some(e) = &r.error {
        return format!("{}: error {e}", r.name);
    }
    r.checks
        .iter()
        .find(|c| !c.pass)
        .map(|c| format!("{}: {} = {:e} vs {:e}", r.name, c.name, c.value, c.bound))
        .unwrap_or_else(|| format!("{}: {}", r.name, r.verdict))
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let reports: Vec<Report> = c
            .specs
            .iter()
            .map(|s| run_spec(s, DEFAULT_SEED).0)
            .collect();
        let elapsed = start.elapsed();
        let bad: Vec<String> = reports
            .iter()
            .filter(|r| r.verdict != Verdict::Pass)
            .map(describe_failure)
            .collect();
        let over = match c.budget {
            Some(b) if elapsed > b => Some(format!("runtime {:.2?} over {:.0?}", elapsed, b)),
            _ => None,
        };
        let ok = bad.is_empty() && over.is_none();
        let mut line = format!(
            "criterion {:>2}: {} {} ({:.2?})",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed
        );
        for detail in bad.iter().chain(over.iter()) {
            line.push_str(&format!(" [{detail}]"));
        }
        println!("{line}");
        if !ok {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn every_criterion_is_a_named_experiment() {
    for c in criteria() {
        for s in &c.specs {
            assert!(
                orbispec_cli::registry::find(&s.kind).is_some(),
                "criterion {} uses unknown {}",
                c.id,
                s.kind
            );
        }
    }
}

#[test]
fn real_three_table_csv() {
    let (report, artifacts) = run_spec(&spec("tables"), DEFAULT_SEED);
    assert_eq!(report.verdict, Verdict::Pass);
    let csv = &artifacts[0].content;
    assert_eq!(
        csv,
        "k,delta_k,spectrum\n0,1,\"[1,∞)\"\n1,0,\"[0,∞)\"\n2,0,\"[0,∞)\"\n3,1,\"[1,∞)\"\n"
    );
}
