//! CSV tables and SVG cumulative-histogram figures.

mod svg;

use std::fmt::Write as _;

use thiserror::Error;

use crate::criteria::{Criterion, CriterionReport};
use crate::probe::{ClassifierResult, ProbeTaskName};
use crate::stats;

pub use svg::{render_histogram_svg, Layout, LAYOUT};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("report for {criterion} / {encoder_id} / {dataset_id} has no histogram")]
    MissingHistogram {
        criterion: &'static str,
        encoder_id: String,
        dataset_id: String,
    },
}

/// Distinct values in order of first appearance.
fn ordered<'a>(items: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

fn cents(x: f64) -> i64 {
    (x * 100.0).round() as i64
}

fn fmt_cents(c: i64) -> String {
    let sign = if c < 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", c.abs() / 100, c.abs() % 100)
}

/// `pos`/`neg`/`diff` rows per dataset, one column per
/// encoder, 2 decimals. The diff cell is computed from the rounded pos and
/// neg cells so the printed row is self-consistent; the JSON reports keep
/// full precision.
pub fn table_c1(reports: &[CriterionReport], criterion: Criterion) -> String {
    let rows: Vec<&CriterionReport> = reports.iter().filter(|r| r.criterion == criterion).collect();
    let encoders = ordered(rows.iter().map(|r| r.encoder_id.as_str()));
    let datasets = ordered(rows.iter().map(|r| r.dataset_id.as_str()));
    let mut out = format!("dataset,metric,{}\n", encoders.join(","));
    for d in &datasets {
        for metric in ["pos", "neg", "diff"] {
            let cells: Vec<String> = encoders
                .iter()
                .map(|e| {
                    let Some(r) = rows.iter().find(|r| r.dataset_id == *d && r.encoder_id == *e) else {
                        return String::new();
                    };
                    match (metric, r.pos_mean, r.neg_mean) {
                        ("pos", Some(p), _) => fmt_cents(cents(p)),
                        ("neg", _, Some(n)) => fmt_cents(cents(n)),
                        ("diff", Some(p), Some(n)) => fmt_cents(cents(p) - cents(n)),
                        _ => String::new(),
                    }
                })
                .collect();
            writeln!(out, "{d},{metric},{}", cells.join(",")).unwrap();
        }
    }
    out
}

/// One row per (dataset, n), one column per encoder, 3 decimals.
pub fn table_c2(reports: &[CriterionReport]) -> String {
    let rows: Vec<&CriterionReport> = reports.iter().filter(|r| r.criterion == Criterion::C2).collect();
    let encoders = ordered(rows.iter().map(|r| r.encoder_id.as_str()));
    let datasets = ordered(rows.iter().map(|r| r.dataset_id.as_str()));
    let mut ns: Vec<usize> = rows
        .iter()
        .flat_map(|r| r.per_n_counts.iter().flat_map(|m| m.keys().copied()))
        .collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = format!("dataset,n,{}\n", encoders.join(","));
    for d in &datasets {
        for n in &ns {
            let cells: Vec<String> = encoders
                .iter()
                .map(|e| {
                    rows.iter()
                        .find(|r| r.dataset_id == *d && r.encoder_id == *e)
                        .and_then(|r| r.per_n_means.as_ref()?.get(n).copied())
                        .map(|m| format!("{m:.3}"))
                        .unwrap_or_default()
                })
                .collect();
            writeln!(out, "{d},{n},{}", cells.join(",")).unwrap();
        }
    }
    out
}

/// One row per encoder, one column per task plus `Avg`,
/// accuracies in percent with 2 decimals.
pub fn table_probe(results: &[ClassifierResult]) -> String {
    let encoders = ordered(results.iter().map(|r| r.encoder_id.as_str()));
    let tasks: Vec<ProbeTaskName> = ProbeTaskName::ALL
        .into_iter()
        .filter(|t| results.iter().any(|r| r.task.name == *t))
        .collect();
    let names: Vec<String> = tasks.iter().map(ToString::to_string).collect();
    let mut out = format!("encoder,{},Avg\n", names.join(","));
    for e in encoders {
        let accs: Vec<Option<f64>> = tasks
            .iter()
            .map(|t| {
                results
                    .iter()
                    .find(|r| r.encoder_id == e && r.task.name == *t)
                    .map(|r| 100.0 * r.mean_accuracy)
            })
            .collect();
        let present: Vec<f64> = accs.iter().flatten().copied().collect();
        let mut cells: Vec<String> = accs.iter().map(|a| a.map(|v| format!("{v:.2}")).unwrap_or_default()).collect();
        cells.push(stats::mean(&present).map(|v| format!("{v:.2}")).unwrap_or_default());
        writeln!(out, "{e},{}", cells.join(",")).unwrap();
    }
    out
}

/// Verdict overview: one row per report.
pub fn table_verdicts(reports: &[CriterionReport]) -> String {
    let mut out = String::from("criterion,encoder,dataset,n,verdict\n");
    for r in reports {
        let verdict = serde_json::to_value(r.verdict).unwrap();
        writeln!(
            out,
            "{},{},{},{},{}",
            r.criterion.name(),
            r.encoder_id,
            r.dataset_id,
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            verdict.as_str().unwrap()
        )
        .unwrap();
    }
    out
}
