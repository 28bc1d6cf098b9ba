//! Output formatting for each command. All numbers in `table` output are
//! fixed at 4 decimal places; nothing time-dependent is printed.

use std::fmt::Write as _;

use serde::Serialize;

use idealrank_core::analysis::{
    explain_report, DisplayRounding, ExplainReport, NoiseModel, StabilityReport, SweepPoint,
    SweepResult, CLOSENESS, IDEAL_SOLUTIONS, WEIGHTED_MATRIX,
};
use idealrank_core::{RankingReport, ValidatedProblem};

use crate::OutputFormat;

const RANK_TABLES: [&str; 3] = [WEIGHTED_MATRIX, IDEAL_SOLUTIONS, CLOSENESS];

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}

fn csv_line(cells: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn validation(problem: &ValidatedProblem, format: OutputFormat) -> String {
    match format {
        OutputFormat::Object => json(&serde_json::json!({
            "valid": true,
            "alternatives": problem.alternatives().len(),
            "criteria": problem.criteria().len(),
            "weights_rescaled": problem.weights_rescaled(),
        })),
        OutputFormat::Table | OutputFormat::Delimited => {
            let mut out = String::from("valid\n");
            if problem.weights_rescaled() {
                out.push_str("note: weights were rescaled to sum to 1\n");
            }
            out
        }
    }
}

/// Weighted matrix, ideal solutions and closeness tables followed by the
/// final order.
pub fn render_table(report: &RankingReport, rounding: DisplayRounding) -> String {
    let tables = explain_report(report, rounding).subset(&RANK_TABLES);
    let mut out = tables.render_text();
    out.push_str("\nRanking\n");
    for (pos, i) in report.order().into_iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>2}  {}  {:.4}",
            pos + 1,
            report.alternatives[i],
            rounding.apply(report.closeness[i])
        );
    }
    out
}

pub fn rank(report: &RankingReport, format: OutputFormat, rounding: DisplayRounding) -> String {
    match format {
        OutputFormat::Table => render_table(report, rounding),
        OutputFormat::Object => json(report),
        OutputFormat::Delimited => {
            let mut out = csv_line(&["alternative".into(), "closeness".into(), "rank".into()]);
            for (i, name) in report.alternatives.iter().enumerate() {
                out.push_str(&csv_line(&[
                    name.clone(),
                    report.closeness[i].to_string(),
                    report.ranks[i].to_string(),
                ]));
            }
            out
        }
    }
}

pub fn explain(report: &ExplainReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => report.render_text(),
        OutputFormat::Object => json(report),
        OutputFormat::Delimited => report.render_delimited(),
    }
}

pub fn sweep(result: &SweepResult, format: OutputFormat, rounding: DisplayRounding) -> String {
    let top_name = |p: &SweepPoint| {
        p.top()
            .map_or_else(|| "-".to_owned(), |t| result.alternatives[t].clone())
    };
    match format {
        OutputFormat::Object => json(result),
        OutputFormat::Delimited => {
            let mut header = vec![format!("weight({})", result.criterion)];
            header.extend(result.alternatives.iter().cloned());
            header.push("top".into());
            let mut out = csv_line(&header);
            for p in &result.points {
                let mut row = vec![p.weight.to_string()];
                match &p.closeness {
                    Some(c) => row.extend(c.iter().map(f64::to_string)),
                    None => row.extend(result.alternatives.iter().map(|_| String::new())),
                }
                row.push(top_name(p));
                out.push_str(&csv_line(&row));
            }
            out
        }
        OutputFormat::Table => {
            let mut out = format!(
                "Weight sweep on {} ({} points, ideal mode: {}, distance: {})\n\n",
                result.criterion,
                result.points.len(),
                result.options.ideal_mode,
                result.options.distance
            );
            let widths: Vec<usize> = result.alternatives.iter().map(|a| a.len().max(6)).collect();
            let _ = write!(out, "{:>6}", "weight");
            for (a, w) in result.alternatives.iter().zip(&widths) {
                let _ = write!(out, "  {a:>w$}");
            }
            out.push_str("  top\n");
            for p in &result.points {
                let _ = write!(out, "{:>6.4}", p.weight);
                match &p.closeness {
                    Some(c) => {
                        for (x, w) in c.iter().zip(&widths) {
                            let _ = write!(out, "  {:>w$.4}", rounding.apply(*x));
                        }
                        let _ = writeln!(out, "  {}", top_name(p));
                    }
                    None => {
                        let _ = writeln!(out, "  {}", p.error.as_deref().unwrap_or("not ranked"));
                    }
                }
            }
            out.push_str("\nTop-rank crossovers\n");
            if result.crossovers.is_empty() {
                out.push_str("none\n");
            }
            for x in &result.crossovers {
                let _ = writeln!(
                    out,
                    "({:.4}, {:.4}]  {} -> {}",
                    x.from_weight, x.to_weight, x.from_top, x.to_top
                );
            }
            out
        }
    }
}

pub fn stability(report: &StabilityReport, format: OutputFormat) -> String {
    let n = report.alternatives.len();
    match format {
        OutputFormat::Object => json(report),
        OutputFormat::Delimited => {
            let mut header = vec!["alternative".to_owned()];
            header.extend((1..=n).map(|r| format!("rank{r}")));
            let mut out = csv_line(&header);
            for (a, row) in report.alternatives.iter().zip(&report.frequency) {
                let mut cells = vec![a.clone()];
                cells.extend(row.iter().map(u64::to_string));
                out.push_str(&csv_line(&cells));
            }
            out
        }
        OutputFormat::Table => {
            let magnitude = match report.noise {
                NoiseModel::UniformIntegerJitter { magnitude } => magnitude,
            };
            let mut out = format!(
                "Rank stability: {} trials, seed {}, integer jitter ±{}, ideal mode: {}, distance: {}\n\n",
                report.trials, report.seed, magnitude, report.options.ideal_mode, report.options.distance
            );
            let label = report
                .alternatives
                .iter()
                .map(String::len)
                .max()
                .unwrap_or(0)
                .max(11);
            let cell = report.trials.to_string().len().max(6);
            let _ = write!(out, "{:label$}", "alternative");
            for r in 1..=n {
                let _ = write!(out, "  {:>cell$}", format!("rank {r}"));
            }
            out.push('\n');
            for (a, row) in report.alternatives.iter().zip(&report.frequency) {
                let _ = write!(out, "{a:label$}");
                for f in row {
                    let _ = write!(out, "  {f:>cell$}");
                }
                out.push('\n');
            }
            let modal_count = report.rankings.first().map_or(0, |r| r.count);
            let _ = writeln!(
                out,
                "\nmodal ranking: {} ({} of {} trials)",
                report.modal_ranking.join(" > "),
                modal_count,
                report.trials
            );
            let _ = writeln!(
                out,
                "baseline ranking share: {:.4}",
                report.baseline_share()
            );
            let _ = writeln!(out, "degenerate trials: {}", report.degenerate_trials);
            out
        }
    }
}
