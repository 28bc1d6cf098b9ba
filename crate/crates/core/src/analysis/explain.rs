use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TopsisError;
use crate::model::{DecisionProblem, EvalOptions, Matrix, RankingReport};
use crate::topsis::evaluate;

const DECIMALS: f64 = 1e4;

/// How values are cut to 4 decimal places for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisplayRounding {
    /// Round half away from zero.
    #[default]
    Nearest,
    /// Round toward +infinity. The published case-study tables were
    /// produced this way.
    Up,
}

impl DisplayRounding {
    pub fn apply(self, x: f64) -> f64 {
        let scaled = x * DECIMALS;
        let r = match self {
            DisplayRounding::Nearest => scaled.round(),
            // Absorb representation error so exact 4-dp values stay put.
            DisplayRounding::Up => (scaled - 1e-7).ceil(),
        };
        // Avoid rendering "-0.0000".
        r / DECIMALS + 0.0
    }
}

impl fmt::Display for DisplayRounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisplayRounding::Nearest => "nearest",
            DisplayRounding::Up => "up",
        })
    }
}

impl FromStr for DisplayRounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nearest" => Ok(DisplayRounding::Nearest),
            "up" => Ok(DisplayRounding::Up),
            other => Err(format!(
                "unknown rounding `{other}` (expected nearest or up)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Value(f64),
    Rank(usize),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v:.4}"),
            Cell::Rank(r) => write!(f, "{r}"),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainRow {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<ExplainRow>,
}

impl ExplainTable {
    pub fn row(&self, label: &str) -> Option<&ExplainRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Numeric cell at (`row`, `col`), if it holds a value.
    pub fn value(&self, row: &str, col: usize) -> Option<f64> {
        match self.row(row)?.cells.get(col)? {
            Cell::Value(v) => Some(*v),
            _ => None,
        }
    }

    fn render(&self, out: &mut String) {
        let label_width = self
            .rows
            .iter()
            .map(|r| r.label.chars().count())
            .max()
            .unwrap_or(0);
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.cells.iter().map(Cell::to_string).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| {
                rendered
                    .iter()
                    .filter_map(|r| r.get(j))
                    .map(|s| s.chars().count())
                    .chain(std::iter::once(c.chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let _ = writeln!(out, "{}", self.title);
        let mut line = format!("{:label_width$}", "");
        for (c, w) in self.columns.iter().zip(&widths) {
            let _ = write!(line, "  {c:>w$}");
        }
        let _ = writeln!(out, "{}", line.trim_end());
        for (row, cells) in self.rows.iter().zip(&rendered) {
            let mut line = format!("{:label_width$}", row.label);
            for (c, w) in cells.iter().zip(&widths) {
                let _ = write!(line, "  {c:>w$}");
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }

    fn render_delimited(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(
            std::iter::once(self.title.as_str()).chain(self.columns.iter().map(String::as_str)),
        )?;
        for row in &self.rows {
            let cells: Vec<String> = row.cells.iter().map(Cell::to_string).collect();
            w.write_record(
                std::iter::once(row.label.as_str()).chain(cells.iter().map(String::as_str)),
            )?;
        }
        Ok(())
    }
}

/// Step-by-step tables for one evaluation, values cut to 4 dp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub options: EvalOptions,
    pub rounding: DisplayRounding,
    pub weights_rescaled: bool,
    pub tables: Vec<ExplainTable>,
}

pub const DECISION_MATRIX: &str = "Decision matrix";
pub const NORMALIZED_MATRIX: &str = "Normalized decision matrix";
pub const WEIGHTED_MATRIX: &str = "Weighted normalized decision matrix";
pub const IDEAL_SOLUTIONS: &str = "Ideal solutions";
pub const SEPARATIONS: &str = "Separation measures";
pub const CLOSENESS: &str = "Closeness ratio";

pub const PIS_LABEL: &str = "PIS (A+)";
pub const NIS_LABEL: &str = "NIS (A-)";

impl ExplainReport {
    pub fn table(&self, title: &str) -> Option<&ExplainTable> {
        self.tables.iter().find(|t| t.title == title)
    }

    /// Only the tables with the given titles, in report order.
    pub fn subset(&self, titles: &[&str]) -> ExplainReport {
        ExplainReport {
            tables: self
                .tables
                .iter()
                .filter(|t| titles.contains(&t.title.as_str()))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "ideal mode: {}, distance: {}, rounding: {}\n",
            self.options.ideal_mode, self.options.distance, self.rounding
        );
        if self.weights_rescaled {
            out.push_str("note: weights were rescaled to sum to 1\n");
        }
        for t in &self.tables {
            out.push('\n');
            t.render(&mut out);
        }
        out
    }

    /// Tables as consecutive CSV blocks separated by blank lines.
    pub fn render_delimited(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(Vec::new());
            t.render_delimited(&mut w).expect("in-memory write");
            out.push_str(
                &String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"),
            );
        }
        out
    }
}

pub fn explain(
    problem: &DecisionProblem,
    options: &EvalOptions,
    rounding: DisplayRounding,
) -> Result<ExplainReport, TopsisError> {
    Ok(explain_report(&evaluate(problem, options)?, rounding))
}

/// Renders an existing report's intermediates.
pub fn explain_report(report: &RankingReport, rounding: DisplayRounding) -> ExplainReport {
    let round = |x: f64| Cell::Value(rounding.apply(x));
    let names: Vec<String> = report.criteria.iter().map(|c| c.name.clone()).collect();
    let matrix_table = |title: &str, m: &Matrix| ExplainTable {
        title: title.to_owned(),
        columns: names.clone(),
        rows: report
            .alternatives
            .iter()
            .enumerate()
            .map(|(i, a)| ExplainRow {
                label: a.clone(),
                cells: m.row(i).iter().map(|&x| round(x)).collect(),
            })
            .collect(),
    };

    let mut decision = matrix_table(DECISION_MATRIX, &report.scores);
    decision.rows.push(ExplainRow {
        label: "kind".into(),
        cells: report
            .criteria
            .iter()
            .map(|c| Cell::Text(c.kind.to_string()))
            .collect(),
    });
    decision.rows.push(ExplainRow {
        label: "weight".into(),
        cells: report.criteria.iter().map(|c| round(c.weight)).collect(),
    });

    let ideals = ExplainTable {
        title: IDEAL_SOLUTIONS.into(),
        columns: names.clone(),
        rows: vec![
            ExplainRow {
                label: PIS_LABEL.into(),
                cells: report.ideals.pis.iter().map(|&x| round(x)).collect(),
            },
            ExplainRow {
                label: NIS_LABEL.into(),
                cells: report.ideals.nis.iter().map(|&x| round(x)).collect(),
            },
        ],
    };

    let per_alternative =
        |title: &str, columns: &[&str], cells: &dyn Fn(usize) -> Vec<Cell>| ExplainTable {
            title: title.to_owned(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: report
                .alternatives
                .iter()
                .enumerate()
                .map(|(i, a)| ExplainRow {
                    label: a.clone(),
                    cells: cells(i),
                })
                .collect(),
        };
    let separations = per_alternative(SEPARATIONS, &["S+", "S-"], &|i| {
        vec![
            round(report.separations.s_plus[i]),
            round(report.separations.s_minus[i]),
        ]
    });
    let closeness = per_alternative(CLOSENESS, &["C", "Rank"], &|i| {
        vec![round(report.closeness[i]), Cell::Rank(report.ranks[i])]
    });

    ExplainReport {
        options: report.options,
        rounding,
        weights_rescaled: report.weights_rescaled,
        tables: vec![
            decision,
            matrix_table(NORMALIZED_MATRIX, report.normalized.values()),
            matrix_table(WEIGHTED_MATRIX, report.weighted.values()),
            ideals,
            separations,
            closeness,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Criterion, Distance, IdealMode};

    #[test]
    fn rounding_modes() {
        assert_eq!(DisplayRounding::Nearest.apply(0.226_819_19), 0.2268);
        assert_eq!(DisplayRounding::Up.apply(0.226_819_19), 0.2269);
        assert_eq!(DisplayRounding::Up.apply(0.1985), 0.1985);
        assert_eq!(DisplayRounding::Up.apply(0.5), 0.5);
        assert_eq!(DisplayRounding::Nearest.apply(1.0), 1.0);
        assert_eq!(DisplayRounding::Nearest.apply(-0.00001).to_string(), "0");
    }

    #[test]
    fn closeness_of_one_renders_four_places() {
        assert_eq!(Cell::Value(1.0).to_string(), "1.0000");
        assert_eq!(Cell::Rank(3).to_string(), "3");
    }

    #[test]
    fn single_row_problem_renders() {
        let p = DecisionProblem::new(
            vec!["only".into()],
            vec![Criterion::benefit("a", 0.5), Criterion::cost("b", 0.5)],
            vec![vec![2.0, 3.0]],
        );
        // One alternative coincides with both ideals, so evaluate refuses;
        // render a two-row problem instead and check the shape logic.
        assert!(
            explain(&p, &EvalOptions::default(), DisplayRounding::Nearest)
                .unwrap_err()
                .is_degenerate()
        );

        let p = DecisionProblem::new(
            vec!["x".into(), "y".into()],
            vec![Criterion::benefit("a", 0.5), Criterion::cost("b", 0.5)],
            vec![vec![2.0, 3.0], vec![1.0, 1.0]],
        );
        let r = explain(&p, &EvalOptions::default(), DisplayRounding::Nearest).unwrap();
        assert_eq!(r.tables.len(), 6);
        assert_eq!(r.table(CLOSENESS).unwrap().rows.len(), 2);
        let text = r.render_text();
        assert!(text.contains("Weighted normalized decision matrix"));
        assert_eq!(text, r.render_text());
    }

    #[test]
    fn paper_case_weighted_table_rounds_up_to_published_values() {
        let p = crate::fixtures::paper_case();
        let opts = EvalOptions::new(IdealMode::AllBenefit, Distance::Euclidean);
        let r = explain(&p, &opts, DisplayRounding::Up).unwrap();
        let t = r.table(WEIGHTED_MATRIX).unwrap();
        assert_eq!(t.value("A1", 0), Some(0.1985));
        assert_eq!(t.value("A4", 2), Some(0.1461));
        assert_eq!(t.value("A5", 0), Some(0.1702));
        let ideals = r.table(IDEAL_SOLUTIONS).unwrap();
        assert_eq!(ideals.value(PIS_LABEL, 3), Some(0.0463));
        assert_eq!(ideals.value(NIS_LABEL, 3), Some(0.0397));
    }
}
