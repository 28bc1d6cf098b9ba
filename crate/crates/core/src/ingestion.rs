//! Reading decision problems and respondent scoresheets.
//!
//! Two problem layouts are supported:
//!
//! * a JSON object with `criteria` (`{name, kind, weight}`), `alternatives`
//!   and row-major `scores`;
//! * a comma-separated table whose first three rows carry criterion names,
//!   kinds and weights, followed by one `name,score,...` row per alternative.
//!   The first cell of the three header rows is a label and is ignored.
//!
//! Scoresheets are comma-separated `respondent,alternative,criterion,score`
//! rows with integer scores on the 1..9 scale.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Violation, ViolationCode};
use crate::model::{Criterion, CriterionKind, DecisionProblem};

/// Lowest and highest score a respondent may give.
pub const SCORE_SCALE: (u8, u8) = (1, 9);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("line {line}: duplicate entry for respondent `{respondent}`, alternative `{alternative}`, criterion `{criterion}`")]
    DuplicateEntry {
        line: usize,
        respondent: String,
        alternative: String,
        criterion: String,
    },
    #[error("line {line}: score `{value}` is not an integer in 1..9")]
    ScoreRange { line: usize, value: String },
    #[error("respondent `{respondent}` has no score for alternative `{alternative}`, criterion `{criterion}`")]
    IncompleteSheet {
        respondent: String,
        alternative: String,
        criterion: String,
    },
    #[error("respondent `{respondent}` scores undeclared {what} `{name}`")]
    UnknownName {
        respondent: String,
        what: &'static str,
        name: String,
    },
    #[error("no scoresheets to aggregate")]
    NoSheets,
}

impl IngestError {
    pub fn code(&self) -> ViolationCode {
        match self {
            IngestError::Syntax { .. } => ViolationCode::SyntaxError,
            IngestError::Schema { .. } => ViolationCode::SchemaError,
            IngestError::DuplicateEntry { .. } => ViolationCode::DuplicateEntry,
            IngestError::ScoreRange { .. } => ViolationCode::ScoreRangeError,
            IngestError::IncompleteSheet { .. } | IngestError::NoSheets => {
                ViolationCode::IncompleteSheet
            }
            IngestError::UnknownName { .. } => ViolationCode::UnknownName,
        }
    }

    pub fn violation(&self) -> Violation {
        let path = match self {
            IngestError::Syntax { line, column, .. } => format!("line {line}, column {column}"),
            IngestError::Schema { path, .. } => path.clone(),
            IngestError::DuplicateEntry { line, .. } | IngestError::ScoreRange { line, .. } => {
                format!("line {line}")
            }
            _ => String::new(),
        };
        Violation::new(self.code(), path, self.to_string())
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        IngestError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        IngestError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemFormat {
    /// JSON object document.
    #[default]
    Object,
    /// Comma-separated table.
    Delimited,
}

impl ProblemFormat {
    /// Picks a format from the file extension, falling back to sniffing
    /// the first non-blank byte (`{` means object).
    pub fn detect(path: Option<&Path>, bytes: &[u8]) -> ProblemFormat {
        match path
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("json") => return ProblemFormat::Object,
            Some("csv") => return ProblemFormat::Delimited,
            _ => {}
        }
        match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b'{') => ProblemFormat::Object,
            Some(_) => ProblemFormat::Delimited,
            None => ProblemFormat::Object,
        }
    }
}

impl FromStr for ProblemFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "object" | "json" => Ok(ProblemFormat::Object),
            "delimited" | "csv" => Ok(ProblemFormat::Delimited),
            other => Err(format!("unknown problem format `{other}`")),
        }
    }
}

/// Serialized form of a [`DecisionProblem`]. `scores` and `alternatives`
/// may be omitted when the document only feeds scoresheet aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub criteria: Vec<Criterion>,
    #[serde(default)]
    pub alternatives: Vec<String>,
    #[serde(default)]
    pub scores: Vec<Vec<f64>>,
}

impl ProblemDocument {
    /// Checks that the score matrix matches the declared names.
    pub fn into_problem(self) -> Result<DecisionProblem, IngestError> {
        let m = self.criteria.len();
        if self.scores.len() != self.alternatives.len() {
            return Err(IngestError::schema(
                "scores",
                format!(
                    "{} score rows declared for {} alternatives",
                    self.scores.len(),
                    self.alternatives.len()
                ),
            ));
        }
        if let Some((i, row)) = self.scores.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(IngestError::schema(
                format!("scores[{i}]"),
                format!("{} score columns for {m} declared criteria", row.len()),
            ));
        }
        Ok(DecisionProblem::new(
            self.alternatives,
            self.criteria,
            self.scores,
        ))
    }
}

impl From<&DecisionProblem> for ProblemDocument {
    fn from(p: &DecisionProblem) -> Self {
        ProblemDocument {
            criteria: p.criteria.clone(),
            alternatives: p.alternatives.clone(),
            scores: p.scores.clone(),
        }
    }
}

fn decode(bytes: &[u8]) -> Result<&str, IngestError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = prefix.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        IngestError::syntax(line, column, "input is not valid UTF-8")
    })
}

/// Parses a document without checking that the score matrix matches the
/// declared names.
pub fn parse_document(bytes: &[u8], format: ProblemFormat) -> Result<ProblemDocument, IngestError> {
    let text = decode(bytes)?;
    match format {
        ProblemFormat::Object => parse_object(text),
        ProblemFormat::Delimited => parse_delimited(text),
    }
}

pub fn parse_problem(bytes: &[u8], format: ProblemFormat) -> Result<DecisionProblem, IngestError> {
    parse_document(bytes, format)?.into_problem()
}

fn parse_object(text: &str) -> Result<ProblemDocument, IngestError> {
    use serde_json::error::Category;
    serde_json::from_str(text).map_err(|e| match e.classify() {
        Category::Data => IngestError::schema(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        ),
        _ => IngestError::syntax(e.line(), e.column(), e.to_string()),
    })
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    IngestError::syntax(line, 1, e.to_string())
}

fn parse_delimited(text: &str) -> Result<ProblemDocument, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let records = reader
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(csv_error)?;
    if records.is_empty() {
        return Err(IngestError::syntax(1, 1, "empty input"));
    }
    if records.len() < 3 {
        return Err(IngestError::schema(
            "header",
            "expected criterion-name, kind and weight rows",
        ));
    }

    let names: Vec<String> = records[0].iter().skip(1).map(str::to_owned).collect();
    let m = names.len();
    let header_row = |idx: usize, what: &str| {
        let rec = &records[idx];
        if rec.len() != m + 1 {
            return Err(IngestError::schema(
                format!("row {}", idx + 1),
                format!("{} {what} for {m} criteria", rec.len().saturating_sub(1)),
            ));
        }
        Ok(rec.iter().skip(1).collect::<Vec<_>>())
    };
    let kinds = header_row(1, "kinds")?;
    let weights = header_row(2, "weights")?;

    let mut criteria = Vec::with_capacity(m);
    for (j, name) in names.into_iter().enumerate() {
        let kind = CriterionKind::from_str(kinds[j])
            .map_err(|e| IngestError::schema(format!("criteria[{j}].kind"), e))?;
        let weight = weights[j].parse::<f64>().map_err(|_| {
            IngestError::schema(
                format!("criteria[{j}].weight"),
                format!("`{}` is not a number", weights[j]),
            )
        })?;
        criteria.push(Criterion { name, kind, weight });
    }

    let mut alternatives = Vec::new();
    let mut scores = Vec::new();
    for (i, rec) in records[3..].iter().enumerate() {
        let mut cells = rec.iter();
        alternatives.push(cells.next().unwrap_or_default().to_owned());
        let row = cells
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    IngestError::schema(
                        format!("scores[{i}][{j}]"),
                        format!("`{cell}` is not a number"),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        scores.push(row);
    }

    Ok(ProblemDocument {
        criteria,
        alternatives,
        scores,
    })
}

pub fn serialize_problem(problem: &DecisionProblem, format: ProblemFormat) -> String {
    match format {
        ProblemFormat::Object => {
            let mut out = serde_json::to_string_pretty(&ProblemDocument::from(problem))
                .expect("problem documents always serialize");
            out.push('\n');
            out
        }
        ProblemFormat::Delimited => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let row = |label: &str, cells: Vec<String>| {
                std::iter::once(label.to_owned())
                    .chain(cells)
                    .collect::<Vec<_>>()
            };
            let crit = &problem.criteria;
            let rows = [
                row("criterion", crit.iter().map(|c| c.name.clone()).collect()),
                row("kind", crit.iter().map(|c| c.kind.to_string()).collect()),
                row(
                    "weight",
                    crit.iter().map(|c| c.weight.to_string()).collect(),
                ),
            ];
            for r in rows.iter() {
                w.write_record(r).expect("in-memory write");
            }
            for (name, scores) in problem.alternatives.iter().zip(&problem.scores) {
                w.write_record(row(name, scores.iter().map(f64::to_string).collect()))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub alternative: String,
    pub criterion: String,
    pub score: u8,
}

/// One respondent's scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scoresheet {
    pub respondent: String,
    pub entries: Vec<ScoreEntry>,
}

const SCORESHEET_HEADER: [&str; 4] = ["respondent", "alternative", "criterion", "score"];

pub fn parse_scoresheets(bytes: &[u8]) -> Result<Vec<Scoresheet>, IngestError> {
    let text = decode(bytes)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(SCORESHEET_HEADER) {
        return Err(IngestError::syntax(
            1,
            1,
            format!("expected header `{}`", SCORESHEET_HEADER.join(",")),
        ));
    }

    let mut sheets: Vec<Scoresheet> = Vec::new();
    let mut sheet_index: HashMap<String, usize> = HashMap::new();
    let mut seen: HashMap<(String, String, String), usize> = HashMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let (respondent, alternative, criterion, raw) = (&rec[0], &rec[1], &rec[2], &rec[3]);
        let score = raw
            .parse::<u8>()
            .ok()
            .filter(|s| (SCORE_SCALE.0..=SCORE_SCALE.1).contains(s))
            .ok_or_else(|| IngestError::ScoreRange {
                line,
                value: raw.to_owned(),
            })?;
        let key = (
            respondent.to_owned(),
            alternative.to_owned(),
            criterion.to_owned(),
        );
        if seen.insert(key, line).is_some() {
            return Err(IngestError::DuplicateEntry {
                line,
                respondent: respondent.to_owned(),
                alternative: alternative.to_owned(),
                criterion: criterion.to_owned(),
            });
        }
        let idx = *sheet_index.entry(respondent.to_owned()).or_insert_with(|| {
            sheets.push(Scoresheet {
                respondent: respondent.to_owned(),
                entries: Vec::new(),
            });
            sheets.len() - 1
        });
        sheets[idx].entries.push(ScoreEntry {
            alternative: alternative.to_owned(),
            criterion: criterion.to_owned(),
            score,
        });
    }
    Ok(sheets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationMethod {
    #[default]
    ArithmeticMean,
    Median,
}

impl fmt::Display for AggregationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregationMethod::ArithmeticMean => "arithmetic-mean",
            AggregationMethod::Median => "median",
        })
    }
}

impl FromStr for AggregationMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" | "arithmetic-mean" => Ok(AggregationMethod::ArithmeticMean),
            "median" => Ok(AggregationMethod::Median),
            other => Err(format!("unknown aggregation method `{other}`")),
        }
    }
}

impl AggregationMethod {
    /// `values` must be sorted and non-empty.
    fn reduce(self, values: &[f64]) -> f64 {
        let k = values.len();
        match self {
            AggregationMethod::ArithmeticMean => values.iter().sum::<f64>() / k as f64,
            AggregationMethod::Median if k % 2 == 1 => values[k / 2],
            AggregationMethod::Median => (values[k / 2 - 1] + values[k / 2]) / 2.0,
        }
    }
}

/// Combines respondent sheets into one decision matrix, cell by cell.
/// Rows follow `alternatives`, columns follow `criteria`.
pub fn aggregate(
    sheets: &[Scoresheet],
    method: AggregationMethod,
    criteria: &[Criterion],
    alternatives: &[String],
) -> Result<DecisionProblem, IngestError> {
    if sheets.is_empty() {
        return Err(IngestError::NoSheets);
    }
    let alt_idx: HashMap<&str, usize> = alternatives
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let crit_idx: HashMap<&str, usize> = criteria
        .iter()
        .enumerate()
        .map(|(j, c)| (c.name.as_str(), j))
        .collect();
    let (n, m) = (alternatives.len(), criteria.len());

    let mut cells: Vec<Vec<f64>> = vec![Vec::with_capacity(sheets.len()); n * m];
    for sheet in sheets {
        let mut filled = vec![false; n * m];
        for e in &sheet.entries {
            let unknown = |what, name: &str| IngestError::UnknownName {
                respondent: sheet.respondent.clone(),
                what,
                name: name.to_owned(),
            };
            let i = *alt_idx
                .get(e.alternative.as_str())
                .ok_or_else(|| unknown("alternative", &e.alternative))?;
            let j = *crit_idx
                .get(e.criterion.as_str())
                .ok_or_else(|| unknown("criterion", &e.criterion))?;
            if !filled[i * m + j] {
                filled[i * m + j] = true;
                cells[i * m + j].push(f64::from(e.score));
            }
        }
        if let Some(missing) = filled.iter().position(|f| !f) {
            return Err(IngestError::IncompleteSheet {
                respondent: sheet.respondent.clone(),
                alternative: alternatives[missing / m].clone(),
                criterion: criteria[missing % m].name.clone(),
            });
        }
    }

    let scores = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let values = &mut cells[i * m + j];
                    values.sort_by(f64::total_cmp);
                    method.reduce(values)
                })
                .collect()
        })
        .collect();
    Ok(DecisionProblem::new(
        alternatives.to_vec(),
        criteria.to_vec(),
        scores,
    ))
}

/// Alternative names in order of first appearance across the sheets.
pub fn alternatives_in_sheets(sheets: &[Scoresheet]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for e in sheets.iter().flat_map(|s| &s.entries) {
        if !out.contains(&e.alternative) {
            out.push(e.alternative.clone());
        }
    }
    out
}
