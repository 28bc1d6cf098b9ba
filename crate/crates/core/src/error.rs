use std::fmt;

use serde::{Deserialize, Serialize};

/// Machine-readable category of a single problem found in an input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationCode {
    EmptyProblem,
    DimensionMismatch,
    NonPositiveScore,
    ScoreOutOfScale,
    ZeroColumn,
    InvalidWeight,
    WeightSumViolation,
    DuplicateName,
    DegenerateProblem,
    UnknownName,
    InvalidArgument,
    SyntaxError,
    SchemaError,
    DuplicateEntry,
    ScoreRangeError,
    IncompleteSheet,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::EmptyProblem => "EmptyProblem",
            ViolationCode::DimensionMismatch => "DimensionMismatch",
            ViolationCode::NonPositiveScore => "NonPositiveScore",
            ViolationCode::ScoreOutOfScale => "ScoreOutOfScale",
            ViolationCode::ZeroColumn => "ZeroColumn",
            ViolationCode::InvalidWeight => "InvalidWeight",
            ViolationCode::WeightSumViolation => "WeightSumViolation",
            ViolationCode::DuplicateName => "DuplicateName",
            ViolationCode::DegenerateProblem => "DegenerateProblem",
            ViolationCode::UnknownName => "UnknownName",
            ViolationCode::InvalidArgument => "InvalidArgument",
            ViolationCode::SyntaxError => "SyntaxError",
            ViolationCode::SchemaError => "SchemaError",
            ViolationCode::DuplicateEntry => "DuplicateEntry",
            ViolationCode::ScoreRangeError => "ScoreRangeError",
            ViolationCode::IncompleteSheet => "IncompleteSheet",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One located problem. `path` uses a JSON-pointer-like dotted form,
/// e.g. `scores[2][3]` or `criteria[1].weight`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            code,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}: {}", self.code, self.message)
        } else {
            write!(f, "{} at {}: {}", self.code, self.path, self.message)
        }
    }
}

/// Every violation found while validating a decision problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid problem")?;
        for (i, v) in self.violations.iter().enumerate() {
            f.write_str(if i == 0 { ": " } else { "; " })?;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TopsisError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Every listed alternative sits on both ideals at once, so its
    /// closeness is 0/0.
    #[error("degenerate problem: positive and negative ideal coincide for alternatives {alternatives:?}")]
    Degenerate { alternatives: Vec<usize> },
    #[error("unknown criterion `{0}`")]
    UnknownName(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl TopsisError {
    /// Flattens the error into the violation list used by the service
    /// and CLI diagnostics.
    pub fn violations(&self) -> Vec<Violation> {
        match self {
            TopsisError::Invalid(e) => e.violations.clone(),
            TopsisError::DimensionMismatch(msg) => {
                vec![Violation::new(
                    ViolationCode::DimensionMismatch,
                    "",
                    msg.clone(),
                )]
            }
            TopsisError::Degenerate { .. } => vec![Violation::new(
                ViolationCode::DegenerateProblem,
                "",
                self.to_string(),
            )],
            TopsisError::UnknownName(name) => vec![Violation::new(
                ViolationCode::UnknownName,
                "criterion",
                format!("no criterion named `{name}`"),
            )],
            TopsisError::InvalidArgument(msg) => {
                vec![Violation::new(
                    ViolationCode::InvalidArgument,
                    "",
                    msg.clone(),
                )]
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, TopsisError::Degenerate { .. })
    }
}
