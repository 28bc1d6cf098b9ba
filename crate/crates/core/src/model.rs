use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Tolerance on `|Σw - 1|` accepted by validation.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    /// Larger scores are better.
    Benefit,
    /// Smaller scores are better.
    Cost,
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::Benefit => "benefit",
            CriterionKind::Cost => "cost",
        })
    }
}

impl FromStr for CriterionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "benefit" => Ok(CriterionKind::Benefit),
            "cost" => Ok(CriterionKind::Cost),
            other => Err(format!("expected `benefit` or `cost`, found `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub kind: CriterionKind,
    pub weight: f64,
}

impl Criterion {
    pub fn new(name: impl Into<String>, kind: CriterionKind, weight: f64) -> Self {
        Criterion {
            name: name.into(),
            kind,
            weight,
        }
    }

    pub fn benefit(name: impl Into<String>, weight: f64) -> Self {
        Criterion::new(name, CriterionKind::Benefit, weight)
    }

    pub fn cost(name: impl Into<String>, weight: f64) -> Self {
        Criterion::new(name, CriterionKind::Cost, weight)
    }
}

/// Raw decision problem as supplied by a caller. Nothing is checked here;
/// see [`crate::validate_problem`].
///
/// `scores[i][j]` is the score of alternative `i` against criterion `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    pub alternatives: Vec<String>,
    pub criteria: Vec<Criterion>,
    pub scores: Vec<Vec<f64>>,
}

impl DecisionProblem {
    pub fn new(alternatives: Vec<String>, criteria: Vec<Criterion>, scores: Vec<Vec<f64>>) -> Self {
        DecisionProblem {
            alternatives,
            criteria,
            scores,
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        self.criteria.iter().map(|c| c.weight).collect()
    }

    pub fn criterion_index(&self, name: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c.name == name)
    }

    pub fn alternative_index(&self, name: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a == name)
    }

    /// Copy of the problem with weights replaced. Panics if the length differs.
    pub fn with_weights(&self, weights: &[f64]) -> DecisionProblem {
        assert_eq!(weights.len(), self.criteria.len(), "weight vector length");
        let mut out = self.clone();
        for (c, &w) in out.criteria.iter_mut().zip(weights) {
            c.weight = w;
        }
        out
    }
}

/// Dense row-major matrix of reals. Serialized as an array of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from rows; `None` if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn column_norm(&self, col: usize) -> f64 {
        self.column(col).map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Matrix::from_rows(&rows).ok_or_else(|| serde::de::Error::custom("ragged matrix rows"))
    }
}

/// Column-wise vector-normalized scores; every column has unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedMatrix(pub(crate) Matrix);

impl NormalizedMatrix {
    pub fn values(&self) -> &Matrix {
        &self.0
    }
}

/// Normalized scores multiplied by criterion weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightedMatrix(pub(crate) Matrix);

impl WeightedMatrix {
    pub fn values(&self) -> &Matrix {
        &self.0
    }
}

/// Which direction counts as "best" when picking ideal points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealMode {
    /// Benefit criteria take the column maximum as ideal, cost criteria the minimum.
    #[default]
    HonorKinds,
    /// Every criterion is treated as benefit. Reproduces the published
    /// case-study ideals, which ignore the declared cost attribute.
    AllBenefit,
}

impl fmt::Display for IdealMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealMode::HonorKinds => "honor-kinds",
            IdealMode::AllBenefit => "all-benefit",
        })
    }
}

impl FromStr for IdealMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "honor-kinds" => Ok(IdealMode::HonorKinds),
            "all-benefit" => Ok(IdealMode::AllBenefit),
            other => Err(format!(
                "unknown ideal mode `{other}` (expected honor-kinds or all-benefit)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distance {
    /// Square root of the summed squared differences.
    #[default]
    Euclidean,
    /// Summed squared differences without the root.
    Squared,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distance::Euclidean => "euclidean",
            Distance::Squared => "squared",
        })
    }
}

impl FromStr for Distance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Distance::Euclidean),
            "squared" => Ok(Distance::Squared),
            other => Err(format!(
                "unknown distance `{other}` (expected euclidean or squared)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealSolutions {
    pub pis: Vec<f64>,
    pub nis: Vec<f64>,
    pub mode: IdealMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationMeasures {
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub distance: Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalOptions {
    pub ideal_mode: IdealMode,
    pub distance: Distance,
    /// Rescale weights to sum to 1 instead of rejecting the problem.
    pub auto_normalize_weights: bool,
}

impl EvalOptions {
    pub fn new(ideal_mode: IdealMode, distance: Distance) -> Self {
        EvalOptions {
            ideal_mode,
            distance,
            auto_normalize_weights: false,
        }
    }
}

/// Result of a full evaluation with every intermediate table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub alternatives: Vec<String>,
    pub criteria: Vec<Criterion>,
    pub scores: Matrix,
    pub normalized: NormalizedMatrix,
    pub weighted: WeightedMatrix,
    pub ideals: IdealSolutions,
    pub separations: SeparationMeasures,
    pub closeness: Vec<f64>,
    /// `ranks[i]` is the 1-based rank of alternative `i`.
    pub ranks: Vec<usize>,
    pub options: EvalOptions,
    /// True when auto-normalization changed the supplied weights.
    pub weights_rescaled: bool,
}

impl RankingReport {
    /// Alternative indices from best to worst.
    pub fn order(&self) -> Vec<usize> {
        order_from_ranks(&self.ranks)
    }

    pub fn ranked_names(&self) -> Vec<&str> {
        self.order()
            .into_iter()
            .map(|i| self.alternatives[i].as_str())
            .collect()
    }

    pub fn top(&self) -> usize {
        self.order()[0]
    }
}

pub(crate) fn order_from_ranks(ranks: &[usize]) -> Vec<usize> {
    let mut order = vec![0; ranks.len()];
    for (i, &r) in ranks.iter().enumerate() {
        order[r - 1] = i;
    }
    order
}
