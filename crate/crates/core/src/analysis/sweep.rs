use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::TopsisError;
use crate::model::{order_from_ranks, DecisionProblem, EvalOptions, RankingReport};
use crate::topsis::{evaluate, evaluate_validated, validate_problem_with, ValidationPolicy};

/// Sets criterion `index` to `weight` and scales the others by
/// `(1 - weight) / (1 - old)` so the vector still sums to 1. When the
/// others are all zero the remainder is shared equally.
pub fn rescale_weights(base: &[f64], index: usize, weight: f64) -> Vec<f64> {
    let rest: f64 = base
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(_, w)| w)
        .sum();
    let others = base.len() - 1;
    let proportional = rest > 0.0 && base[index] < 1.0;
    base.iter()
        .enumerate()
        .map(|(j, &w)| {
            if j == index {
                weight
            } else if proportional {
                w * ((1.0 - weight) / (1.0 - base[index]))
            } else {
                (1.0 - weight) / others as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Weight of the swept criterion.
    pub weight: f64,
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closeness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<usize>>,
    /// Set when the grid point could not be ranked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn top(&self) -> Option<usize> {
        self.ranks.as_ref().map(|r| order_from_ranks(r)[0])
    }
}

/// The top-ranked alternative changes somewhere in `(from_weight, to_weight]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub from_weight: f64,
    pub to_weight: f64,
    pub from_top: String,
    pub to_top: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub criterion: String,
    pub alternatives: Vec<String>,
    pub options: EvalOptions,
    pub points: Vec<SweepPoint>,
    pub crossovers: Vec<Crossover>,
}

/// Re-ranks the problem on an evenly spaced grid of `steps` weights in
/// [0, 1] for one criterion.
pub fn weight_sweep(
    problem: &DecisionProblem,
    criterion: &str,
    steps: usize,
    options: &EvalOptions,
) -> Result<SweepResult, TopsisError> {
    let index = problem
        .criterion_index(criterion)
        .ok_or_else(|| TopsisError::UnknownName(criterion.to_owned()))?;
    if steps < 2 {
        return Err(TopsisError::InvalidArgument(format!(
            "a sweep needs at least 2 steps, got {steps}"
        )));
    }
    let policy = ValidationPolicy {
        auto_normalize_weights: options.auto_normalize_weights,
        score_range: None,
    };
    let base = validate_problem_with(problem.clone(), &policy)?.into_problem();
    let base_weights = base.weights();
    // Grid points carry exact weight vectors; never rescale them again.
    let point_options = EvalOptions {
        auto_normalize_weights: false,
        ..*options
    };

    let points: Vec<SweepPoint> = (0..steps)
        .into_par_iter()
        .map(|k| {
            let weight = k as f64 / (steps - 1) as f64;
            let weights = rescale_weights(&base_weights, index, weight);
            match evaluate(&base.with_weights(&weights), &point_options) {
                Ok(report) => SweepPoint {
                    weight,
                    weights,
                    closeness: Some(report.closeness),
                    ranks: Some(report.ranks),
                    error: None,
                },
                Err(e) => SweepPoint {
                    weight,
                    weights,
                    closeness: None,
                    ranks: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let ranked: Vec<(&SweepPoint, usize)> = points
        .iter()
        .filter_map(|p| p.top().map(|t| (p, t)))
        .collect();
    let crossovers = ranked
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| Crossover {
            from_weight: w[0].0.weight,
            to_weight: w[1].0.weight,
            from_top: base.alternatives[w[0].1].clone(),
            to_top: base.alternatives[w[1].1].clone(),
        })
        .collect();

    Ok(SweepResult {
        criterion: criterion.to_owned(),
        alternatives: base.alternatives.clone(),
        options: *options,
        points,
        crossovers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedCriterion {
    pub criterion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<RankingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Re-ranks once per criterion with that criterion removed and the rest
/// of the weights rescaled proportionally.
pub fn leave_one_out(
    problem: &DecisionProblem,
    options: &EvalOptions,
) -> Result<Vec<DroppedCriterion>, TopsisError> {
    if problem.criteria.len() < 2 {
        return Err(TopsisError::InvalidArgument(
            "leave-one-out needs at least 2 criteria".into(),
        ));
    }
    let policy = ValidationPolicy {
        auto_normalize_weights: options.auto_normalize_weights,
        score_range: None,
    };
    let base = validate_problem_with(problem.clone(), &policy)?.into_problem();

    Ok((0..base.criteria.len())
        .into_par_iter()
        .map(|drop| {
            let mut reduced = base.clone();
            let removed = reduced.criteria.remove(drop);
            for row in &mut reduced.scores {
                row.remove(drop);
            }
            let rest: f64 = reduced.criteria.iter().map(|c| c.weight).sum();
            let outcome = if rest > 0.0 {
                for c in &mut reduced.criteria {
                    c.weight /= rest;
                }
                validate_problem_with(reduced, &ValidationPolicy::default())
                    .map_err(TopsisError::from)
                    .and_then(|v| evaluate_validated(&v, options))
            } else {
                Err(TopsisError::InvalidArgument(format!(
                    "remaining weights sum to zero without `{}`",
                    removed.name
                )))
            };
            match outcome {
                Ok(report) => DroppedCriterion {
                    criterion: removed.name,
                    report: Some(report),
                    error: None,
                },
                Err(e) => DroppedCriterion {
                    criterion: removed.name,
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}
