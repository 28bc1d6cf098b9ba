//! The seven-step TOPSIS pipeline.
//!
//! Each step is a pure function so callers can stop at any intermediate.
//! [`evaluate`] chains them and keeps every intermediate in the report.

use std::collections::HashSet;

use crate::error::{TopsisError, ValidationError, Violation, ViolationCode};
use crate::model::{
    Criterion, CriterionKind, DecisionProblem, Distance, EvalOptions, IdealMode, IdealSolutions,
    Matrix, NormalizedMatrix, RankingReport, SeparationMeasures, WeightedMatrix,
    WEIGHT_SUM_TOLERANCE,
};

/// Extra validation knobs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidationPolicy {
    /// Rescale weights whose sum is positive but not 1.
    pub auto_normalize_weights: bool,
    /// Inclusive bounds every score must fall in, e.g. `(1.0, 9.0)` for
    /// scoresheet-derived problems.
    pub score_range: Option<(f64, f64)>,
}

/// A problem that passed validation. Only constructible through
/// [`validate_problem`] / [`validate_problem_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedProblem {
    problem: DecisionProblem,
    scores: Matrix,
    weights_rescaled: bool,
}

impl ValidatedProblem {
    pub fn problem(&self) -> &DecisionProblem {
        &self.problem
    }

    pub fn scores(&self) -> &Matrix {
        &self.scores
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.problem.criteria
    }

    pub fn alternatives(&self) -> &[String] {
        &self.problem.alternatives
    }

    pub fn weights_rescaled(&self) -> bool {
        self.weights_rescaled
    }

    pub fn into_problem(self) -> DecisionProblem {
        self.problem
    }
}

pub fn validate_problem(problem: DecisionProblem) -> Result<ValidatedProblem, ValidationError> {
    validate_problem_with(problem, &ValidationPolicy::default())
}

pub fn validate_problem_with(
    mut problem: DecisionProblem,
    policy: &ValidationPolicy,
) -> Result<ValidatedProblem, ValidationError> {
    let mut violations = Vec::new();

    if problem.alternatives.is_empty() {
        violations.push(Violation::new(
            ViolationCode::EmptyProblem,
            "alternatives",
            "at least one alternative is required",
        ));
    }
    if problem.criteria.is_empty() {
        violations.push(Violation::new(
            ViolationCode::EmptyProblem,
            "criteria",
            "at least one criterion is required",
        ));
    }
    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }

    duplicate_names(
        problem.alternatives.iter().map(String::as_str),
        "alternatives",
        &mut violations,
    );
    duplicate_names(
        problem.criteria.iter().map(|c| c.name.as_str()),
        "criteria",
        &mut violations,
    );

    let n = problem.alternatives.len();
    let m = problem.criteria.len();
    let mut shape_ok = true;
    if problem.scores.len() != n {
        shape_ok = false;
        violations.push(Violation::new(
            ViolationCode::DimensionMismatch,
            "scores",
            format!("{} score rows for {n} alternatives", problem.scores.len()),
        ));
    }
    for (i, row) in problem.scores.iter().enumerate() {
        if row.len() != m {
            shape_ok = false;
            violations.push(Violation::new(
                ViolationCode::DimensionMismatch,
                format!("scores[{i}]"),
                format!("{} scores for {m} criteria", row.len()),
            ));
        }
    }

    if shape_ok {
        for (i, row) in problem.scores.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                if !(s.is_finite() && s > 0.0) {
                    violations.push(Violation::new(
                        ViolationCode::NonPositiveScore,
                        format!("scores[{i}][{j}]"),
                        format!("score must be a positive finite number, found {s}"),
                    ));
                } else if let Some((lo, hi)) = policy.score_range {
                    if s < lo || s > hi {
                        violations.push(Violation::new(
                            ViolationCode::ScoreOutOfScale,
                            format!("scores[{i}][{j}]"),
                            format!("score {s} outside the {lo}..{hi} scale"),
                        ));
                    }
                }
            }
        }
        for (j, c) in problem.criteria.iter().enumerate() {
            if problem.scores.iter().all(|row| row[j] == 0.0) {
                violations.push(Violation::new(
                    ViolationCode::ZeroColumn,
                    format!("scores[*][{j}]"),
                    format!("every score for criterion `{}` is zero", c.name),
                ));
            }
        }
    }

    let mut weights_ok = true;
    for (j, c) in problem.criteria.iter().enumerate() {
        if !(c.weight.is_finite() && (0.0..=1.0).contains(&c.weight))
            && !(policy.auto_normalize_weights && c.weight.is_finite() && c.weight >= 0.0)
        {
            weights_ok = false;
            violations.push(Violation::new(
                ViolationCode::InvalidWeight,
                format!("criteria[{j}].weight"),
                format!("weight must lie in [0, 1], found {}", c.weight),
            ));
        }
    }
    let mut weights_rescaled = false;
    if weights_ok {
        let sum: f64 = problem.criteria.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            if policy.auto_normalize_weights && sum > 0.0 {
                for c in &mut problem.criteria {
                    c.weight /= sum;
                }
                weights_rescaled = true;
            } else {
                violations.push(Violation::new(
                    ViolationCode::WeightSumViolation,
                    "criteria",
                    format!("weights sum to {sum}, expected 1 ± {WEIGHT_SUM_TOLERANCE}"),
                ));
            }
        }
    }

    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }
    let scores = Matrix::from_rows(&problem.scores).expect("shape checked above");
    Ok(ValidatedProblem {
        problem,
        scores,
        weights_rescaled,
    })
}

fn duplicate_names<'a>(
    names: impl Iterator<Item = &'a str>,
    field: &str,
    violations: &mut Vec<Violation>,
) {
    let mut seen = HashSet::new();
    for (i, name) in names.enumerate() {
        if !seen.insert(name) {
            violations.push(Violation::new(
                ViolationCode::DuplicateName,
                format!("{field}[{i}]"),
                format!("name `{name}` appears more than once"),
            ));
        }
    }
}

/// Divides each score by the Euclidean norm of its column (the sum runs
/// over alternatives).
pub fn normalize(problem: &ValidatedProblem) -> NormalizedMatrix {
    let scores = problem.scores();
    let mut out = Matrix::zeros(scores.rows(), scores.cols());
    for j in 0..scores.cols() {
        let norm = scores.column_norm(j);
        for i in 0..scores.rows() {
            out.set(i, j, scores.get(i, j) / norm);
        }
    }
    NormalizedMatrix(out)
}

pub fn apply_weights(
    normalized: &NormalizedMatrix,
    criteria: &[Criterion],
) -> Result<WeightedMatrix, TopsisError> {
    let r = normalized.values();
    if r.cols() != criteria.len() {
        return Err(TopsisError::DimensionMismatch(format!(
            "{} normalized columns for {} criteria",
            r.cols(),
            criteria.len()
        )));
    }
    let mut out = r.clone();
    for i in 0..r.rows() {
        for (j, c) in criteria.iter().enumerate() {
            out.set(i, j, r.get(i, j) * c.weight);
        }
    }
    Ok(WeightedMatrix(out))
}

pub fn ideal_solutions(
    weighted: &WeightedMatrix,
    criteria: &[Criterion],
    mode: IdealMode,
) -> IdealSolutions {
    let v = weighted.values();
    let mut pis = Vec::with_capacity(v.cols());
    let mut nis = Vec::with_capacity(v.cols());
    for j in 0..v.cols() {
        let max = v.column(j).fold(f64::NEG_INFINITY, f64::max);
        let min = v.column(j).fold(f64::INFINITY, f64::min);
        let cost = mode == IdealMode::HonorKinds
            && criteria.get(j).map(|c| c.kind) == Some(CriterionKind::Cost);
        if cost {
            pis.push(min);
            nis.push(max);
        } else {
            pis.push(max);
            nis.push(min);
        }
    }
    IdealSolutions { pis, nis, mode }
}

pub fn separations(
    weighted: &WeightedMatrix,
    ideals: &IdealSolutions,
    distance: Distance,
) -> Result<SeparationMeasures, TopsisError> {
    let v = weighted.values();
    if ideals.pis.len() != v.cols() || ideals.nis.len() != v.cols() {
        return Err(TopsisError::DimensionMismatch(format!(
            "ideal vectors of length {}/{} for {} criteria",
            ideals.pis.len(),
            ideals.nis.len(),
            v.cols()
        )));
    }
    let dist = |row: &[f64], target: &[f64]| {
        let sq: f64 = row.iter().zip(target).map(|(x, t)| (x - t) * (x - t)).sum();
        match distance {
            Distance::Euclidean => sq.sqrt(),
            Distance::Squared => sq,
        }
    };
    let (s_plus, s_minus) = (0..v.rows())
        .map(|i| (dist(v.row(i), &ideals.pis), dist(v.row(i), &ideals.nis)))
        .unzip();
    Ok(SeparationMeasures {
        s_plus,
        s_minus,
        distance,
    })
}

/// `C_i = S⁻ / (S⁺ + S⁻)`. Fails when any alternative has both separations
/// equal to zero.
pub fn closeness(sep: &SeparationMeasures) -> Result<Vec<f64>, TopsisError> {
    let degenerate: Vec<usize> = sep
        .s_plus
        .iter()
        .zip(&sep.s_minus)
        .enumerate()
        .filter(|(_, (p, m))| *p + *m == 0.0)
        .map(|(i, _)| i)
        .collect();
    if !degenerate.is_empty() {
        return Err(TopsisError::Degenerate {
            alternatives: degenerate,
        });
    }
    Ok(sep
        .s_plus
        .iter()
        .zip(&sep.s_minus)
        .map(|(p, m)| m / (p + m))
        .collect())
}

/// 1-based ranks, highest closeness first; ties keep input order.
pub fn rank(closeness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..closeness.len()).collect();
    order.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]));
    let mut ranks = vec![0; closeness.len()];
    for (pos, i) in order.into_iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

pub fn evaluate(
    problem: &DecisionProblem,
    options: &EvalOptions,
) -> Result<RankingReport, TopsisError> {
    let policy = ValidationPolicy {
        auto_normalize_weights: options.auto_normalize_weights,
        score_range: None,
    };
    let validated = validate_problem_with(problem.clone(), &policy)?;
    evaluate_validated(&validated, options)
}

pub fn evaluate_validated(
    validated: &ValidatedProblem,
    options: &EvalOptions,
) -> Result<RankingReport, TopsisError> {
    let normalized = normalize(validated);
    let weighted = apply_weights(&normalized, validated.criteria())?;
    let ideals = ideal_solutions(&weighted, validated.criteria(), options.ideal_mode);
    let separations = separations(&weighted, &ideals, options.distance)?;
    let closeness = closeness(&separations)?;
    let ranks = rank(&closeness);
    Ok(RankingReport {
        alternatives: validated.alternatives().to_vec(),
        criteria: validated.criteria().to_vec(),
        scores: validated.scores().clone(),
        normalized,
        weighted,
        ideals,
        separations,
        closeness,
        ranks,
        options: *options,
        weights_rescaled: validated.weights_rescaled(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(scores: Vec<Vec<f64>>, criteria: Vec<Criterion>) -> DecisionProblem {
        let alternatives = (1..=scores.len()).map(|i| format!("A{i}")).collect();
        DecisionProblem::new(alternatives, criteria, scores)
    }

    fn paper() -> DecisionProblem {
        crate::fixtures::paper_case()
    }

    #[test]
    fn paper_case_is_valid() {
        let v = validate_problem(paper()).unwrap();
        assert_eq!(v.alternatives().len(), 6);
        assert_eq!(v.problem().weights(), vec![0.5, 0.1, 0.3, 0.1]);
        assert!(!v.weights_rescaled());
    }

    #[test]
    fn weight_sum_two_is_rejected() {
        let mut p = paper();
        for c in &mut p.criteria {
            c.weight = 0.5;
        }
        let err = validate_problem(p).unwrap_err();
        assert!(err.has(ViolationCode::WeightSumViolation));
    }

    #[test]
    fn auto_normalize_rescales_and_records() {
        let mut p = paper();
        for c in &mut p.criteria {
            c.weight *= 2.0;
        }
        let policy = ValidationPolicy {
            auto_normalize_weights: true,
            ..Default::default()
        };
        let v = validate_problem_with(p, &policy).unwrap();
        assert!(v.weights_rescaled());
        let sum: f64 = v.problem().weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_column_is_reported() {
        let p = problem(
            vec![vec![1.0, 0.0], vec![2.0, 0.0]],
            vec![Criterion::benefit("x", 0.5), Criterion::benefit("y", 0.5)],
        );
        let err = validate_problem(p).unwrap_err();
        assert!(err.has(ViolationCode::ZeroColumn));
        assert!(err.has(ViolationCode::NonPositiveScore));
    }

    #[test]
    fn empty_and_shape_errors() {
        let empty = DecisionProblem::new(vec![], vec![], vec![]);
        let err = validate_problem(empty).unwrap_err();
        assert_eq!(err.violations.len(), 2);
        assert!(err.has(ViolationCode::EmptyProblem));

        let ragged = problem(
            vec![vec![1.0, 2.0], vec![3.0]],
            vec![Criterion::benefit("x", 0.5), Criterion::benefit("y", 0.5)],
        );
        let err = validate_problem(ragged).unwrap_err();
        assert_eq!(err.violations[0].code, ViolationCode::DimensionMismatch);
        assert_eq!(err.violations[0].path, "scores[1]");
    }

    #[test]
    fn duplicate_names_and_bad_weights() {
        let p = DecisionProblem::new(
            vec!["a".into(), "a".into()],
            vec![Criterion::benefit("x", -0.5), Criterion::cost("x", 1.5)],
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
        );
        let err = validate_problem(p).unwrap_err();
        let dupes = err
            .violations
            .iter()
            .filter(|v| v.code == ViolationCode::DuplicateName)
            .count();
        assert_eq!(dupes, 2);
        assert!(err.has(ViolationCode::InvalidWeight));
    }

    #[test]
    fn score_range_policy() {
        let p = problem(
            vec![vec![10.0], vec![3.0]],
            vec![Criterion::benefit("x", 1.0)],
        );
        let policy = ValidationPolicy {
            score_range: Some((1.0, 9.0)),
            ..Default::default()
        };
        let err = validate_problem_with(p, &policy).unwrap_err();
        assert_eq!(err.violations[0].code, ViolationCode::ScoreOutOfScale);
    }

    #[test]
    fn normalize_first_entry() {
        let v = validate_problem(paper()).unwrap();
        let r = normalize(&v);
        // 7 / sqrt(311)
        assert!((r.values().get(0, 0) - 0.396_933_583_986_619_9).abs() < 1e-12);
        assert!((r.values().get(0, 0) * 0.5 - 0.1985).abs() < 5e-5);
    }

    #[test]
    fn normalize_constant_and_single() {
        let p = problem(vec![vec![5.0]; 4], vec![Criterion::benefit("x", 1.0)]);
        let r = normalize(&validate_problem(p).unwrap());
        assert!(r.values().column(0).all(|x| x == 0.5));

        let p = problem(
            vec![vec![3.7, 42.0]],
            vec![Criterion::benefit("x", 0.5), Criterion::cost("y", 0.5)],
        );
        let r = normalize(&validate_problem(p).unwrap());
        assert_eq!(r.values().row(0), &[1.0, 1.0]);
    }

    #[test]
    fn zero_weight_zeroes_column() {
        let p = problem(
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            vec![Criterion::benefit("x", 1.0), Criterion::benefit("y", 0.0)],
        );
        let v = validate_problem(p).unwrap();
        let w = apply_weights(&normalize(&v), v.criteria()).unwrap();
        assert!(w.values().column(1).all(|x| x == 0.0));
    }

    #[test]
    fn apply_weights_checks_dimensions() {
        let v = validate_problem(paper()).unwrap();
        let err = apply_weights(&normalize(&v), &v.criteria()[..2]).unwrap_err();
        assert!(matches!(err, TopsisError::DimensionMismatch(_)));
    }

    #[test]
    fn ideals_single_alternative() {
        let p = problem(
            vec![vec![2.0, 3.0]],
            vec![Criterion::benefit("x", 0.5), Criterion::cost("y", 0.5)],
        );
        let v = validate_problem(p).unwrap();
        let w = apply_weights(&normalize(&v), v.criteria()).unwrap();
        for mode in [IdealMode::HonorKinds, IdealMode::AllBenefit] {
            let ideals = ideal_solutions(&w, v.criteria(), mode);
            assert_eq!(ideals.pis, ideals.nis);
            assert_eq!(ideals.pis, w.values().row(0));
        }
    }

    #[test]
    fn closeness_edges() {
        let sep = SeparationMeasures {
            s_plus: vec![0.0, 0.3],
            s_minus: vec![0.2, 0.0],
            distance: Distance::Euclidean,
        };
        assert_eq!(closeness(&sep).unwrap(), vec![1.0, 0.0]);

        let sep = SeparationMeasures {
            s_plus: vec![0.1, 0.0],
            s_minus: vec![0.1, 0.0],
            distance: Distance::Euclidean,
        };
        assert_eq!(
            closeness(&sep).unwrap_err(),
            TopsisError::Degenerate {
                alternatives: vec![1]
            }
        );
    }

    #[test]
    fn rank_ties_and_table_six() {
        let table6 = [0.4928, 0.8509, 0.2666, 0.7293, 0.2695, 0.4980];
        assert_eq!(rank(&table6), vec![4, 1, 6, 2, 5, 3]);
        assert_eq!(rank(&[0.3; 5]), vec![1, 2, 3, 4, 5]);
        assert_eq!(rank(&[0.7]), vec![1]);
        assert_eq!(rank(&[0.2, 0.9, 0.2, 0.9]), vec![3, 1, 4, 2]);
    }

    #[test]
    fn one_by_one_is_degenerate() {
        let p = problem(vec![vec![5.0]], vec![Criterion::benefit("x", 1.0)]);
        let err = evaluate(&p, &EvalOptions::default()).unwrap_err();
        assert!(err.is_degenerate());
    }

    #[test]
    fn separations_on_ideal_rows_are_zero() {
        let report = evaluate(
            &paper(),
            &EvalOptions::new(IdealMode::AllBenefit, Distance::Euclidean),
        )
        .unwrap();
        // A5 equals the negative ideal in every coordinate.
        assert_eq!(report.separations.s_minus[4], 0.0);
        assert_eq!(report.closeness[4], 0.0);
    }
}
