//! Random problem generator and the property checks run over it.

use idealrank_core::{
    evaluate, normalize, rank, validate_problem, Criterion, CriterionKind, DecisionProblem,
    Distance, EvalOptions, IdealMode,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::oracle::naive_topsis;

type Check = Result<(), TestCaseError>;

#[derive(Debug, Clone)]
pub struct Case {
    pub scores: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub benefit: Vec<bool>,
}

impl Case {
    pub fn problem(&self) -> DecisionProblem {
        let criteria = self
            .weights
            .iter()
            .zip(&self.benefit)
            .enumerate()
            .map(|(j, (&w, &b))| {
                let kind = if b {
                    CriterionKind::Benefit
                } else {
                    CriterionKind::Cost
                };
                Criterion::new(format!("c{j}"), kind, w)
            })
            .collect();
        let alternatives = (0..self.scores.len()).map(|i| format!("a{i}")).collect();
        DecisionProblem::new(alternatives, criteria, self.scores.clone())
    }
}

/// 2..=max_alts alternatives, 2..=max_crit criteria, integer scores 1..9
/// and positive weights summing to 1.
pub fn case(max_alts: usize, max_crit: usize) -> impl Strategy<Value = Case> {
    (2..=max_alts, 2..=max_crit).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(1u8..=9, m), n),
            prop::collection::vec(1u32..=100, m),
            prop::collection::vec(any::<bool>(), m),
        )
            .prop_map(|(scores, raw_w, benefit)| {
                let total: u32 = raw_w.iter().sum();
                Case {
                    scores: scores
                        .into_iter()
                        .map(|r| r.into_iter().map(f64::from).collect())
                        .collect(),
                    weights: raw_w
                        .iter()
                        .map(|&w| f64::from(w) / f64::from(total))
                        .collect(),
                    benefit,
                }
            })
    })
}

pub fn all_options() -> Vec<EvalOptions> {
    let mut out = Vec::new();
    for mode in [IdealMode::HonorKinds, IdealMode::AllBenefit] {
        for distance in [Distance::Euclidean, Distance::Squared] {
            out.push(EvalOptions::new(mode, distance));
        }
    }
    out
}

pub fn matches_naive_oracle(c: &Case) -> Check {
    for opts in all_options() {
        let naive = naive_topsis(
            &c.scores,
            &c.weights,
            &c.benefit,
            opts.ideal_mode == IdealMode::HonorKinds,
            opts.distance == Distance::Squared,
        );
        match (evaluate(&c.problem(), &opts), naive) {
            (Ok(report), Some(naive)) => {
                for (a, b) in report.closeness.iter().zip(&naive.closeness) {
                    prop_assert!((a - b).abs() <= 1e-9, "closeness {a} vs {b}");
                }
                prop_assert_eq!(&report.ranks, &naive.ranks);
            }
            (Err(e), None) => prop_assert!(e.is_degenerate()),
            (got, want) => prop_assert!(
                false,
                "engine {:?} vs oracle degenerate={}",
                got.map(|r| r.closeness),
                want.is_none()
            ),
        }
    }
    Ok(())
}

pub fn columns_have_unit_norm(c: &Case) -> Check {
    let v = validate_problem(c.problem()).unwrap();
    let r = normalize(&v);
    for j in 0..r.values().cols() {
        prop_assert!((r.values().column_norm(j) - 1.0).abs() <= 1e-9);
    }
    Ok(())
}

pub fn closeness_is_bounded(c: &Case) -> Check {
    for opts in all_options() {
        let Ok(report) = evaluate(&c.problem(), &opts) else {
            continue;
        };
        for i in 0..report.closeness.len() {
            let ci = report.closeness[i];
            prop_assert!((0.0..=1.0).contains(&ci));
            let row = report.weighted.values().row(i);
            if row == report.ideals.pis.as_slice() {
                prop_assert_eq!(ci, 1.0);
            }
            if row == report.ideals.nis.as_slice() {
                prop_assert_eq!(ci, 0.0);
            }
            if report.separations.s_plus[i] == 0.0 {
                prop_assert_eq!(ci, 1.0);
            }
            if report.separations.s_minus[i] == 0.0 {
                prop_assert_eq!(ci, 0.0);
            }
        }
    }
    Ok(())
}

pub fn column_scaling_is_invisible(c: &Case, j: usize, k: f64) -> Check {
    let mut scaled = c.clone();
    for row in &mut scaled.scores {
        row[j] *= k;
    }
    let a = normalize(&validate_problem(c.problem()).unwrap());
    let b = normalize(&validate_problem(scaled.problem()).unwrap());
    for i in 0..c.scores.len() {
        for jj in 0..c.weights.len() {
            prop_assert!((a.values().get(i, jj) - b.values().get(i, jj)).abs() <= 1e-12);
        }
    }
    for opts in all_options() {
        match (
            evaluate(&c.problem(), &opts),
            evaluate(&scaled.problem(), &opts),
        ) {
            (Ok(x), Ok(y)) => {
                for (p, q) in x.closeness.iter().zip(&y.closeness) {
                    prop_assert!((p - q).abs() <= 1e-12);
                }
                prop_assert_eq!(x.ranks, rank(&y.closeness));
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "scaling changed degeneracy"),
        }
    }
    Ok(())
}

pub fn duplicate_alternatives_tie(c: &Case, r: usize) -> Check {
    let mut dup = c.clone();
    dup.scores.push(c.scores[r].clone());
    let n = dup.scores.len();
    for opts in all_options() {
        let Ok(report) = evaluate(&dup.problem(), &opts) else {
            continue;
        };
        let c_r = report.closeness[r];
        prop_assert_eq!(c_r, report.closeness[n - 1]);
        prop_assert!(report.ranks[r] < report.ranks[n - 1]);
        // Only exact ties may sit between the original and its copy.
        for (i, &rank_i) in report.ranks.iter().enumerate() {
            if report.ranks[r] < rank_i && rank_i < report.ranks[n - 1] {
                prop_assert_eq!(report.closeness[i], c_r);
            }
        }
    }
    Ok(())
}

pub fn permuting_rows_permutes_results(c: &Case, shift: usize) -> Check {
    let n = c.scores.len();
    let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
    let mut permuted = c.clone();
    permuted.scores = perm.iter().map(|&p| c.scores[p].clone()).collect();
    for opts in all_options() {
        match (
            evaluate(&c.problem(), &opts),
            evaluate(&permuted.problem(), &opts),
        ) {
            (Ok(x), Ok(y)) => {
                for (new_i, &old_i) in perm.iter().enumerate() {
                    prop_assert!((y.closeness[new_i] - x.closeness[old_i]).abs() <= 1e-12);
                }
                prop_assert_eq!(&y.ranks, &rank(&y.closeness));
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "permutation changed degeneracy"),
        }
    }
    Ok(())
}

pub fn modes_agree_on_benefit_only(c: &Case) -> Check {
    let mut all = c.clone();
    all.benefit = vec![true; c.weights.len()];
    for distance in [Distance::Euclidean, Distance::Squared] {
        let honor = evaluate(
            &all.problem(),
            &EvalOptions::new(IdealMode::HonorKinds, distance),
        );
        let bench = evaluate(
            &all.problem(),
            &EvalOptions::new(IdealMode::AllBenefit, distance),
        );
        match (honor, bench) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.closeness, b.closeness);
                prop_assert_eq!(a.ranks, b.ranks);
                prop_assert_eq!(a.ideals.pis, b.ideals.pis);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "modes disagree on degeneracy"),
        }
    }
    Ok(())
}

pub fn ideals_sit_inside_column_range(c: &Case) -> Check {
    for opts in all_options() {
        let Ok(report) = evaluate(&c.problem(), &opts) else {
            continue;
        };
        let v = report.weighted.values();
        for (j, crit) in report.criteria.iter().enumerate() {
            let lo = v.column(j).fold(f64::INFINITY, f64::min);
            let hi = v.column(j).fold(f64::NEG_INFINITY, f64::max);
            let (p, q) = (report.ideals.pis[j], report.ideals.nis[j]);
            prop_assert!(lo <= p && p <= hi && lo <= q && q <= hi);
            let cost = crit.kind == CriterionKind::Cost && opts.ideal_mode == IdealMode::HonorKinds;
            if cost {
                prop_assert!(p <= q)
            } else {
                prop_assert!(p >= q)
            }
        }
    }
    Ok(())
}
