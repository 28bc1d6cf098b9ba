use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::TopsisError;
use crate::model::{order_from_ranks, DecisionProblem, EvalOptions};
use crate::topsis::{
    evaluate_validated, validate_problem_with, ValidatedProblem, ValidationPolicy,
};

/// Score perturbation applied independently to every cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Adds an integer drawn uniformly from `-magnitude..=magnitude`, then
    /// clamps to the 1..9 scoring scale. Cells drawing 0 are left as is.
    UniformIntegerJitter { magnitude: u32 },
}

impl NoiseModel {
    pub fn jitter(magnitude: u32) -> Self {
        NoiseModel::UniformIntegerJitter { magnitude }
    }

    fn magnitude(self) -> u32 {
        match self {
            NoiseModel::UniformIntegerJitter { magnitude } => magnitude,
        }
    }
}

const SCALE_MIN: f64 = 1.0;
const SCALE_MAX: f64 = 9.0;
/// ChaCha words reserved per cell within a trial's stream.
const WORDS_PER_CELL: u128 = 16;

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn draw(rng: &mut ChaCha8Rng, cell: usize, magnitude: u32) -> i64 {
    rng.set_word_pos(WORDS_PER_CELL * cell as u128);
    let m = i64::from(magnitude);
    rng.random_range(-m..=m)
}

/// The jitter for one cell (row-major index) of one trial. Depends only on
/// `(seed, trial, cell)`.
pub fn jitter(seed: u64, trial: u64, cell: usize, magnitude: u32) -> i64 {
    if magnitude == 0 {
        return 0;
    }
    draw(&mut trial_rng(seed, trial), cell, magnitude)
}

/// Perturbed copy of a score matrix for one trial.
pub fn perturb_scores(
    scores: &[Vec<f64>],
    noise: NoiseModel,
    seed: u64,
    trial: u64,
) -> Vec<Vec<f64>> {
    let magnitude = noise.magnitude();
    if magnitude == 0 {
        return scores.to_vec();
    }
    let mut rng = trial_rng(seed, trial);
    let cols = scores.first().map_or(0, Vec::len);
    scores
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &s)| match draw(&mut rng, i * cols + j, magnitude) {
                    0 => s,
                    d => (s + d as f64).clamp(SCALE_MIN, SCALE_MAX),
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingCount {
    /// Alternative names from best to worst.
    pub order: Vec<String>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub trials: u64,
    pub seed: u64,
    pub noise: NoiseModel,
    pub options: EvalOptions,
    pub alternatives: Vec<String>,
    pub baseline_ranks: Vec<usize>,
    /// `frequency[a][r]` counts trials that put alternative `a` at rank `r + 1`.
    pub frequency: Vec<Vec<u64>>,
    /// Distinct full rankings, most frequent first.
    pub rankings: Vec<RankingCount>,
    pub modal_ranking: Vec<String>,
    /// Trials where every alternative collapsed onto both ideals; these are
    /// ranked in input order.
    pub degenerate_trials: u64,
}

impl StabilityReport {
    /// Trials whose top `names.len()` positions hold exactly `names`.
    pub fn top_set_frequency(&self, names: &[&str]) -> u64 {
        let k = names.len();
        self.rankings
            .iter()
            .filter(|r| {
                r.order.len() >= k && r.order[..k].iter().all(|a| names.contains(&a.as_str()))
            })
            .map(|r| r.count)
            .sum()
    }

    /// Share of trials reproducing the unperturbed ranking.
    pub fn baseline_share(&self) -> f64 {
        let baseline: Vec<String> = order_from_ranks(&self.baseline_ranks)
            .into_iter()
            .map(|i| self.alternatives[i].clone())
            .collect();
        let hits = self
            .rankings
            .iter()
            .find(|r| r.order == baseline)
            .map_or(0, |r| r.count);
        hits as f64 / self.trials as f64
    }
}

/// Ranks the problem `trials` times under independent score noise.
pub fn monte_carlo_stability(
    problem: &DecisionProblem,
    noise: NoiseModel,
    trials: u64,
    seed: u64,
    options: &EvalOptions,
) -> Result<StabilityReport, TopsisError> {
    if trials == 0 {
        return Err(TopsisError::InvalidArgument(
            "trials must be at least 1".into(),
        ));
    }
    let policy = ValidationPolicy {
        auto_normalize_weights: options.auto_normalize_weights,
        score_range: None,
    };
    let base = validate_problem_with(problem.clone(), &policy)?;
    let baseline = evaluate_validated(&base, options)?;
    let n = base.alternatives().len();

    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(&base, noise, seed, t, options))
        .collect::<Result<Vec<_>, _>>()?;

    let mut frequency = vec![vec![0u64; n]; n];
    let mut by_order: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut degenerate_trials = 0;
    for (ranks, degenerate) in outcomes {
        degenerate_trials += u64::from(degenerate);
        for (a, &r) in ranks.iter().enumerate() {
            frequency[a][r - 1] += 1;
        }
        *by_order.entry(order_from_ranks(&ranks)).or_default() += 1;
    }

    let mut counted: Vec<(Vec<usize>, u64)> = by_order.into_iter().collect();
    // Stable sort keeps lexicographic order among equal counts.
    counted.sort_by_key(|c| std::cmp::Reverse(c.1));
    let names = |order: &[usize]| -> Vec<String> {
        order
            .iter()
            .map(|&i| base.alternatives()[i].clone())
            .collect()
    };
    let rankings: Vec<RankingCount> = counted
        .iter()
        .map(|(order, count)| RankingCount {
            order: names(order),
            count: *count,
        })
        .collect();

    Ok(StabilityReport {
        trials,
        seed,
        noise,
        options: *options,
        alternatives: base.alternatives().to_vec(),
        baseline_ranks: baseline.ranks,
        frequency,
        modal_ranking: rankings[0].order.clone(),
        rankings,
        degenerate_trials,
    })
}

fn run_trial(
    base: &ValidatedProblem,
    noise: NoiseModel,
    seed: u64,
    trial: u64,
    options: &EvalOptions,
) -> Result<(Vec<usize>, bool), TopsisError> {
    let mut problem = base.problem().clone();
    problem.scores = perturb_scores(&problem.scores, noise, seed, trial);
    let validated = validate_problem_with(problem, &ValidationPolicy::default())?;
    match evaluate_validated(&validated, options) {
        Ok(report) => Ok((report.ranks, false)),
        Err(e) if e.is_degenerate() => Ok(((1..=validated.alternatives().len()).collect(), true)),
        Err(e) => Err(e),
    }
}
