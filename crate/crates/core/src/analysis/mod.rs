//! Explainability tables and sensitivity analyses built on [`crate::evaluate`].

mod explain;
mod stability;
mod sweep;

pub use explain::{
    explain, explain_report, Cell, DisplayRounding, ExplainReport, ExplainRow, ExplainTable,
    CLOSENESS, DECISION_MATRIX, IDEAL_SOLUTIONS, NIS_LABEL, NORMALIZED_MATRIX, PIS_LABEL,
    SEPARATIONS, WEIGHTED_MATRIX,
};
pub use stability::{
    jitter, monte_carlo_stability, perturb_scores, NoiseModel, RankingCount, StabilityReport,
};
pub use sweep::{
    leave_one_out, rescale_weights, weight_sweep, Crossover, DroppedCriterion, SweepPoint,
    SweepResult,
};
