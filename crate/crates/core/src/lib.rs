//! Multi-criteria ranking of alternatives by relative closeness to an
//! ideal solution (TOPSIS), with scoresheet ingestion and sensitivity
//! analysis.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod ingestion;
pub mod model;
pub mod topsis;

pub use error::{TopsisError, ValidationError, Violation, ViolationCode};
pub use model::{
    Criterion, CriterionKind, DecisionProblem, Distance, EvalOptions, IdealMode, IdealSolutions,
    Matrix, NormalizedMatrix, RankingReport, SeparationMeasures, WeightedMatrix,
};
pub use topsis::{
    apply_weights, closeness, evaluate, evaluate_validated, ideal_solutions, normalize, rank,
    separations, validate_problem, validate_problem_with, ValidatedProblem, ValidationPolicy,
};

/// Version string reported by the CLI and HTTP service.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
