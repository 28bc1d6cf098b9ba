//! The bundled supply-chain case study: six improvement factors scored
//! against four criteria on a 1..9 scale.

use crate::ingestion::{parse_problem, ProblemFormat};
use crate::model::DecisionProblem;

/// Raw bytes of `fixtures/paper-case` (object format).
pub const PAPER_CASE_JSON: &str = include_str!("../../../fixtures/paper-case");

/// Human-readable names for the case-study alternatives, in fixture order.
pub const PAPER_CASE_FACTORS: [(&str, &str); 6] = [
    ("A1", "On-time information sharing"),
    ("A2", "Supplier relationship"),
    ("A3", "Information technology"),
    ("A4", "Inventory planning"),
    ("A5", "5S in the shop floor"),
    ("A6", "Overall labour effectiveness"),
];

pub fn paper_case() -> DecisionProblem {
    parse_problem(PAPER_CASE_JSON.as_bytes(), ProblemFormat::Object)
        .expect("bundled fixture parses")
}
