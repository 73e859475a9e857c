//! Response parsing, scoring, formula-first aggregation and the
//! significance tests.

pub mod aggregate;
pub mod parse;
pub mod score;
pub mod stats;

pub use aggregate::{aggregate, AggregateMetrics, GroupField};
pub use parse::{parse_decision, parse_response, Decision, ModelResponse, ParsedAnswer};
pub use score::{score, Outcome, ScoreError, ScoreRecord};
pub use stats::{
    bh_by_family, bh_correct, confidence_interval, friedman_test, independent_t_test, paired_t_test, StatsError,
    TestResult,
};
