//! Parameterized 2-CNF benchmark families with known satisfiability status,
//! semantics-preserving perturbations, natural-language verbalizers and the
//! scoring/statistics pipeline for model answers.

pub mod eval;
pub mod generators;
pub mod harness;
pub mod logic;
pub mod par;
pub mod perturb;
pub mod rng;
pub mod verbalize;

pub use logic::{Assignment, Clause, Formula, Lit, Var};
