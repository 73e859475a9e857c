//! Dataset generation over parameter grids, evaluation runs, and reports.

pub mod config;
pub mod dataset;
pub mod export;
pub mod models;
pub mod report;
pub mod run;
pub mod stories;

pub use config::{EndpointSpec, GridSpec, RunConfig, Setting, SweepSpec};
pub use dataset::{
    generate_dataset, read_dataset, read_jsonl, verify, write_jsonl, DatasetError, DatasetRecord, IntegrityFailure,
    FORMAT_VERSION,
};
pub use export::export_dimacs;
pub use models::{ChatResponder, MockModel, MockPolicy, Responder};
pub use report::{main_table, significance, PValueRow};
pub use run::{evaluate, score_responses, Mismatch};
pub use stories::{add_stories, clue_tally, ClueTally, StoryFailure};
