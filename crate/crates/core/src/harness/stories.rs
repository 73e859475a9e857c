use super::dataset::DatasetRecord;
use crate::par::{self, Execution};
use crate::rng::child_seed;
use crate::verbalize::llm::verbalize_story;
use crate::verbalize::{ChatClient, StoryError, StoryOptions, Theme, Verbalization};

#[derive(Debug)]
pub struct StoryFailure {
    pub instance_id: String,
    pub theme: Theme,
    pub error: StoryError,
}

/// Fallback counts over every clue of every story in `records`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClueTally {
    pub clues: usize,
    pub first_pass: usize,
    pub retried: usize,
    pub fallback: usize,
}

pub fn clue_tally(records: &[DatasetRecord]) -> ClueTally {
    use crate::verbalize::ClueStatus;
    let mut t = ClueTally::default();
    for c in records.iter().flat_map(|r| &r.verbalizations).flat_map(|v| &v.clues) {
        t.clues += 1;
        match c.status {
            ClueStatus::FirstPass => t.first_pass += 1,
            ClueStatus::Retried { .. } => t.retried += 1,
            ClueStatus::Fallback => t.fallback += 1,
        }
    }
    t
}

/// Stories for every record and theme, one formula per worker and at most
/// `parallelism` formulas at once. Story verbalizations replace the
/// template ones unless `keep_templates`; a record whose story fails keeps
/// its other verbalizations and the failure is returned.
pub fn add_stories(
    records: &[DatasetRecord],
    themes: &[Theme],
    client: &dyn ChatClient,
    opts: &StoryOptions,
    parallelism: usize,
    keep_templates: bool,
) -> (Vec<DatasetRecord>, Vec<StoryFailure>) {
    let results = par::with_thread_limit(parallelism, || {
        par::map(Execution::Parallel, records, |r| {
            let f = r.formula().expect("dataset was verified on load");
            themes
                .iter()
                .enumerate()
                .map(|(k, &theme)| {
                    verbalize_story(&f, theme, client, child_seed(r.seed, 1 << 32 | k as u64), opts)
                        .map_err(|error| StoryFailure { instance_id: r.id.clone(), theme, error })
                })
                .collect::<Vec<Result<Verbalization, StoryFailure>>>()
        })
    });
    let mut out = Vec::with_capacity(records.len());
    let mut failures = Vec::new();
    for (r, stories) in records.iter().zip(results) {
        let mut r = r.clone();
        if !keep_templates {
            r.verbalizations.clear();
        }
        for s in stories {
            match s {
                Ok(v) => {
                    r.verbalizations.retain(|x| x.id != v.id);
                    r.verbalizations.push(v);
                }
                Err(e) => {
                    log::warn!("{} ({}): {}", e.instance_id, e.theme, e.error);
                    failures.push(e);
                }
            }
        }
        out.push(r);
    }
    (out, failures)
}
