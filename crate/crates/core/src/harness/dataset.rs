//! JSONL dataset records: one generated formula with all its renderings.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::{RunConfig, Setting};
use crate::generators::{
    generate, map_difficulty, round_half_away, GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams,
    SymmetryParams, Truth,
};
use crate::logic::{check_witness, decide, Formula, LogicError};
use crate::par::{self, Execution};
use crate::rng::child_seed;
use crate::verbalize::{verbalize, Verbalization};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub format_version: u32,
    pub id: String,
    pub setting: String,
    pub formula_index: usize,
    pub generator: GeneratorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    pub target_clauses: usize,
    pub params: StructuralParams,
    pub knobs: BTreeMap<String, f64>,
    pub seed: u64,
    pub num_vars: u32,
    /// Signed DIMACS-style literal pairs.
    pub clauses: Vec<[i64; 2]>,
    pub ground_truth: Truth,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<Planted>,
    pub verbalizations: Vec<Verbalization>,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: unsupported format_version {found} (expected {FORMAT_VERSION})")]
    Version { line: usize, found: u32 },
    #[error("record {id}: {source}")]
    Formula { id: String, source: LogicError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DatasetRecord {
    pub fn formula(&self) -> Result<Formula, DatasetError> {
        Formula::from_signed_pairs(self.num_vars, &self.clauses)
            .map_err(|source| DatasetError::Formula { id: self.id.clone(), source })
    }

    pub fn verbalization(&self, id: &str) -> Option<&Verbalization> {
        self.verbalizations.iter().find(|v| v.id == id)
    }
}

/// Parameters plus instance for one setting and seed.
pub fn build_instance(setting: &Setting, seed: u64) -> Result<GeneratedInstance, GenError> {
    let params = match setting.generator {
        GeneratorKind::Symmetry => {
            let base_kind = setting.base.unwrap_or(GeneratorKind::EquivalenceCore);
            let base_target = round_half_away(setting.target as f64 / f64::from(setting.copies)) as usize;
            let base = map_difficulty(base_kind, &setting.knobs, base_target)?;
            StructuralParams::Symmetry {
                base: Box::new(base),
                probe: SymmetryParams { copies: setting.copies, layout: setting.layout, per_copy_shuffle: false },
            }
        }
        kind => map_difficulty(kind, &setting.knobs, setting.target)?,
    };
    Ok(generate(&params, seed)?.with_knobs(setting.knobs.clone()))
}

pub fn make_record(setting: &Setting, index: usize, inst: GeneratedInstance, config: &RunConfig) -> DatasetRecord {
    let verbalizations = config.schemes.iter().map(|&s| verbalize(&inst.formula, s)).collect();
    DatasetRecord {
        format_version: FORMAT_VERSION,
        id: format!("{}/f{index}", setting.label),
        setting: setting.label.clone(),
        formula_index: index,
        generator: setting.generator,
        parameter: setting.parameter.clone(),
        level: setting.level,
        target_clauses: setting.target,
        params: inst.params,
        knobs: inst.knobs,
        seed: inst.seed,
        num_vars: inst.formula.num_vars(),
        clauses: inst.formula.to_signed_pairs(),
        ground_truth: inst.ground_truth,
        planted: inst.planted,
        verbalizations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedSetting {
    pub label: String,
    pub error: GenError,
}

/// Every `(setting, formula)` pair of the config; instance `i` overall is
/// seeded with child stream `i` of the master seed, so the output does not
/// depend on `exec`.
pub fn generate_dataset(config: &RunConfig, exec: Execution) -> (Vec<DatasetRecord>, Vec<SkippedSetting>) {
    let settings = config.settings();
    let per = config.formulas_per_setting;
    let jobs: Vec<(usize, usize)> = (0..settings.len()).flat_map(|s| (0..per).map(move |j| (s, j))).collect();
    let built = par::map(exec, &jobs, |&(s, j)| {
        let seed = child_seed(config.master_seed, (s * per + j) as u64);
        build_instance(&settings[s], seed).map(|inst| make_record(&settings[s], j, inst, config))
    });
    let mut records = Vec::with_capacity(built.len());
    let mut skipped: Vec<SkippedSetting> = Vec::new();
    for (&(s, _), result) in jobs.iter().zip(built) {
        match result {
            Ok(r) => records.push(r),
            Err(error) => {
                if skipped.last().is_none_or(|k| k.label != settings[s].label) {
                    log::warn!("skipping setting {}: {error}", settings[s].label);
                    skipped.push(SkippedSetting { label: settings[s].label.clone(), error });
                }
            }
        }
    }
    (records, skipped)
}

pub fn write_jsonl<W: Write, T: Serialize>(mut w: W, items: &[T]) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_jsonl<R: BufRead, T: for<'de> Deserialize<'de>>(r: R) -> Result<Vec<T>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| DatasetError::Json { line: i + 1, source })?);
    }
    Ok(out)
}

pub fn read_dataset<R: BufRead>(r: R) -> Result<Vec<DatasetRecord>, DatasetError> {
    let records: Vec<DatasetRecord> = read_jsonl(r)?;
    if let Some((i, rec)) = records.iter().enumerate().find(|(_, r)| r.format_version != FORMAT_VERSION) {
        return Err(DatasetError::Version { line: i + 1, found: rec.format_version });
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrityFailure {
    pub id: String,
    pub reason: String,
}

/// Re-decides every record and re-checks the planted witness.
pub fn verify(records: &[DatasetRecord], exec: Execution) -> Vec<IntegrityFailure> {
    par::map(exec, records, |r| {
        let fail = |reason: String| Some(IntegrityFailure { id: r.id.clone(), reason });
        let f = match r.formula() {
            Ok(f) => f,
            Err(e) => return fail(e.to_string()),
        };
        let sat = decide(&f).is_sat();
        if sat != r.ground_truth.is_sat() {
            return fail(format!("stored {} but solver says {}", r.ground_truth, if sat { "SAT" } else { "UNSAT" }));
        }
        if let Some(a) = r.planted.as_ref().and_then(Planted::assignment) {
            if !check_witness(&f, a).is_ok_and(|w| w.valid) {
                return fail("planted assignment does not satisfy the formula".into());
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect()
}
