//! CSV outputs: per-response scores, grouped metrics, the main results
//! table and the significance report.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;

use crate::eval::aggregate::{per_formula_scores, sat_metric, witness_metric};
use crate::eval::{aggregate, bh_by_family, friedman_test, AggregateMetrics, GroupField, ScoreRecord};
use crate::generators::GeneratorKind;

pub fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read, T: serde::de::DeserializeOwned>(r: R) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

pub fn metrics_table(scores: &[ScoreRecord], fields: &[GroupField]) -> Vec<AggregateMetrics> {
    aggregate(scores, fields)
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.1}")).unwrap_or_default()
}

/// Grid settings only: one row per (generator, clause count), a Sat. and a
/// Wit. column per model; Wit. is `---` for UNSAT families.
pub fn main_table(scores: &[ScoreRecord]) -> Vec<Vec<String>> {
    let grid: Vec<ScoreRecord> = scores.iter().filter(|r| r.parameter.is_none()).cloned().collect();
    let models: BTreeSet<&str> = grid.iter().map(|r| r.model.as_str()).collect();
    let metrics = aggregate(&grid, &[GroupField::Generator, GroupField::Clauses, GroupField::Model]);
    let mut rows: BTreeMap<(GeneratorKind, usize), BTreeMap<&str, &AggregateMetrics>> = BTreeMap::new();
    for m in &metrics {
        let key = (m.generator.expect("grouped"), m.target_clauses.expect("grouped"));
        rows.entry(key).or_default().insert(m.model.as_deref().expect("grouped"), m);
    }
    let mut header = vec!["generator".to_string(), "clauses".to_string()];
    for m in &models {
        header.push(format!("{m} Sat."));
        header.push(format!("{m} Wit."));
    }
    let mut out = vec![header];
    for ((generator, clauses), by_model) in rows {
        let mut row = vec![generator.label().to_string(), clauses.to_string()];
        for m in &models {
            let metric = by_model.get(m);
            row.push(cell(metric.and_then(|x| x.sat_accuracy)));
            let unsat_family = metric.is_some_and(|x| x.sat_bias.is_some() && x.witness_validity.is_none());
            row.push(if unsat_family { "---".to_string() } else { cell(metric.and_then(|x| x.witness_validity)) });
        }
        out.push(row);
    }
    out
}

pub fn write_rows<W: Write>(w: W, rows: &[Vec<String>]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.write_record(r)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValueRow {
    pub family: String,
    pub generator: GeneratorKind,
    pub parameter: String,
    /// Clause count, `"<n> <k>-point"` for the full sweep, or `"Overall"`.
    pub clauses: String,
    pub metric: &'static str,
    pub levels: usize,
    pub subjects: usize,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub p_adjusted: Option<f64>,
    pub note: String,
}

const COARSE: [f64; 3] = [0.2, 0.5, 0.8];

fn contains_level(levels: &[f64], x: f64) -> bool {
    levels.iter().any(|l| (l - x).abs() < 1e-9)
}

/// Which per-formula score a family's sweep is tested on: decision accuracy
/// for the UNSAT family, witness validity otherwise.
pub fn sweep_metric(g: GeneratorKind) -> (&'static str, fn(&ScoreRecord) -> Option<bool>) {
    match g {
        GeneratorKind::ImplicationCycle => ("sat_accuracy", sat_metric),
        _ => ("witness_validity", witness_metric),
    }
}

fn friedman_row(
    records: &[&ScoreRecord],
    levels: &[f64],
    generator: GeneratorKind,
    parameter: &str,
    clauses: String,
) -> PValueRow {
    let (metric_name, metric) = sweep_metric(generator);
    let per_formula = per_formula_scores(records, metric);
    // subject = (model, clause count, formula slot); column = level
    let mut table: BTreeMap<(String, usize, usize), Vec<Option<f64>>> = BTreeMap::new();
    for r in records {
        let Some(col) = r.level.and_then(|l| levels.iter().position(|x| (x - l).abs() < 1e-9)) else {
            continue;
        };
        let Some(&score) = per_formula.get(&r.instance_id) else { continue };
        let row = table
            .entry((r.model.clone(), r.target_clauses, r.formula_index))
            .or_insert_with(|| vec![None; levels.len()]);
        row[col] = Some(score);
    }
    let rows: Vec<Vec<Option<f64>>> = table.into_values().collect();
    let mut out = PValueRow {
        family: String::new(),
        generator,
        parameter: parameter.to_string(),
        clauses,
        metric: metric_name,
        levels: levels.len(),
        subjects: rows.len(),
        statistic: None,
        p_value: None,
        p_adjusted: None,
        note: String::new(),
    };
    match friedman_test(&rows) {
        Ok(t) => {
            out.statistic = Some(t.statistic);
            out.p_value = Some(t.p_value);
            if t.degenerate {
                out.note = "no rank variation".into();
            }
        }
        Err(e) => {
            log::warn!("{} {parameter} {}: {e}", generator.id(), out.clauses);
            out.note = e.to_string();
        }
    }
    out
}

/// Friedman tests per swept knob: one row per clause count on the 0.2/0.5/0.8
/// levels (all levels when those are absent), one on the full grid when it
/// is finer, and `Overall` pooling clause counts. BH adjustment runs within
/// each family: `family` if given, otherwise the generator.
pub fn significance(scores: &[ScoreRecord], family: Option<&str>) -> Vec<PValueRow> {
    let mut by_param: BTreeMap<(GeneratorKind, String), Vec<&ScoreRecord>> = BTreeMap::new();
    for r in scores {
        if let Some(p) = &r.parameter {
            by_param.entry((r.generator, p.clone())).or_default().push(r);
        }
    }
    let mut rows = Vec::new();
    for ((generator, parameter), records) in by_param {
        let mut by_target: BTreeMap<usize, Vec<&ScoreRecord>> = BTreeMap::new();
        for r in &records {
            by_target.entry(r.target_clauses).or_default().push(r);
        }
        let mut coarse_sets = Vec::new();
        let mut param_rows = Vec::new();
        for (&target, recs) in &by_target {
            let mut levels: Vec<f64> = recs.iter().filter_map(|r| r.level).collect();
            levels.sort_by(f64::total_cmp);
            levels.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            let has_coarse = COARSE.iter().all(|&c| contains_level(&levels, c));
            let coarse: Vec<f64> = if has_coarse { COARSE.to_vec() } else { levels.clone() };
            param_rows.push(friedman_row(recs, &coarse, generator, &parameter, target.to_string()));
            if has_coarse && levels.len() > COARSE.len() {
                let label = format!("{target} {}-point", levels.len());
                param_rows.push(friedman_row(recs, &levels, generator, &parameter, label));
            }
            coarse_sets.push(coarse);
        }
        if by_target.len() > 1 {
            let common: Vec<f64> =
                coarse_sets[0].iter().copied().filter(|&l| coarse_sets.iter().all(|s| contains_level(s, l))).collect();
            if common.len() >= 2 {
                param_rows.insert(0, friedman_row(&records, &common, generator, &parameter, "Overall".into()));
            }
        }
        rows.extend(param_rows);
    }
    for r in &mut rows {
        r.family = family.map_or_else(|| r.generator.id().to_string(), str::to_string);
    }
    let tested: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].p_value.is_some()).collect();
    let families: Vec<String> = tested.iter().map(|&i| rows[i].family.clone()).collect();
    let ps: Vec<f64> = tested.iter().map(|&i| rows[i].p_value.expect("filtered")).collect();
    if let Ok(adjusted) = bh_by_family(&families, &ps) {
        for (&i, a) in tested.iter().zip(adjusted) {
            rows[i].p_adjusted = Some(a);
        }
    }
    rows
}
