use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::generators::{knob_names, GeneratorKind, KNOB_GRID};
use crate::perturb::Layout;
use crate::verbalize::{Scheme, StoryOptions, Theme};

/// One generator at several clause counts, all knobs fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub generator: GeneratorKind,
    pub targets: Vec<usize>,
    /// Knobs not listed default to 0.5.
    #[serde(default)]
    pub knobs: BTreeMap<String, f64>,
    /// Required for symmetry probes: the family being duplicated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<GeneratorKind>,
    #[serde(default = "default_copies")]
    pub copies: u32,
    #[serde(default)]
    pub layout: Layout,
}

/// One knob swept over `levels` at one or more clause counts, the other
/// knobs held at `knobs` (0.5 by default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub generator: GeneratorKind,
    pub targets: Vec<usize>,
    /// Swept knobs; empty means every swept knob of the generator.
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    #[serde(default)]
    pub knobs: BTreeMap<String, f64>,
}

/// A chat endpoint to evaluate against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointSpec {
    pub name: String,
    /// Model id sent in requests; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_url: Option<String>,
    /// Overrides the run-wide output budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_output_tokens: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub master_seed: u64,
    pub formulas_per_setting: usize,
    pub grid: Vec<GridSpec>,
    pub sweeps: Vec<SweepSpec>,
    pub schemes: Vec<Scheme>,
    pub themes: Vec<Theme>,
    pub story: StoryOptions,
    pub endpoints: Vec<EndpointSpec>,
    pub max_output_tokens: Option<u32>,
    pub parallelism: usize,
}

fn default_copies() -> u32 {
    2
}

fn default_levels() -> Vec<f64> {
    KNOB_GRID.to_vec()
}

/// Knobs that carry a difficulty dimension (presentation options excluded).
pub fn swept_knobs(kind: GeneratorKind) -> &'static [&'static str] {
    let names = knob_names(kind);
    match kind {
        GeneratorKind::ImplicationCycle => &names[..1],
        GeneratorKind::EquivalenceCore => &names[..1],
        _ => names,
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = |generator, targets: &[usize]| GridSpec {
            generator,
            targets: targets.to_vec(),
            knobs: BTreeMap::new(),
            base: None,
            copies: 2,
            layout: Layout::Grouped,
        };
        let sweep = |generator, target| SweepSpec {
            generator,
            targets: vec![target],
            parameters: Vec::new(),
            levels: default_levels(),
            knobs: BTreeMap::new(),
        };
        RunConfig {
            master_seed: 0,
            formulas_per_setting: 10,
            grid: vec![
                grid(GeneratorKind::ImplicationCycle, &[5, 10, 15, 20, 50, 75, 100]),
                grid(GeneratorKind::EquivalenceCore, &[10, 15, 20, 50]),
                grid(GeneratorKind::Backbone, &[20, 50, 75, 100]),
                grid(GeneratorKind::MonoBridge, &[10, 20, 50, 75, 100, 150, 200]),
            ],
            sweeps: vec![
                sweep(GeneratorKind::ImplicationCycle, 75),
                sweep(GeneratorKind::EquivalenceCore, 20),
                sweep(GeneratorKind::Backbone, 75),
                sweep(GeneratorKind::MonoBridge, 75),
            ],
            schemes: Scheme::ALL.to_vec(),
            themes: Theme::ALL.to_vec(),
            story: StoryOptions::default(),
            endpoints: Vec::new(),
            max_output_tokens: None,
            parallelism: 8,
        }
    }
}

/// A fully resolved generation setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub label: String,
    pub generator: GeneratorKind,
    pub base: Option<GeneratorKind>,
    pub copies: u32,
    pub layout: Layout,
    pub target: usize,
    pub knobs: BTreeMap<String, f64>,
    pub parameter: Option<String>,
    pub level: Option<f64>,
}

fn knob_kind(generator: GeneratorKind, base: Option<GeneratorKind>) -> GeneratorKind {
    match generator {
        GeneratorKind::Symmetry => base.unwrap_or(GeneratorKind::EquivalenceCore),
        g => g,
    }
}

fn full_knobs(kind: GeneratorKind, given: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let mut knobs: BTreeMap<String, f64> = swept_knobs(kind).iter().map(|k| (k.to_string(), 0.5)).collect();
    knobs.extend(given.iter().map(|(k, v)| (k.clone(), *v)));
    knobs
}

impl RunConfig {
    /// Grid settings first, then sweeps, each in declaration order.
    pub fn settings(&self) -> Vec<Setting> {
        let mut out = Vec::new();
        for g in &self.grid {
            let kind = knob_kind(g.generator, g.base);
            for &target in &g.targets {
                let label = match g.generator {
                    GeneratorKind::Symmetry => {
                        format!("symmetry[{}x{}]/c{target}", kind.id(), g.copies)
                    }
                    k => format!("{}/c{target}", k.id()),
                };
                out.push(Setting {
                    label,
                    generator: g.generator,
                    base: (g.generator == GeneratorKind::Symmetry).then_some(kind),
                    copies: g.copies,
                    layout: g.layout,
                    target,
                    knobs: full_knobs(kind, &g.knobs),
                    parameter: None,
                    level: None,
                });
            }
        }
        for s in &self.sweeps {
            let parameters: Vec<String> = if s.parameters.is_empty() {
                swept_knobs(s.generator).iter().map(|k| k.to_string()).collect()
            } else {
                s.parameters.clone()
            };
            for &target in &s.targets {
                for p in &parameters {
                    for &level in &s.levels {
                        let mut knobs = full_knobs(s.generator, &s.knobs);
                        knobs.insert(p.clone(), level);
                        out.push(Setting {
                            label: format!("{}/c{target}/{p}={level:.4}", s.generator.id()),
                            generator: s.generator,
                            base: None,
                            copies: 2,
                            layout: Layout::Grouped,
                            target,
                            knobs,
                            parameter: Some(p.clone()),
                            level: Some(level),
                        });
                    }
                }
            }
        }
        out
    }
}
