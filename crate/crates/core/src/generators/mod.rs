//! The five parameterized instance families and the mapping from normalized
//! difficulty knobs to their structural parameters.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed.

mod backbone;
mod difficulty;
mod equivalence_core;
mod implication_cycle;
mod mono_bridge;
mod symmetry;

pub use backbone::{gen_backbone, BackboneParams, Orientation};
pub use difficulty::{knob_names, map_difficulty, round_half_away, KNOB_GRID};
pub use equivalence_core::{gen_equivalence_core, EquivalenceCoreParams, Placement};
pub use implication_cycle::{gen_implication_cycle, implication_cycle_core, ImplicationCycleParams};
pub use mono_bridge::{gen_mono_bridge, MonoBridgeParams};
pub use symmetry::{gen_symmetry_probe, SymmetryParams};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Assignment, Formula, Var};
use crate::rng::child_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("{generator}: {reason}")]
    Params { generator: GeneratorKind, reason: String },
    #[error("{generator}: unknown knob `{knob}` (expected one of {expected:?})")]
    UnknownKnob { generator: GeneratorKind, knob: String, expected: Vec<&'static str> },
    #[error("knob `{knob}` = {value} is outside [0, 1]")]
    KnobRange { knob: String, value: f64 },
    #[error("{generator}: target of {target} clauses is infeasible: {constraint}")]
    Infeasible { generator: GeneratorKind, target: usize, constraint: String },
}

pub(crate) fn param_error(generator: GeneratorKind, reason: impl Into<String>) -> GenError {
    GenError::Params { generator, reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    ImplicationCycle,
    EquivalenceCore,
    Backbone,
    MonoBridge,
    Symmetry,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::ImplicationCycle,
        GeneratorKind::EquivalenceCore,
        GeneratorKind::Backbone,
        GeneratorKind::MonoBridge,
        GeneratorKind::Symmetry,
    ];

    /// Display name used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::ImplicationCycle => "ImplicationCycle",
            GeneratorKind::EquivalenceCore => "EquivalenceCore",
            GeneratorKind::Backbone => "Backbone",
            GeneratorKind::MonoBridge => "MonoBridge",
            GeneratorKind::Symmetry => "Symmetry",
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            GeneratorKind::ImplicationCycle => "implication_cycle",
            GeneratorKind::EquivalenceCore => "equivalence_core",
            GeneratorKind::Backbone => "backbone",
            GeneratorKind::MonoBridge => "mono_bridge",
            GeneratorKind::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|g| g.id() == s || g.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown generator `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Truth {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl Truth {
    pub fn is_sat(self) -> bool {
        self == Truth::Sat
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Sat => "SAT",
            Truth::Unsat => "UNSAT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum StructuralParams {
    ImplicationCycle(ImplicationCycleParams),
    EquivalenceCore(EquivalenceCoreParams),
    Backbone(BackboneParams),
    MonoBridge(MonoBridgeParams),
    Symmetry { base: Box<StructuralParams>, probe: SymmetryParams },
}

impl StructuralParams {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            StructuralParams::ImplicationCycle(_) => GeneratorKind::ImplicationCycle,
            StructuralParams::EquivalenceCore(_) => GeneratorKind::EquivalenceCore,
            StructuralParams::Backbone(_) => GeneratorKind::Backbone,
            StructuralParams::MonoBridge(_) => GeneratorKind::MonoBridge,
            StructuralParams::Symmetry { .. } => GeneratorKind::Symmetry,
        }
    }
}

/// Structure planted by a generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Planted {
    /// A satisfying assignment.
    Model { assignment: Assignment },
    /// A variable `x` with `x ⇝ ¬x ⇝ x`.
    Conflict { var: Var },
    /// A satisfying assignment plus the forced values of the backbone.
    Backbone { assignment: Assignment, backbone: Vec<(Var, bool)> },
}

impl Planted {
    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            Planted::Model { assignment } | Planted::Backbone { assignment, .. } => Some(assignment),
            Planted::Conflict { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub formula: Formula,
    pub generator: GeneratorKind,
    pub params: StructuralParams,
    /// Normalized knob values this instance was mapped from (may be empty).
    pub knobs: BTreeMap<String, f64>,
    pub seed: u64,
    pub ground_truth: Truth,
    pub planted: Option<Planted>,
}

impl GeneratedInstance {
    pub fn with_knobs(mut self, knobs: BTreeMap<String, f64>) -> Self {
        self.knobs = knobs;
        self
    }
}

/// Runs the generator named by `params`. A symmetry probe first builds its
/// base instance from child stream 0 of `seed`.
pub fn generate(params: &StructuralParams, seed: u64) -> Result<GeneratedInstance, GenError> {
    match params {
        StructuralParams::ImplicationCycle(p) => gen_implication_cycle(p, seed),
        StructuralParams::EquivalenceCore(p) => gen_equivalence_core(p, seed),
        StructuralParams::Backbone(p) => gen_backbone(p, seed),
        StructuralParams::MonoBridge(p) => gen_mono_bridge(p, seed),
        StructuralParams::Symmetry { base, probe } => {
            let base = generate(base, child_seed(seed, 0))?;
            let mut inst = gen_symmetry_probe(&base, probe, child_seed(seed, 1))?;
            inst.seed = seed;
            Ok(inst)
        }
    }
}
