use serde::{Deserialize, Serialize};

use super::{GenError, GeneratedInstance, GeneratorKind, Planted, StructuralParams};
use crate::perturb::{duplicate, DuplicateOptions, Layout};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryParams {
    pub copies: u32,
    pub layout: Layout,
    pub per_copy_shuffle: bool,
}

impl Default for SymmetryParams {
    fn default() -> Self {
        SymmetryParams { copies: 2, layout: Layout::Grouped, per_copy_shuffle: false }
    }
}

/// `Ψ ∧ ρ₂(Ψ) ∧ … ∧ ρ_d(Ψ)` over pairwise-disjoint variable blocks.
pub fn gen_symmetry_probe(
    base: &GeneratedInstance,
    p: &SymmetryParams,
    seed: u64,
) -> Result<GeneratedInstance, GenError> {
    if p.copies < 2 {
        return Err(super::param_error(GeneratorKind::Symmetry, "need at least two copies"));
    }
    let opts =
        DuplicateOptions { copies: p.copies, layout: p.layout, per_copy_shuffle: p.per_copy_shuffle, trigger: None };
    let dup = duplicate(&base.formula, &opts, seed);
    let planted = match &base.planted {
        Some(Planted::Model { assignment }) => Some(Planted::Model { assignment: dup.extend_witness(assignment) }),
        Some(Planted::Backbone { assignment, backbone }) => {
            let backbone =
                dup.renamings.iter().flat_map(|r| backbone.iter().map(move |&(v, b)| (r.apply(v), b))).collect();
            Some(Planted::Backbone { assignment: dup.extend_witness(assignment), backbone })
        }
        other => other.clone(),
    };
    Ok(GeneratedInstance {
        formula: dup.formula,
        generator: GeneratorKind::Symmetry,
        params: StructuralParams::Symmetry { base: Box::new(base.params.clone()), probe: p.clone() },
        knobs: base.knobs.clone(),
        seed,
        ground_truth: base.ground_truth,
        planted,
    })
}
