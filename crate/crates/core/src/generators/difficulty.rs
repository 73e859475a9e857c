//! Normalized difficulty knobs → structural parameters.
//!
//! Each knob lives in `[0, 1]`; missing knobs default to 0.5. Integer
//! quantities are rounded half away from zero and then clamped to the
//! feasible range. The resulting parameters produce a clause count within
//! ±1 of the requested target (ties go to the lower count).

use std::collections::BTreeMap;

use super::{
    BackboneParams, EquivalenceCoreParams, GenError, GeneratorKind, ImplicationCycleParams, MonoBridgeParams,
    Orientation, Placement, StructuralParams,
};

/// Seven-level sweep grid.
pub const KNOB_GRID: [f64; 7] = [0.0, 0.2, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.8, 1.0];

const DEFAULT_KNOB: f64 = 0.5;

pub fn round_half_away(x: f64) -> f64 {
    // f64::round already rounds half away from zero
    x.round()
}

/// Knobs accepted by each generator; the first ones are the swept
/// difficulty parameters, trailing ones are presentation options.
pub fn knob_names(kind: GeneratorKind) -> &'static [&'static str] {
    match kind {
        GeneratorKind::ImplicationCycle => &["split", "filler", "shuffle"],
        GeneratorKind::EquivalenceCore => &["ratio", "placement"],
        GeneratorKind::Backbone => &["beta", "mono_density", "pi"],
        GeneratorKind::MonoBridge => &["density", "pos_ratio", "position"],
        GeneratorKind::Symmetry => &[],
    }
}

struct Knobs<'a> {
    map: &'a BTreeMap<String, f64>,
}

impl Knobs<'_> {
    fn get(&self, name: &str, default: f64) -> f64 {
        self.map.get(name).copied().unwrap_or(default)
    }
}

fn validate<'a>(kind: GeneratorKind, knobs: &'a BTreeMap<String, f64>) -> Result<Knobs<'a>, GenError> {
    let expected = knob_names(kind);
    for (name, &value) in knobs {
        if !expected.contains(&name.as_str()) {
            return Err(GenError::UnknownKnob { generator: kind, knob: name.clone(), expected: expected.to_vec() });
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(GenError::KnobRange { knob: name.clone(), value });
        }
    }
    Ok(Knobs { map: knobs })
}

fn clamp_round(x: f64, lo: i64, hi: i64) -> i64 {
    (round_half_away(x) as i64).clamp(lo, hi.max(lo))
}

pub fn map_difficulty(
    kind: GeneratorKind,
    knobs: &BTreeMap<String, f64>,
    target_clauses: usize,
) -> Result<StructuralParams, GenError> {
    let k = validate(kind, knobs)?;
    let infeasible = |constraint: &str| GenError::Infeasible {
        generator: kind,
        target: target_clauses,
        constraint: constraint.to_string(),
    };
    let t = target_clauses as i64;
    match kind {
        GeneratorKind::ImplicationCycle => {
            if t < 3 {
                return Err(infeasible("cycle needs L ≥ 2, i.e. at least 3 clauses"));
            }
            let fillers = clamp_round(k.get("filler", 0.0) * t as f64, 0, t - 3);
            let cycle_len = t - 1 - fillers;
            let twist = clamp_round(k.get("split", DEFAULT_KNOB) * cycle_len as f64, 1, cycle_len);
            let spare = if fillers > 0 {
                clamp_round(fillers as f64 * cycle_len as f64 / (cycle_len + 1) as f64, 2, i64::MAX)
            } else {
                0
            };
            Ok(StructuralParams::ImplicationCycle(ImplicationCycleParams {
                num_vars: (cycle_len + spare) as u32,
                cycle_len: cycle_len as u32,
                twist: twist as u32,
                fillers: fillers as u32,
                shuffle: k.get("shuffle", 0.0) >= 0.5,
            }))
        }
        GeneratorKind::EquivalenceCore => {
            let bound = t / 2;
            if bound == 0 {
                return Err(infeasible("needs at least one definition (2 clauses)"));
            }
            let free = clamp_round(k.get("ratio", DEFAULT_KNOB) * bound as f64, 1, bound);
            let placement = match k.get("placement", 0.0) {
                x if x <= 0.0 => Placement::Early,
                x if x >= 1.0 => Placement::Late,
                _ => Placement::Shuffled,
            };
            Ok(StructuralParams::EquivalenceCore(EquivalenceCoreParams {
                num_vars: (free + bound) as u32,
                free: free as u32,
                placement,
            }))
        }
        GeneratorKind::Backbone => {
            let beta = k.get("beta", DEFAULT_KNOB);
            let density = k.get("mono_density", DEFAULT_KNOB);
            let pi = k.get("pi", DEFAULT_KNOB);
            let orientation = if (pi - 0.5).abs() < 1e-9 {
                Orientation::Random
            } else if pi < 0.5 {
                Orientation::Negative
            } else {
                Orientation::Positive
            };
            let (base_vars, backbone, mono) = fit_backbone(beta, density, target_clauses)
                .ok_or_else(|| infeasible("β = 0 with zero monotone density yields no clauses"))?;
            let free = base_vars - backbone;
            // realized fractions, so that the generator's rounding reproduces
            // exactly `backbone` and `mono`
            let realized_density = if free >= 2 { 2.0 * mono as f64 / (free as f64 * free as f64) } else { 0.0 };
            Ok(StructuralParams::Backbone(BackboneParams {
                base_vars: base_vars as u32,
                beta: backbone as f64 / base_vars as f64,
                mono_density: realized_density.min(1.0),
                orientation,
            }))
        }
        GeneratorKind::MonoBridge => {
            if t < 1 {
                return Err(infeasible("needs at least the bridge clause"));
            }
            let mono = t - 1;
            let pos_clauses = clamp_round(k.get("pos_ratio", DEFAULT_KNOB) * t as f64, 0, mono);
            let neg_clauses = mono - pos_clauses;
            let total_vars = round_half_away(k.get("density", DEFAULT_KNOB) * 2.0 * t as f64) as i64;
            let share = if mono > 0 { pos_clauses as f64 / mono as f64 } else { 0.5 };
            // each monotone clause touches at most two variables, the bridge one more
            let pos_vars = clamp_round(total_vars as f64 * share, 1, 2 * pos_clauses + 1);
            let neg_min = if neg_clauses > 0 { 2 } else { 1 };
            let neg_vars = (total_vars - pos_vars).clamp(neg_min, (2 * neg_clauses + 1).max(neg_min));
            let bridge_pos =
                if t >= 2 { 1 + clamp_round(k.get("position", DEFAULT_KNOB) * (t - 2) as f64, 0, t - 2) } else { 1 };
            Ok(StructuralParams::MonoBridge(MonoBridgeParams {
                pos_clauses: pos_clauses as u32,
                neg_clauses: neg_clauses as u32,
                pos_vars: pos_vars as u32,
                neg_vars: neg_vars as u32,
                bridge_pos: bridge_pos as u32,
            }))
        }
        GeneratorKind::Symmetry => Err(GenError::Params {
            generator: kind,
            reason: "symmetry probes are built from a base generator's parameters".into(),
        }),
    }
}

/// Chooses `(n_base, |B|, m_mono)` with `2|B| + m_mono` within ±1 of the
/// target by exhaustive search, minimizing the deviation of the realized backbone fraction and
/// monotone density from the requested ones.
fn fit_backbone(beta: f64, density: f64, target: usize) -> Option<(usize, usize, usize)> {
    let t = target as i64;
    let candidates = [t, t - 1, t + 1];
    let mut best: Option<(f64, usize, (usize, usize, usize))> = None;
    let mut consider = |err: f64, rank: usize, fit: (usize, usize, usize)| {
        let better = match best {
            None => true,
            Some((e, r, _)) => err < e - 1e-12 || ((err - e).abs() <= 1e-12 && rank < r),
        };
        if better {
            best = Some((err, rank, fit));
        }
    };

    if beta >= 1.0 {
        for (rank, &count) in candidates.iter().enumerate() {
            if count >= 2 && count % 2 == 0 {
                let b = (count / 2) as usize;
                consider(0.0, rank, (b, b, 0));
            }
        }
        return best.map(|(_, _, fit)| fit);
    }

    if beta <= 0.0 && density <= 0.0 {
        return None;
    }
    let max_free = 4 * (target + 2);
    let max_backbone = target.div_ceil(2);
    for free in 0..=max_free {
        for backbone in 0..=max_backbone {
            let n_base = free + backbone;
            if n_base < 1 {
                continue;
            }
            for (rank, &count) in candidates.iter().enumerate() {
                let mono = count - 2 * backbone as i64;
                if mono < 0 || count < 1 || (mono > 0 && free < 2) {
                    continue;
                }
                let realized_density = if free >= 2 { 2.0 * mono as f64 / (free * free) as f64 } else { 0.0 };
                if realized_density > 1.0 {
                    continue;
                }
                let realized_beta = backbone as f64 / n_base as f64;
                let err = (realized_density - density).abs() + (realized_beta - beta).abs();
                consider(err, rank, (n_base, backbone, mono as usize));
            }
        }
    }
    best.map(|(_, _, fit)| fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knobs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn implication_cycle_split() {
        let p = map_difficulty(GeneratorKind::ImplicationCycle, &knobs(&[("split", 0.5)]), 75).unwrap();
        let StructuralParams::ImplicationCycle(p) = p else { unreachable!() };
        assert_eq!(p.cycle_len, 74);
        assert_eq!(p.twist, 37);
        assert_eq!(p.cycle_len + 1 + p.fillers, 75);
    }

    #[test]
    fn equivalence_core_twenty() {
        let p = map_difficulty(GeneratorKind::EquivalenceCore, &knobs(&[]), 20).unwrap();
        let StructuralParams::EquivalenceCore(p) = p else { unreachable!() };
        assert_eq!(p.num_vars - p.free, 10);
        let one = map_difficulty(GeneratorKind::EquivalenceCore, &knobs(&[("ratio", 1.0)]), 20).unwrap();
        let StructuralParams::EquivalenceCore(one) = one else { unreachable!() };
        assert_eq!(one.free, one.num_vars.div_ceil(2));
    }

    #[test]
    fn bridge_position_endpoints() {
        for (s, expected) in [(0.0, 1), (1.0, 74)] {
            let p = map_difficulty(GeneratorKind::MonoBridge, &knobs(&[("position", s)]), 75).unwrap();
            let StructuralParams::MonoBridge(p) = p else { unreachable!() };
            assert_eq!(p.bridge_pos, expected);
            assert_eq!(p.num_clauses(), 75);
        }
    }

    #[test]
    fn backbone_hits_target() {
        for &target in &[20usize, 50, 75, 100] {
            for &beta in &KNOB_GRID {
                let p = map_difficulty(GeneratorKind::Backbone, &knobs(&[("beta", beta)]), target).unwrap();
                let StructuralParams::Backbone(p) = p else { unreachable!() };
                assert!(p.num_clauses().abs_diff(target) <= 1, "{target} {beta} {p:?}");
            }
        }
    }

    #[test]
    fn pi_orientation() {
        let get = |pi| {
            let StructuralParams::Backbone(p) =
                map_difficulty(GeneratorKind::Backbone, &knobs(&[("pi", pi)]), 20).unwrap()
            else {
                unreachable!()
            };
            p.orientation
        };
        assert_eq!(get(0.0), Orientation::Negative);
        assert_eq!(get(0.5), Orientation::Random);
        assert_eq!(get(1.0), Orientation::Positive);
    }

    #[test]
    fn knob_errors() {
        assert!(matches!(
            map_difficulty(GeneratorKind::Backbone, &knobs(&[("split", 0.5)]), 20),
            Err(GenError::UnknownKnob { .. })
        ));
        assert!(matches!(
            map_difficulty(GeneratorKind::Backbone, &knobs(&[("beta", 1.5)]), 20),
            Err(GenError::KnobRange { .. })
        ));
        assert!(matches!(
            map_difficulty(GeneratorKind::Backbone, &knobs(&[("beta", 0.0), ("mono_density", 0.0)]), 20),
            Err(GenError::Infeasible { .. })
        ));
        assert!(map_difficulty(GeneratorKind::ImplicationCycle, &knobs(&[]), 2).is_err());
    }
}
