use std::collections::VecDeque;

use super::graph::{build_implication_graph, compute_sccs, ImplicationGraph};
use super::{Assignment, Formula, Lit, LogicError, Var};
use crate::par::{self, Execution};

pub const DEFAULT_VAR_LIMIT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    Unsat(Var),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// Decides a 2-CNF formula through the SCC criterion.
///
/// A variable is set true when its positive literal's component precedes the
/// negative one in the component numbering (i.e. comes later topologically).
pub fn decide(f: &Formula) -> SatResult {
    let g = build_implication_graph(f);
    let scc = compute_sccs(&g);
    let mut values = Vec::with_capacity(f.num_vars() as usize);
    for v in f.vars() {
        let pos = scc.component_of(v.positive());
        let neg = scc.component_of(v.negative());
        if pos == neg {
            return SatResult::Unsat(v);
        }
        values.push(pos < neg);
    }
    SatResult::Sat(Assignment::new(values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub valid: bool,
    /// Indices of clauses with both literals false.
    pub violated: Vec<usize>,
}

pub fn check_witness(f: &Formula, a: &Assignment) -> Result<WitnessReport, LogicError> {
    if a.len() < f.num_vars() as usize {
        return Err(LogicError::MissingVariables((a.len() as u32..f.num_vars()).collect()));
    }
    let violated: Vec<usize> =
        f.clauses().iter().enumerate().filter(|(_, c)| !c.eval(a.values())).map(|(i, _)| i).collect();
    Ok(WitnessReport { valid: violated.is_empty(), violated })
}

/// Bit-level clause evaluator used by exhaustive enumeration.
struct PackedClauses {
    // (var shift, wanted bit) for both literals
    lits: Vec<[(u32, u32); 2]>,
}

impl PackedClauses {
    fn new(f: &Formula) -> Self {
        let pack = |l: Lit| (l.var().0, u32::from(l.is_positive()));
        PackedClauses { lits: f.clauses().iter().map(|c| [pack(c.first), pack(c.second)]).collect() }
    }

    #[inline]
    fn satisfied(&self, bits: u32) -> bool {
        self.lits.iter().all(|[(a, wa), (b, wb)]| (bits >> a) & 1 == *wa || (bits >> b) & 1 == *wb)
    }
}

fn check_capacity(f: &Formula, var_limit: u32) -> Result<(), LogicError> {
    let limit = var_limit.min(31);
    if f.num_vars() > limit {
        return Err(LogicError::Capacity { num_vars: f.num_vars(), limit });
    }
    Ok(())
}

const CHUNK_BITS: u32 = 12;

/// Exact model count by enumerating all `2^n` assignments.
pub fn count_models(f: &Formula, var_limit: u32) -> Result<u64, LogicError> {
    count_models_with(f, var_limit, Execution::default())
}

pub fn count_models_with(f: &Formula, var_limit: u32, exec: Execution) -> Result<u64, LogicError> {
    check_capacity(f, var_limit)?;
    let packed = PackedClauses::new(f);
    let total: u64 = 1u64 << f.num_vars();
    let chunk = 1u64 << CHUNK_BITS;
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let counts = par::map(exec, &chunks, |&c| {
        let start = c * chunk;
        let end = (start + chunk).min(total);
        (start..end).filter(|&bits| packed.satisfied(bits as u32)).count() as u64
    });
    Ok(counts.into_iter().sum())
}

/// Every model of `f`, in increasing binary order (variable 0 is the low bit).
pub fn brute_force_models(f: &Formula, var_limit: u32) -> Result<Vec<Assignment>, LogicError> {
    check_capacity(f, var_limit)?;
    let packed = PackedClauses::new(f);
    let n = f.num_vars();
    Ok((0..1u64 << n)
        .filter(|&bits| packed.satisfied(bits as u32))
        .map(|bits| Assignment::new((0..n).map(|i| (bits >> i) & 1 == 1).collect()))
        .collect())
}

/// A closed walk `l → … → ¬l → … → l` in the implication graph.
///
/// `literals` starts and ends with `l`; `¬l` occurs in between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofCycle {
    pub literals: Vec<Lit>,
}

impl ProofCycle {
    pub fn pivot(&self) -> Lit {
        self.literals[0]
    }

    pub fn num_edges(&self) -> usize {
        self.literals.len() - 1
    }
}

pub fn find_proof_cycle(f: &Formula) -> Option<ProofCycle> {
    let g = build_implication_graph(f);
    let scc = compute_sccs(&g);
    let var = f.vars().find(|v| scc.component_of(v.positive()) == scc.component_of(v.negative()))?;
    let pivot = var.positive();
    let mut literals = shortest_path(&g, pivot, !pivot)?;
    let back = shortest_path(&g, !pivot, pivot)?;
    literals.extend_from_slice(&back[1..]);
    Some(ProofCycle { literals })
}

/// BFS path from `from` to `to`, both endpoints included.
fn shortest_path(g: &ImplicationGraph, from: Lit, to: Lit) -> Option<Vec<Lit>> {
    const NONE: u32 = u32::MAX;
    let mut parent = vec![NONE; g.num_vertices()];
    parent[from.code()] = from.code() as u32;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = Lit::from_code(parent[cur.code()] as usize);
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for w in g.successors(u) {
            if parent[w.code()] == NONE {
                parent[w.code()] = u.code() as u32;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Clause;

    fn lit(v: u32, pos: bool) -> Lit {
        Lit::new(Var(v), pos)
    }

    /// (¬v1∨¬v2),(v2∨v3),(¬v3∨¬v1),(v1∨v4),(¬v4∨¬v5),(v5∨v1), v_i = x_{i-1}
    pub(crate) fn appendix_unsat_core() -> Formula {
        let c = |a: (u32, bool), b: (u32, bool)| Clause::new(lit(a.0, a.1), lit(b.0, b.1));
        Formula::new(
            5,
            vec![
                c((0, false), (1, false)),
                c((1, true), (2, true)),
                c((2, false), (0, false)),
                c((0, true), (3, true)),
                c((3, false), (4, false)),
                c((4, true), (0, true)),
            ],
        )
        .unwrap()
    }

    /// p=x0, q=x1, r=x2: (¬q∨¬p),(p∨q),(¬r∨p),(¬p∨r)
    fn appendix_sat_example() -> Formula {
        let (p, q, r) = (0, 1, 2);
        Formula::new(
            3,
            vec![
                Clause::new(lit(q, false), lit(p, false)),
                Clause::new(lit(p, true), lit(q, true)),
                Clause::new(lit(r, false), lit(p, true)),
                Clause::new(lit(p, false), lit(r, true)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn appendix_core_is_unsat_on_v1() {
        let f = appendix_unsat_core();
        assert_eq!(build_implication_graph(&f).edges().len(), 12);
        assert_eq!(decide(&f), SatResult::Unsat(Var(0)));
        let scc = compute_sccs(&build_implication_graph(&f));
        assert_eq!(scc.component_of(lit(0, true)), scc.component_of(lit(0, false)));
        let cycle = find_proof_cycle(&f).unwrap();
        assert!(cycle.num_edges() <= 6);
        assert_eq!(cycle.pivot().var(), Var(0));
        assert_eq!(count_models(&f, 20), Ok(0));
    }

    #[test]
    fn appendix_sat_example_has_two_models() {
        let f = appendix_sat_example();
        assert!(decide(&f).is_sat());
        assert_eq!(count_models(&f, 20), Ok(2));
        assert!(find_proof_cycle(&f).is_none());
    }

    #[test]
    fn witness_checks() {
        let f = appendix_sat_example();
        let ok = check_witness(&f, &Assignment::new(vec![true, false, true])).unwrap();
        assert!(ok.valid);
        let bad = check_witness(&f, &Assignment::new(vec![true, true, true])).unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.violated, vec![0]);
        assert_eq!(check_witness(&f, &Assignment::new(vec![true])), Err(LogicError::MissingVariables(vec![1, 2])));
        assert!(check_witness(&Formula::empty(2), &Assignment::all(2, true)).unwrap().valid);
    }

    #[test]
    fn empty_formula_is_sat() {
        match decide(&Formula::empty(4)) {
            SatResult::Sat(a) => assert_eq!(a.len(), 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(count_models(&Formula::empty(4), 20), Ok(16));
    }

    #[test]
    fn unit_contradiction_cycle() {
        let x = lit(0, true);
        let f = Formula::new(1, vec![Clause::unit(x), Clause::unit(!x)]).unwrap();
        let cycle = find_proof_cycle(&f).unwrap();
        assert_eq!(cycle.literals, vec![x, !x, x]);
    }

    #[test]
    fn tautology_is_harmless() {
        let f = Formula::new(1, vec![Clause::new(lit(0, true), lit(0, false))]).unwrap();
        assert!(decide(&f).is_sat());
        assert_eq!(count_models(&f, 20), Ok(2));
    }

    #[test]
    fn capacity_error() {
        assert_eq!(count_models(&Formula::empty(21), 20), Err(LogicError::Capacity { num_vars: 21, limit: 20 }));
    }

    #[test]
    fn sequential_and_parallel_counts_agree() {
        let f = appendix_sat_example();
        let big = Formula::new(16, f.clauses().to_vec()).unwrap();
        assert_eq!(
            count_models_with(&big, 20, Execution::Sequential),
            count_models_with(&big, 20, Execution::Parallel)
        );
    }
}
