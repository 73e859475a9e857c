//! Satisfiability-preserving transforms: clause shuffling, filler injection,
//! variable renaming and duplication into disjoint copies.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::logic::{Assignment, Clause, Formula, Lit, Var};
use crate::rng::{rng_from_seed, InstanceRng};

/// A bijection on variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Renaming {
    map: Vec<Var>,
}

impl Renaming {
    pub fn identity(num_vars: u32) -> Self {
        Renaming { map: (0..num_vars).map(Var).collect() }
    }

    /// Uniform random permutation of `0..num_vars`, shifted by `offset`.
    pub fn random(num_vars: u32, offset: u32, rng: &mut impl Rng) -> Self {
        let mut map: Vec<Var> = (offset..offset + num_vars).map(Var).collect();
        map.shuffle(rng);
        Renaming { map }
    }

    pub fn apply(&self, v: Var) -> Var {
        self.map[v.index()]
    }

    pub fn apply_lit(&self, l: Lit) -> Lit {
        Lit::new(self.apply(l.var()), l.is_positive())
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        c.map_vars(|v| self.apply(v))
    }

    pub fn image(&self) -> &[Var] {
        &self.map
    }

    /// Writes `a`'s values to the renamed positions of `target`.
    pub fn transport(&self, a: &Assignment, target: &mut Assignment) {
        for (i, &to) in self.map.iter().enumerate() {
            target.set(to, a.get(Var(i as u32)));
        }
    }
}

pub fn shuffle_clauses(f: &Formula, seed: u64) -> Formula {
    let mut clauses = f.clauses().to_vec();
    clauses.shuffle(&mut rng_from_seed(seed));
    Formula::new(f.num_vars(), clauses).expect("same variables")
}

/// Applies `renaming` (which must cover all of `f`'s variables and land in
/// `0..num_vars`).
pub fn apply_renaming(f: &Formula, renaming: &Renaming, num_vars: u32) -> Formula {
    let clauses = f.clauses().iter().map(|c| renaming.apply_clause(c)).collect();
    Formula::new(num_vars, clauses).expect("renaming stays within range")
}

pub fn rename_variables(f: &Formula, seed: u64) -> (Formula, Renaming) {
    let renaming = Renaming::random(f.num_vars(), 0, &mut rng_from_seed(seed));
    (apply_renaming(f, &renaming, f.num_vars()), renaming)
}

/// A random 2-clause over `pool` that `hidden` satisfies; no tautologies.
/// With a single-variable pool the clause is a unit.
pub(crate) fn planted_filler(rng: &mut InstanceRng, pool: &[Var], hidden: impl Fn(Var) -> bool) -> Clause {
    let (a, b) = if pool.len() >= 2 {
        let i = rng.random_range(0..pool.len());
        let mut j = rng.random_range(0..pool.len() - 1);
        if j >= i {
            j += 1;
        }
        (pool[i], pool[j])
    } else {
        (pool[0], pool[0])
    };
    let mut first = Lit::new(a, rng.random_bool(0.5));
    let mut second = if a == b { first } else { Lit::new(b, rng.random_bool(0.5)) };
    let sat = |l: Lit| hidden(l.var()) == l.is_positive();
    if !sat(first) && !sat(second) {
        if a == b {
            first = !first;
            second = first;
        } else if rng.random_bool(0.5) {
            first = !first;
        } else {
            second = !second;
        }
    }
    Clause::new(first, second)
}

#[derive(Debug, Clone)]
pub struct FillerOutcome {
    pub formula: Formula,
    /// Fresh variables introduced, with the hidden values that satisfy every
    /// filler clause.
    pub fresh: Vec<(Var, bool)>,
}

impl FillerOutcome {
    /// Extends a witness of the original formula to the padded one.
    pub fn extend_witness(&self, base: &Assignment) -> Assignment {
        let mut values = base.values().to_vec();
        values.resize(self.formula.num_vars() as usize, false);
        let mut a = Assignment::new(values);
        for &(v, b) in &self.fresh {
            a.set(v, b);
        }
        a
    }
}

/// Number of fresh variables for `r` fillers: `round(r·n/m)`, at least 2.
pub fn fresh_var_count(num_vars: u32, num_clauses: usize, fillers: usize) -> u32 {
    let ratio = if num_clauses == 0 { 1.0 } else { f64::from(num_vars) / num_clauses as f64 };
    ((fillers as f64 * ratio).round() as u32).max(2)
}

/// Appends `r` clauses over fresh variables, each satisfied by a hidden
/// random assignment to those variables.
pub fn add_fillers(f: &Formula, r: usize, seed: u64) -> FillerOutcome {
    if r == 0 {
        return FillerOutcome { formula: f.clone(), fresh: Vec::new() };
    }
    let mut rng = rng_from_seed(seed);
    let base = f.num_vars();
    let fresh_count = fresh_var_count(base, f.num_clauses(), r);
    let pool: Vec<Var> = (base..base + fresh_count).map(Var).collect();
    let hidden: Vec<bool> = pool.iter().map(|_| rng.random_bool(0.5)).collect();
    let mut clauses = f.clauses().to_vec();
    for _ in 0..r {
        clauses.push(planted_filler(&mut rng, &pool, |v| hidden[(v.0 - base) as usize]));
    }
    FillerOutcome {
        formula: Formula::new(base + fresh_count, clauses).expect("fresh block in range"),
        fresh: pool.into_iter().zip(hidden).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Copies concatenated in order.
    #[default]
    Grouped,
    /// Copies merged at random, each copy keeping its internal order.
    Interleaved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateOptions {
    pub copies: u32,
    pub layout: Layout,
    /// Shuffle clause order inside each renamed copy (the first copy is kept).
    pub per_copy_shuffle: bool,
    /// Swap the position of this clause of the first copy with its renamed
    /// counterpart in the second copy.
    #[serde(default)]
    pub trigger: Option<usize>,
}

impl DuplicateOptions {
    pub fn new(copies: u32, layout: Layout) -> Self {
        DuplicateOptions { copies, layout, per_copy_shuffle: false, trigger: None }
    }
}

#[derive(Debug, Clone)]
pub struct Duplicated {
    pub formula: Formula,
    /// Renaming of copy `i`; copy 0 is the identity.
    pub renamings: Vec<Renaming>,
    /// Copy id of each output clause.
    pub copy_of: Vec<u32>,
    /// Index into the base clause list of each output clause.
    pub source_index: Vec<usize>,
}

impl Duplicated {
    /// Combines a witness of the base formula into one for the copies.
    pub fn extend_witness(&self, base: &Assignment) -> Assignment {
        let mut a = Assignment::all(self.formula.num_vars(), false);
        for r in &self.renamings {
            r.transport(base, &mut a);
        }
        a
    }
}

/// `d` pairwise-disjoint renamed copies of `f`. Copy `i` lives on variables
/// `i·n..(i+1)·n`, with a random permutation inside each block for `i ≥ 1`.
///
/// Panics if `copies < 2`.
pub fn duplicate(f: &Formula, opts: &DuplicateOptions, seed: u64) -> Duplicated {
    assert!(opts.copies >= 2, "duplicate needs at least two copies");
    let mut rng = rng_from_seed(seed);
    let n = f.num_vars();
    let d = opts.copies;
    let mut renamings = vec![Renaming::identity(n)];
    for i in 1..d {
        renamings.push(Renaming::random(n, i * n, &mut rng));
    }

    // per-copy clause order, as indices into the base list
    let m = f.num_clauses();
    let orders: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            let mut order: Vec<usize> = (0..m).collect();
            if opts.per_copy_shuffle && i > 0 {
                order.shuffle(&mut rng);
            }
            order
        })
        .collect();

    let mut sequence: Vec<u32> = (0..d).flat_map(|i| std::iter::repeat_n(i, m)).collect();
    if opts.layout == Layout::Interleaved {
        sequence.shuffle(&mut rng);
    }

    let mut cursor = vec![0usize; d as usize];
    let mut clauses = Vec::with_capacity(sequence.len());
    let mut source_index = Vec::with_capacity(sequence.len());
    for &copy in &sequence {
        let src = orders[copy as usize][cursor[copy as usize]];
        cursor[copy as usize] += 1;
        clauses.push(renamings[copy as usize].apply_clause(&f.clauses()[src]));
        source_index.push(src);
    }
    let mut copy_of = sequence;

    if let Some(t) = opts.trigger.filter(|&t| t < m) {
        let a = (0..copy_of.len()).find(|&i| copy_of[i] == 0 && source_index[i] == t);
        let b = (0..copy_of.len()).find(|&i| copy_of[i] == 1 && source_index[i] == t);
        if let (Some(a), Some(b)) = (a, b) {
            clauses.swap(a, b);
            copy_of.swap(a, b);
            source_index.swap(a, b);
        }
    }

    Duplicated {
        formula: Formula::new(n * d, clauses).expect("copies within blocks"),
        renamings,
        copy_of,
        source_index,
    }
}

/// A tagged perturbation that can be stored alongside an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    Shuffle,
    AddFillers { count: usize },
    Rename,
    Duplicate(DuplicateOptions),
}

impl Perturbation {
    /// Applies the transform and maps a witness of the input, when given, to
    /// one of the output.
    pub fn apply(&self, f: &Formula, witness: Option<&Assignment>, seed: u64) -> (Formula, Option<Assignment>) {
        match self {
            Perturbation::Shuffle => (shuffle_clauses(f, seed), witness.cloned()),
            Perturbation::AddFillers { count } => {
                let out = add_fillers(f, *count, seed);
                let w = witness.map(|w| out.extend_witness(w));
                (out.formula, w)
            }
            Perturbation::Rename => {
                let (g, r) = rename_variables(f, seed);
                let w = witness.map(|w| {
                    let mut a = Assignment::all(g.num_vars(), false);
                    r.transport(w, &mut a);
                    a
                });
                (g, w)
            }
            Perturbation::Duplicate(opts) => {
                let out = duplicate(f, opts, seed);
                let w = witness.map(|w| out.extend_witness(w));
                (out.formula, w)
            }
        }
    }
}
