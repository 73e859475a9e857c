use super::{Formula, Lit};

/// Directed graph over the `2n` literals of a formula.
///
/// Adjacency is stored in CSR form. Every clause contributes exactly two
/// edges, so a unit clause `l ∨ l` yields the edge `¬l → l` twice.
#[derive(Debug, Clone)]
pub struct ImplicationGraph {
    num_vars: u32,
    edges: Vec<(Lit, Lit)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl ImplicationGraph {
    pub fn num_vertices(&self) -> usize {
        self.num_vars as usize * 2
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn edges(&self) -> &[(Lit, Lit)] {
        &self.edges
    }

    pub fn successors(&self, lit: Lit) -> impl Iterator<Item = Lit> + '_ {
        let v = lit.code();
        self.targets[self.offsets[v]..self.offsets[v + 1]].iter().map(|&t| Lit::from_code(t as usize))
    }

    pub fn has_edge(&self, from: Lit, to: Lit) -> bool {
        self.successors(from).any(|s| s == to)
    }

    fn successor_range(&self, v: usize) -> (usize, usize) {
        (self.offsets[v], self.offsets[v + 1])
    }
}

pub fn build_implication_graph(f: &Formula) -> ImplicationGraph {
    let n = f.num_vars() as usize * 2;
    let mut edges = Vec::with_capacity(f.num_clauses() * 2);
    for c in f.clauses() {
        edges.push((!c.first, c.second));
        edges.push((!c.second, c.first));
    }
    let mut offsets = vec![0usize; n + 1];
    for (from, _) in &edges {
        offsets[from.code() + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0u32; edges.len()];
    for (from, to) in &edges {
        targets[fill[from.code()]] = to.code() as u32;
        fill[from.code()] += 1;
    }
    ImplicationGraph { num_vars: f.num_vars(), edges, offsets, targets }
}

/// Strongly connected components of an implication graph.
///
/// Component ids are assigned in the order Tarjan's algorithm closes them,
/// which is a reverse topological order of the condensation: if there is an
/// edge from component `a` to a different component `b` then `b < a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccResult {
    component: Vec<u32>,
    count: usize,
}

impl SccResult {
    pub fn component_of(&self, lit: Lit) -> u32 {
        self.component[lit.code()]
    }

    pub fn num_components(&self) -> usize {
        self.count
    }

    pub fn components(&self) -> &[u32] {
        &self.component
    }

    /// Component ids, sinks first.
    pub fn reverse_topological_order(&self) -> impl Iterator<Item = u32> {
        0..self.count as u32
    }
}

/// Iterative Tarjan; no recursion, so graph size is only bounded by memory.
pub fn compute_sccs(g: &ImplicationGraph) -> SccResult {
    const UNSET: u32 = u32::MAX;
    let n = g.num_vertices();
    let mut component = vec![UNSET; n];
    let mut order = vec![0u32; n]; // discovery time + 1, 0 = unvisited
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    // (vertex, next successor slot)
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut timer = 0u32;
    let mut count = 0u32;

    for root in 0..n {
        if order[root] != 0 {
            continue;
        }
        timer += 1;
        order[root] = timer;
        low[root] = timer;
        stack.push(root as u32);
        on_stack[root] = true;
        call.push((root as u32, g.successor_range(root).0));

        while let Some(&mut (v, ref mut slot)) = call.last_mut() {
            let v = v as usize;
            let end = g.successor_range(v).1;
            if *slot < end {
                let w = g.targets[*slot] as usize;
                *slot += 1;
                if order[w] == 0 {
                    timer += 1;
                    order[w] = timer;
                    low[w] = timer;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, g.successor_range(w).0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
                continue;
            }
            call.pop();
            if low[v] == order[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
            if let Some(&(parent, _)) = call.last() {
                let p = parent as usize;
                low[p] = low[p].min(low[v]);
            }
        }
    }
    SccResult { component, count: count as usize }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Clause, Var};

    fn lit(v: u32, pos: bool) -> Lit {
        Lit::new(Var(v), pos)
    }

    #[test]
    fn single_clause_edges() {
        let (a, b) = (lit(0, true), lit(1, false));
        let f = Formula::new(2, vec![Clause::new(a, b)]).unwrap();
        let g = build_implication_graph(&f);
        assert_eq!(g.edges(), &[(!a, b), (!b, a)]);
    }

    #[test]
    fn empty_formula_has_isolated_vertices() {
        let g = build_implication_graph(&Formula::empty(3));
        assert_eq!(g.num_vertices(), 6);
        assert!(g.edges().is_empty());
        let scc = compute_sccs(&g);
        assert_eq!(scc.num_components(), 6);
    }

    #[test]
    fn two_cycle_is_one_component() {
        // x0 -> x1 and x1 -> x0
        let f = Formula::new(
            2,
            vec![Clause::implication(lit(0, true), lit(1, true)), Clause::implication(lit(1, true), lit(0, true))],
        )
        .unwrap();
        let scc = compute_sccs(&build_implication_graph(&f));
        assert_eq!(scc.component_of(lit(0, true)), scc.component_of(lit(1, true)));
        assert_ne!(scc.component_of(lit(0, true)), scc.component_of(lit(0, false)));
    }

    #[test]
    fn component_ids_are_reverse_topological() {
        // chain x0 -> x1 -> x2
        let f = Formula::new(
            3,
            vec![Clause::implication(lit(0, true), lit(1, true)), Clause::implication(lit(1, true), lit(2, true))],
        )
        .unwrap();
        let g = build_implication_graph(&f);
        let scc = compute_sccs(&g);
        for &(u, v) in g.edges() {
            assert!(scc.component_of(v) <= scc.component_of(u));
        }
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000u32;
        let clauses = (0..n - 1).map(|i| Clause::implication(lit(i, true), lit(i + 1, true))).collect();
        let f = Formula::new(n, clauses).unwrap();
        let scc = compute_sccs(&build_implication_graph(&f));
        assert_eq!(scc.num_components(), 2 * n as usize);
    }
}
