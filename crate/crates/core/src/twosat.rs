//! 2-SAT by strongly connected components of the implication graph.

/// A literal: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub value: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, value: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, value: false }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.value)
    }

    fn negate(self) -> Self {
        Lit {
            var: self.var,
            value: !self.value,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TwoSat {
    vars: usize,
    graph: Vec<Vec<usize>>,
}

impl TwoSat {
    pub fn new(vars: usize) -> Self {
        TwoSat {
            vars,
            graph: vec![Vec::new(); 2 * vars],
        }
    }

    /// Adds the clause `a ∨ b`.
    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        assert!(
            a.var < self.vars && b.var < self.vars,
            "literal out of range"
        );
        self.graph[a.negate().node()].push(b.node());
        self.graph[b.negate().node()].push(a.node());
    }

    /// A satisfying assignment, or `None`.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = tarjan(&self.graph);
        // Tarjan numbers components in reverse topological order
        (0..self.vars)
            .map(|v| {
                let (t, f) = (comp[2 * v], comp[2 * v + 1]);
                (t != f).then_some(t < f)
            })
            .collect()
    }
}

/// Component id per node; ids follow reverse topological order.
fn tarjan(graph: &[Vec<usize>]) -> Vec<usize> {
    let n = graph.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // explicit call stack of (node, next edge position)
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = calls.last_mut() {
            if *i < graph[v].len() {
                let w = graph[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component on stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}
