//! Exact graph invariants used as pipeline filters.

use serde::{Deserialize, Serialize};

use crate::bits::{bit, members, VertexSet};
use crate::graph::Graph;

/// Summary invariants of one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub edge_count: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub clique_number: usize,
    pub independence_number: usize,
    pub chromatic_number: usize,
}

impl InvariantProfile {
    pub fn of(g: &Graph) -> Self {
        let clique_number = clique_number(g);
        InvariantProfile {
            edge_count: g.size(),
            min_degree: g.min_degree(),
            max_degree: g.max_degree(),
            clique_number,
            independence_number: independence_number(g),
            chromatic_number: chromatic_number_from(g, clique_number),
        }
    }
}

/// Size of a maximum clique.
pub fn clique_number(g: &Graph) -> usize {
    clique_number_within(g.adjacency(), g.vertex_set())
}

/// Size of a maximum clique of the subgraph induced by `set`.
///
/// Branch and bound over bitset candidate sets; the bound is a greedy
/// colouring of the candidates, with vertices taken in descending degree order.
pub fn clique_number_within(adj: &[VertexSet], set: VertexSet) -> usize {
    if set == 0 {
        return 0;
    }
    // relabel so that bit order is descending degree within `set`
    let mut order: Vec<usize> = members(set).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse((adj[v] & set).count_ones()), v));
    let mut pos = [0usize; 64];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let local: Vec<VertexSet> = order
        .iter()
        .map(|&v| members(adj[v] & set).fold(0, |acc, u| acc | bit(pos[u])))
        .collect();
    let mut best = 1;
    expand(&local, crate::bits::low_mask(order.len()), 0, &mut best);
    best
}

/// `true` if the subgraph induced by `set` contains a clique on `k` vertices.
pub fn has_clique_of_size(adj: &[VertexSet], set: VertexSet, k: usize) -> bool {
    fn go(adj: &[VertexSet], cand: VertexSet, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < need {
            return false;
        }
        let mut rest = cand;
        while rest != 0 {
            if (rest.count_ones() as usize) < need {
                return false;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if go(adj, rest & adj[v], need - 1) {
                return true;
            }
        }
        false
    }
    go(adj, set, k)
}

fn expand(adj: &[VertexSet], cand: VertexSet, size: usize, best: &mut usize) {
    // greedy colouring of candidates: colour classes are independent sets
    let mut order = [0usize; 64];
    let mut bound = [0usize; 64];
    let mut count = 0;
    let mut uncolored = cand;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !bit(v) & !adj[v];
            uncolored &= !bit(v);
            order[count] = v;
            bound[count] = color;
            count += 1;
        }
    }
    let mut cand = cand;
    for i in (0..count).rev() {
        if size + bound[i] <= *best {
            return;
        }
        let v = order[i];
        let next = cand & adj[v];
        if next == 0 {
            if size + 1 > *best {
                *best = size + 1;
            }
        } else {
            expand(adj, next, size + 1, best);
        }
        cand &= !bit(v);
    }
}

pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Independence number of the subgraph induced by `set`.
pub fn independence_number_within(adj: &[VertexSet], set: VertexSet) -> usize {
    let co: Vec<VertexSet> = members(set).fold(vec![0; adj.len()], |mut co, v| {
        co[v] = set & !adj[v] & !bit(v);
        co
    });
    clique_number_within(&co, set)
}

/// Decides whether `g` has a proper colouring with at most `k` colours.
///
/// DSATUR-style backtracking. A greedy clique is coloured first with distinct
/// colours; new colours are only opened in increasing order.
pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if k >= n {
        return true;
    }
    if k == 0 {
        return false;
    }
    let adj = g.adjacency();
    let seed = greedy_clique(adj, g.vertex_set());
    if seed.len() > k {
        return false;
    }
    let mut classes = vec![0u64; k];
    let mut colored = 0u64;
    for (c, &v) in seed.iter().enumerate() {
        classes[c] |= bit(v);
        colored |= bit(v);
    }
    color_search(adj, g.vertex_set(), &mut classes, seed.len(), colored)
}

fn greedy_clique(adj: &[VertexSet], set: VertexSet) -> Vec<usize> {
    let mut clique = Vec::new();
    let mut cand = set;
    while cand != 0 {
        let v = members(cand)
            .max_by_key(|&v| ((adj[v] & cand).count_ones(), std::cmp::Reverse(v)))
            .expect("non-empty");
        clique.push(v);
        cand &= adj[v];
    }
    clique
}

fn color_search(
    adj: &[VertexSet],
    all: VertexSet,
    classes: &mut [VertexSet],
    used: usize,
    colored: VertexSet,
) -> bool {
    let uncolored = all & !colored;
    if uncolored == 0 {
        return true;
    }
    let k = classes.len();
    // pick the vertex with the fewest available colours, then most uncoloured neighbours
    let mut pick = usize::MAX;
    let mut pick_key = (usize::MAX, 0u32);
    for v in members(uncolored) {
        let sat = classes[..used].iter().filter(|&&c| c & adj[v] != 0).count();
        let avail = used - sat + usize::from(used < k);
        let key = (avail, u32::MAX - (adj[v] & uncolored).count_ones());
        if key < pick_key {
            pick_key = key;
            pick = v;
            if avail == 0 {
                return false;
            }
        }
    }
    let v = pick;
    for c in 0..used {
        if classes[c] & adj[v] == 0 {
            classes[c] |= bit(v);
            let ok = color_search(adj, all, classes, used, colored | bit(v));
            classes[c] &= !bit(v);
            if ok {
                return true;
            }
        }
    }
    if used < k {
        classes[used] |= bit(v);
        let ok = color_search(adj, all, classes, used + 1, colored | bit(v));
        classes[used] &= !bit(v);
        if ok {
            return true;
        }
    }
    false
}

/// Least `k` with [`is_k_colorable`], searched upward from the clique number.
pub fn chromatic_number(g: &Graph) -> usize {
    chromatic_number_from(g, clique_number(g))
}

fn chromatic_number_from(g: &Graph, lower: usize) -> usize {
    (lower.max(1)..=g.order())
        .find(|&k| is_k_colorable(g, k))
        .unwrap_or(g.order())
}

/// `true` if `N(u) ⊆ N(v)` for some ordered pair of distinct vertices.
pub fn is_sperner(g: &Graph) -> bool {
    let adj = g.adjacency();
    (0..g.order()).any(|u| (0..g.order()).any(|v| u != v && adj[u] & !adj[v] == 0))
}

/// `α(G(v)) ≤ d(v) − 3`, the neighbourhood condition every minimal Ramsey graph meets.
pub fn neighborhood_independence_ok(g: &Graph, v: usize) -> bool {
    let nb = g.neighbors(v);
    let d = nb.count_ones() as usize;
    let alpha = independence_number_within(g.adjacency(), nb);
    alpha + 3 <= d
}
