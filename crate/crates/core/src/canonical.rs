//! Canonical labeling, isomorphism testing and automorphism group order.
//!
//! Individualization-refinement: the unit partition is refined to an
//! equitable ordered partition, then the search branches on the first
//! smallest non-singleton cell. Every leaf (discrete partition) yields a
//! relabeled adjacency matrix; the canonical form is the least one. Two leaves
//! with equal matrices give an automorphism, which is used to skip equivalent
//! subtrees. The automorphisms found generate the full group, and its order is
//! the product of the first-path orbit sizes.

use std::collections::HashSet;
use std::hash::Hash;
use std::sync::Mutex;

use thiserror::Error;

use crate::bits::{bit, members, VertexSet};
use crate::graph::{map_set, Graph};
use crate::graph6::to_graph6;

/// Largest order accepted by [`automorphism_count`].
pub const AUT_COUNT_MAX_ORDER: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("automorphism counting supports at most {AUT_COUNT_MAX_ORDER} vertices, got {0}")]
    TooLarge(usize),
}

/// graph6 encoding of the canonically relabeled graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Order of the automorphism group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutomorphismCount(pub u128);

/// Result of a full canonical-labeling search.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `lab[i]` is the vertex placed at canonical position `i`.
    pub lab: Vec<usize>,
    /// The relabeled graph; equal for isomorphic inputs.
    pub canonical: Graph,
    /// Generators of the automorphism group, as `perm[v]`.
    pub generators: Vec<Vec<usize>>,
    /// Orbit representative (least vertex) for every vertex.
    pub orbits: Vec<usize>,
    /// Group order, `None` if it does not fit in `u128`.
    pub group_order: Option<u128>,
}

impl Labeling {
    /// Canonical position of every vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.lab.len()];
        for (i, &v) in self.lab.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let n = g.order();
    let mut search = Search {
        adj: g.adjacency(),
        n,
        first: None,
        best: None,
        gens: Vec::new(),
    };
    let mut cells = vec![g.vertex_set()];
    let mut queue = vec![g.vertex_set()];
    refine(g.adjacency(), n, &mut cells, &mut queue);
    let mut path = Vec::with_capacity(n);
    search.explore(cells, &mut path);

    let first = search.first.take().expect("search reaches a leaf");
    let best = search.best.take().expect("search reaches a leaf");

    let mut group_order = Some(1u128);
    for level in 0..first.path.len() {
        let prefix = &first.path[..level];
        let uf = orbit_partition(n, &search.gens, prefix);
        let v = first.path[level];
        let size = (0..n).filter(|&u| uf[u] == uf[v]).count() as u128;
        group_order = group_order.and_then(|o| o.checked_mul(size));
    }
    let orbits = orbit_partition(n, &search.gens, &[]);
    let canonical = Graph::from_adjacency_unchecked(best.cert.clone());
    Labeling {
        lab: best.lab,
        canonical,
        generators: search.gens,
        orbits,
        group_order,
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm(to_graph6(&canonical_labeling(g).canonical))
}

/// The canonically relabeled graph; cheaper to hash than the graph6 form.
pub fn canonical_graph(g: &Graph) -> Graph {
    canonical_labeling(g).canonical
}

pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    g1.order() == g2.order()
        && g1.size() == g2.size()
        && g1
            .degrees()
            .iter()
            .copied()
            .fold(0u128, |a, d| a + (1u128 << d))
            == g2
                .degrees()
                .iter()
                .copied()
                .fold(0u128, |a, d| a + (1u128 << d))
        && canonical_graph(g1) == canonical_graph(g2)
}

pub fn automorphism_count(g: &Graph) -> Result<AutomorphismCount, CanonError> {
    if g.order() > AUT_COUNT_MAX_ORDER {
        return Err(CanonError::TooLarge(g.order()));
    }
    let order = canonical_labeling(g)
        .group_order
        .expect("order of a group on at most 32 points fits in u128");
    Ok(AutomorphismCount(order))
}

/// Yields the first graph of every isomorphism class, in input order.
pub fn dedupe_stream<I>(graphs: I) -> impl Iterator<Item = Graph>
where
    I: IntoIterator<Item = Graph>,
{
    let mut seen = HashSet::new();
    graphs
        .into_iter()
        .filter(move |g| seen.insert(canonical_graph(g)))
}

/// Shared insert-if-absent set of isomorphism classes for parallel streams.
#[derive(Default)]
pub struct Deduper {
    seen: Mutex<HashSet<Graph>>,
}

impl Deduper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` the first time a graph of this isomorphism class is offered.
    pub fn insert(&self, g: &Graph) -> bool {
        let key = canonical_graph(g);
        self.insert_canonical(key)
    }

    /// Like [`Deduper::insert`] for a graph already in canonical form.
    pub fn insert_canonical(&self, key: Graph) -> bool {
        self.seen.lock().expect("dedupe set poisoned").insert(key)
    }

    pub fn len(&self) -> usize {
        self.seen.lock().expect("dedupe set poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Removes repeated isomorphism classes from a vector, keeping first occurrences.
pub fn dedupe_vec(graphs: Vec<Graph>) -> Vec<Graph> {
    dedupe_stream(graphs).collect()
}

/// Equitable refinement of the unit partition: the ordered cells at the root
/// of the search tree. Isomorphism-invariant.
pub fn root_partition(g: &Graph) -> Vec<VertexSet> {
    let mut cells = vec![g.vertex_set()];
    let mut queue = vec![g.vertex_set()];
    refine(g.adjacency(), g.order(), &mut cells, &mut queue);
    cells
}

struct Leaf {
    lab: Vec<usize>,
    cert: Vec<VertexSet>,
    path: Vec<usize>,
}

struct Search<'a> {
    adj: &'a [VertexSet],
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon the subtree up to the node at `level`.
    fn explore(&mut self, cells: Vec<VertexSet>, path: &mut Vec<usize>) -> Option<usize> {
        if cells.len() == self.n {
            return self.leaf(&cells, path);
        }
        let level = path.len();
        let (target, cell) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|&(i, c)| (c.count_ones(), i))
            .map(|(i, &c)| (i, c))
            .expect("non-discrete partition has a non-singleton cell");

        let mut tried: VertexSet = 0;
        let mut gens_seen = usize::MAX;
        let mut orbit = Vec::new();
        for x in members(cell) {
            if self.gens.len() != gens_seen {
                gens_seen = self.gens.len();
                orbit = orbit_partition(self.n, &self.gens, path);
            }
            if members(tried).any(|y| orbit[y] == orbit[x]) {
                continue;
            }
            tried |= bit(x);

            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(bit(x));
            child.push(cell & !bit(x));
            child.extend_from_slice(&cells[target + 1..]);
            let mut queue = vec![bit(x)];
            refine(self.adj, self.n, &mut child, &mut queue);

            path.push(x);
            let jump = self.explore(child, path);
            path.pop();
            if let Some(j) = jump {
                if j < level {
                    return Some(j);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[VertexSet], path: &[usize]) -> Option<usize> {
        let n = self.n;
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut pos = [0usize; 64];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let cert: Vec<VertexSet> = lab
            .iter()
            .map(|&v| map_set(self.adj[v], &pos[..n]))
            .collect();

        let Some(first) = &self.first else {
            let leaf = Leaf {
                lab,
                cert,
                path: path.to_vec(),
            };
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                cert: leaf.cert.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if cert == first.cert {
            let gen = automorphism(&first.lab, &lab);
            let level = common_prefix(&first.path, path);
            self.gens.push(gen);
            return Some(level);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match cert.cmp(&best.cert) {
            std::cmp::Ordering::Equal => {
                let gen = automorphism(&best.lab, &lab);
                let level = common_prefix(&best.path, path);
                self.gens.push(gen);
                Some(level)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(Leaf {
                    lab,
                    cert,
                    path: path.to_vec(),
                });
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The permutation mapping `from[i]` to `to[i]` for all positions `i`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        perm[a] = b;
    }
    perm
}

/// Orbit representatives under the generators that fix `prefix` pointwise.
fn orbit_partition(n: usize, gens: &[Vec<usize>], prefix: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for gen in gens {
        if prefix.iter().any(|&p| gen[p] != p) {
            continue;
        }
        for (v, &image) in gen.iter().enumerate().take(n) {
            let a = find(&mut parent, v);
            let b = find(&mut parent, image);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Refines the ordered partition `cells` until it is equitable with respect
/// to every splitter in `queue` and every cell created along the way. New
/// fragments replace the split cell in ascending order of neighbour count, so
/// the result depends only on the structure, not on vertex names.
fn refine(adj: &[VertexSet], n: usize, cells: &mut Vec<VertexSet>, queue: &mut Vec<VertexSet>) {
    let mut qi = 0;
    let mut groups: Vec<(u32, VertexSet)> = Vec::with_capacity(8);
    while qi < queue.len() && cells.len() < n {
        let splitter = queue[qi];
        qi += 1;
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell & (cell - 1) == 0 {
                i += 1;
                continue;
            }
            groups.clear();
            for v in members(cell) {
                let c = (adj[v] & splitter).count_ones();
                match groups.iter_mut().find(|(k, _)| *k == c) {
                    Some((_, m)) => *m |= bit(v),
                    None => groups.push((c, bit(v))),
                }
            }
            if groups.len() == 1 {
                i += 1;
                continue;
            }
            groups.sort_unstable_by_key(|&(k, _)| k);
            let frags = groups.len();
            cells.splice(i..=i, groups.iter().map(|&(_, m)| m));
            queue.extend(groups.iter().map(|&(_, m)| m));
            i += frags;
        }
    }
}
