//! Isomorph-free generation of graphs under hereditary bounds.
//!
//! Canonical augmentation: a graph on `m + 1` vertices is produced from its
//! unique parent on `m` vertices by adding one vertex `v` with neighbourhood
//! `S`. The child is kept only when `v` lies in the canonical deletion orbit
//! (a maximum-degree vertex chosen through the canonical labeling) and `S` is
//! the least set in its orbit under the parent's automorphism group. Each
//! isomorphism class is then produced exactly once, so subtrees of the
//! generation tree are independent and can be processed in parallel.
//!
//! Minimum degree, clique and independence bounds prune during generation;
//! the chromatic bound is applied only to full-size graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{bit, low_mask, members, VertexSet};
use crate::canonical::{canonical_labeling, root_partition};
use crate::graph::{map_set, Graph};
use crate::invariants::{has_clique_of_size, is_k_colorable};

/// Largest order for which exhaustive generation is attempted at all.
pub const MAX_GEN_ORDER: usize = 16;
/// Largest order generated without an explicit override.
pub const DEFAULT_GEN_ORDER: usize = 12;
/// Largest host order for extension bases without the extended flag.
pub const DEFAULT_BASE_ORDER: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("generation of {n}-vertex graphs exceeds the cost guard ({limit}); pass the override to run it anyway")]
    Guard { n: usize, limit: usize },
    #[error("invalid generation request: {0}")]
    Invalid(String),
}

/// Bounds for a generation run. `max_clique` is exclusive: graphs have `ω < max_clique`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub min_degree: Option<usize>,
    pub max_clique: Option<usize>,
    pub min_chromatic: Option<usize>,
    pub alpha_max: Option<usize>,
}

impl GenSpec {
    pub fn new(n: usize) -> Self {
        GenSpec {
            n,
            ..GenSpec::default()
        }
    }

    pub fn min_degree(mut self, d: usize) -> Self {
        self.min_degree = Some(d);
        self
    }

    pub fn max_clique(mut self, q: usize) -> Self {
        self.max_clique = Some(q);
        self
    }

    pub fn min_chromatic(mut self, c: usize) -> Self {
        self.min_chromatic = Some(c);
        self
    }

    pub fn alpha_max(mut self, a: usize) -> Self {
        self.alpha_max = Some(a);
        self
    }

    fn validate(&self, allow_large: bool) -> Result<(), GenError> {
        if self.n == 0 || self.n > MAX_GEN_ORDER {
            return Err(GenError::Invalid(format!(
                "order {} outside 1..={MAX_GEN_ORDER}",
                self.n
            )));
        }
        if !allow_large && self.n > DEFAULT_GEN_ORDER {
            return Err(GenError::Guard {
                n: self.n,
                limit: DEFAULT_GEN_ORDER,
            });
        }
        if self.max_clique == Some(0) || self.max_clique == Some(1) {
            return Err(GenError::Invalid("max_clique must be at least 2".into()));
        }
        if self.alpha_max == Some(0) {
            return Err(GenError::Invalid("alpha_max must be at least 1".into()));
        }
        Ok(())
    }

    /// `true` if `g` satisfies every bound; used to revalidate outputs.
    pub fn accepts(&self, g: &Graph) -> bool {
        use crate::invariants::{clique_number, independence_number};
        g.order() == self.n
            && self.min_degree.is_none_or(|d| g.min_degree() >= d)
            && self.max_clique.is_none_or(|q| clique_number(g) < q)
            && self.alpha_max.is_none_or(|a| independence_number(g) <= a)
            && self
                .min_chromatic
                .is_none_or(|c| c <= 1 || !is_k_colorable(g, c - 1))
    }
}

/// Streams the graphs of one [`GenSpec`].
#[derive(Clone, Debug)]
pub struct Generator {
    spec: GenSpec,
}

impl Generator {
    /// Checks the cost guard; `allow_large` lifts the order limit up to
    /// [`MAX_GEN_ORDER`].
    pub fn new(spec: GenSpec, allow_large: bool) -> Result<Self, GenError> {
        spec.validate(allow_large)?;
        Ok(Generator { spec })
    }

    pub fn spec(&self) -> &GenSpec {
        &self.spec
    }

    /// Calls `f` once per isomorphism class, in a deterministic order.
    pub fn for_each_sequential<F: FnMut(Graph)>(&self, mut f: F) {
        let root = Graph::empty(1).expect("one vertex");
        if self.admits_root() {
            self.descend(root, &mut f);
        }
    }

    /// Calls `f` once per isomorphism class from the current rayon pool.
    /// Output order is unspecified.
    pub fn for_each_parallel<F>(&self, f: F)
    where
        F: Fn(Graph) + Sync + Send,
    {
        let frontier = self.frontier();
        frontier.into_par_iter().for_each(|g| {
            let mut sink = |c: Graph| f(c);
            self.descend(g, &mut sink);
        });
    }

    /// All graphs, in the same order as [`Generator::for_each_sequential`].
    pub fn collect(&self) -> Vec<Graph> {
        let frontier = self.frontier();
        frontier
            .into_par_iter()
            .flat_map_iter(|g| {
                let mut out = Vec::new();
                self.descend(g, &mut |c| out.push(c));
                out
            })
            .collect()
    }

    pub fn count(&self) -> usize {
        let frontier = self.frontier();
        frontier
            .into_par_iter()
            .map(|g| {
                let mut k = 0usize;
                self.descend(g, &mut |_| k += 1);
                k
            })
            .sum()
    }

    fn admits_root(&self) -> bool {
        // a single vertex has degree 0, which must still be completable
        self.spec.min_degree.unwrap_or(0) < self.spec.n
            || self.spec.n == 1 && self.spec.min_degree.unwrap_or(0) == 0
    }

    /// Partial graphs at the level where the tree is split into parallel jobs.
    fn frontier(&self) -> Vec<Graph> {
        let root = Graph::empty(1).expect("one vertex");
        if !self.admits_root() {
            return Vec::new();
        }
        let target_jobs = 64 * rayon::current_num_threads().max(1);
        let mut level = vec![root];
        while level.len() < target_jobs && level[0].order() + 1 < self.spec.n {
            let mut next = Vec::new();
            for g in &level {
                self.children(g, &mut |c| next.push(c));
            }
            if next.is_empty() {
                return next;
            }
            level = next;
        }
        level
    }

    fn descend(&self, g: Graph, f: &mut dyn FnMut(Graph)) {
        if g.order() == self.spec.n {
            if self.final_filter(&g) {
                f(g);
            }
            return;
        }
        self.children(&g, &mut |c| self.descend(c, f));
    }

    fn final_filter(&self, g: &Graph) -> bool {
        match self.spec.min_chromatic {
            Some(c) if c >= 2 => !is_k_colorable(g, c - 1),
            _ => true,
        }
    }

    /// Calls `f` on every accepted child of `parent`.
    fn children(&self, parent: &Graph, f: &mut dyn FnMut(Graph)) {
        let m = parent.order();
        let child_order = m + 1;
        let spec = &self.spec;
        let need = spec
            .min_degree
            .unwrap_or(0)
            .saturating_sub(spec.n - child_order);
        let adj = parent.adjacency();
        let all = parent.vertex_set();

        let mut must: VertexSet = 0;
        for u in 0..m {
            let d = parent.degree(u);
            if d + 1 < need {
                return;
            }
            if d < need {
                must |= bit(u);
            }
        }
        let clique_cap = spec.max_clique.map(|q| q - 1);
        if let Some(cap) = clique_cap {
            if has_clique_of_size(adj, must, cap) {
                return;
            }
        }
        let co_adj: Vec<VertexSet> = (0..m).map(|u| all & !adj[u] & !bit(u)).collect();
        let gens = if m > 1 {
            canonical_labeling(parent).generators
        } else {
            Vec::new()
        };
        let degrees = parent.degrees();

        let ctx = ChildCtx {
            parent,
            gens: &gens,
            degrees: &degrees,
            co_adj: &co_adj,
            need,
            clique_cap,
            alpha_max: spec.alpha_max,
        };
        // choose the optional vertices one by one, keeping S free of K_cap
        let optional: Vec<usize> = members(all & !must).collect();
        ctx.subsets(&optional, 0, must, f);
    }
}

struct ChildCtx<'a> {
    parent: &'a Graph,
    gens: &'a [Vec<usize>],
    degrees: &'a [usize],
    co_adj: &'a [VertexSet],
    need: usize,
    clique_cap: Option<usize>,
    alpha_max: Option<usize>,
}

impl ChildCtx<'_> {
    fn subsets(&self, optional: &[usize], i: usize, set: VertexSet, f: &mut dyn FnMut(Graph)) {
        if i == optional.len() {
            self.try_child(set, f);
            return;
        }
        // not enough vertices left to reach the required degree
        if (set.count_ones() as usize) + (optional.len() - i) < self.need {
            return;
        }
        self.subsets(optional, i + 1, set, f);
        let u = optional[i];
        let adj = self.parent.adjacency();
        if let Some(cap) = self.clique_cap {
            if cap == 0 || has_clique_of_size(adj, set & adj[u], cap - 1) {
                return;
            }
        }
        self.subsets(optional, i + 1, set | bit(u), f);
    }

    fn try_child(&self, set: VertexSet, f: &mut dyn FnMut(Graph)) {
        let m = self.parent.order();
        let new_deg = set.count_ones() as usize;
        if new_deg < self.need {
            return;
        }
        // the new vertex must have maximum degree in the child
        let mut ties: VertexSet = bit(m);
        for u in 0..m {
            let d = self.degrees[u] + usize::from(set & bit(u) != 0);
            if d > new_deg {
                return;
            }
            if d == new_deg {
                ties |= bit(u);
            }
        }
        if let Some(a) = self.alpha_max {
            // α(child) = max(α(parent), 1 + α(parent − S))
            if has_clique_of_size(self.co_adj, self.parent.vertex_set() & !set, a) {
                return;
            }
        }
        if !self.least_in_orbit(set) {
            return;
        }
        let child = self
            .parent
            .add_vertex_with_neighborhood(set)
            .expect("subset of the parent");
        if ties == bit(m) || canonical_deletion_ok(&child, ties) {
            f(child);
        }
    }

    /// `true` if no automorphism of the parent maps `set` below itself.
    fn least_in_orbit(&self, set: VertexSet) -> bool {
        if self.gens.is_empty() {
            return true;
        }
        let mut orbit = vec![set];
        let mut i = 0;
        while i < orbit.len() {
            let s = orbit[i];
            i += 1;
            for g in self.gens {
                let t = map_set(s, g);
                if t < set {
                    return false;
                }
                if !orbit.contains(&t) {
                    orbit.push(t);
                }
            }
        }
        true
    }
}

/// Whether the last vertex of `child` is in the canonical deletion orbit.
/// `ties` holds the maximum-degree vertices (the last vertex among them).
fn canonical_deletion_ok(child: &Graph, ties: VertexSet) -> bool {
    let v = child.order() - 1;
    let cells = root_partition(child);
    // the last refinement cell made of maximum-degree vertices
    let cell = cells
        .iter()
        .rev()
        .copied()
        .find(|&c| c & ties != 0)
        .expect("the new vertex is in some cell");
    if cell & bit(v) == 0 {
        return false;
    }
    if cell == bit(v) {
        return true;
    }
    let lab = canonical_labeling(child);
    let pos = lab.positions();
    let w = members(cell)
        .min_by_key(|&u| pos[u])
        .expect("cell is non-empty");
    lab.orbits[w] == lab.orbits[v]
}

/// All `n`-vertex graphs meeting `spec`, one per isomorphism class.
pub fn generate_all(spec: GenSpec, allow_large: bool) -> Result<Vec<Graph>, GenError> {
    Ok(Generator::new(spec, allow_large)?.collect())
}

/// Hosts for marked-set extension: `k`-vertex graphs with `ω < q` that are
/// not 4-colourable.
pub fn generate_extension_bases(
    k: usize,
    q: usize,
    extended: bool,
) -> Result<Vec<Graph>, GenError> {
    if !extended && k > DEFAULT_BASE_ORDER {
        return Err(GenError::Guard {
            n: k,
            limit: DEFAULT_BASE_ORDER,
        });
    }
    extension_base_generator(k, q, extended).map(|g| g.collect())
}

pub fn extension_base_generator(
    k: usize,
    q: usize,
    allow_large: bool,
) -> Result<Generator, GenError> {
    Generator::new(GenSpec::new(k).max_clique(q).min_chromatic(5), allow_large)
}

/// The triangle-free graphs with independence number at most 5; their
/// complements are exactly the graphs with `α ≤ 2` and `ω ≤ 5`.
pub fn alpha2_complement_generator(n: usize) -> Result<Generator, GenError> {
    if n > 17 {
        return Err(GenError::Invalid(format!(
            "no graph on {n} vertices has α ≤ 2 and ω ≤ 5"
        )));
    }
    let spec = GenSpec::new(n).max_clique(3).alpha_max(5);
    if n > MAX_GEN_ORDER {
        // orders 16 and 17 are tiny classes; skip the order cap
        return Ok(Generator { spec });
    }
    Generator::new(spec, true)
}

/// All `n`-vertex graphs with `α ≤ 2` and `ω ≤ 5`.
pub fn generate_alpha2_stream(n: usize) -> Result<Vec<Graph>, GenError> {
    let gen = alpha2_complement_generator(n)?;
    let mut out: Vec<Graph> = gen.collect().into_iter().map(|g| g.complement()).collect();
    out.shrink_to_fit();
    Ok(out)
}

/// Full mask of the first `n` vertices, re-exported for callers building sets.
pub fn all_vertices(n: usize) -> VertexSet {
    low_mask(n)
}
