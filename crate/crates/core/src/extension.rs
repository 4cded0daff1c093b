//! Marked vertex sets and extension of host graphs by independent vertices.
//!
//! A set `M ⊆ V(H)` blocks a (3,3)-free colouring `c` of `H` when the spokes
//! from a new vertex attached to `M` cannot be coloured without a
//! monochromatic triangle. A spoke pair `va, vb` with `ab` an edge of colour
//! `x` must not both take colour `x`, so `c` is blocked exactly when `M`
//! cannot be split into a set independent in the first colour class and a set
//! independent in the second. A family of sets that blocks every colouring is
//! complete, and attaching one independent vertex per member forces arrowing.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrowing::{arrows_33, for_each_free_in, Color, EdgeColoring, TriangleTable};
use crate::bits::{bit, low_mask, members, VertexSet};
use crate::graph::Graph;
use crate::invariants::has_clique_of_size;
use crate::twosat::{Lit, TwoSat};

/// Largest host order for which candidate families are built.
pub const MAX_HOST_ORDER: usize = 12;
/// Hosts with more (3,3)-free colourings than this (modulo swap) are skipped.
pub const DEFAULT_COLORING_CAP: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("colouring is not a (3,3)-free colouring of the host")]
    NotFree,
    #[error("vertex set {set:#x} is not contained in a {order}-vertex host")]
    SetOutOfRange { set: VertexSet, order: usize },
    #[error("host has {order} vertices; candidate families are limited to {limit}")]
    HostTooLarge { order: usize, limit: usize },
    #[error("host has more than {cap} (3,3)-free colourings")]
    ColoringCap { cap: usize },
    #[error("supergraph {graph6} does not arrow (3,3)")]
    NotArrowing { graph6: String },
}

fn check_set(h: &Graph, m: VertexSet) -> Result<(), ExtensionError> {
    if m & !h.vertex_set() != 0 {
        return Err(ExtensionError::SetOutOfRange {
            set: m,
            order: h.order(),
        });
    }
    Ok(())
}

/// Whether `c` extends over the spokes of a new vertex adjacent to exactly `m`.
///
/// One variable per spoke (true = first colour); an edge `ab` of colour `x`
/// inside `m` gives the clause "spokes to `a` and `b` are not both `x`".
pub fn is_extendable(h: &Graph, c: &EdgeColoring, m: VertexSet) -> Result<bool, ExtensionError> {
    check_set(h, m)?;
    if c.order() != h.order() || !c.covers(h) || !c.is_33_free() {
        return Err(ExtensionError::NotFree);
    }
    let verts: Vec<usize> = members(m).collect();
    let mut var = [usize::MAX; 64];
    for (i, &v) in verts.iter().enumerate() {
        var[v] = i;
    }
    let mut sat = TwoSat::new(verts.len());
    for &a in &verts {
        for b in members(h.neighbors(a) & m & !low_mask(a + 1)) {
            let (x, y) = (var[a], var[b]);
            match c.color(a, b).expect("edge of the host") {
                Color::First => sat.add_clause(Lit::neg(x), Lit::neg(y)),
                Color::Second => sat.add_clause(Lit::pos(x), Lit::pos(y)),
            }
        }
    }
    Ok(sat.solve().is_some())
}

/// The same decision by unit propagation over bitsets. A literal whose
/// propagation is conflict-free can be committed, so this is exact.
fn extends(first: &[VertexSet], second: &[VertexSet], m: VertexSet) -> bool {
    let mut on_first: VertexSet = 0;
    let mut on_second: VertexSet = 0;
    let mut rest = m;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        let state = propagate(first, second, m, on_first, on_second, bit(v), 0)
            .or_else(|| propagate(first, second, m, on_first, on_second, 0, bit(v)));
        match state {
            Some((f, s)) => {
                on_first = f;
                on_second = s;
                rest = m & !(f | s);
            }
            None => return false,
        }
    }
    true
}

fn propagate(
    first: &[VertexSet],
    second: &[VertexSet],
    m: VertexSet,
    mut on_first: VertexSet,
    mut on_second: VertexSet,
    mut add_first: VertexSet,
    mut add_second: VertexSet,
) -> Option<(VertexSet, VertexSet)> {
    loop {
        if add_first & (add_second | on_second) != 0 || add_second & on_first != 0 {
            return None;
        }
        on_first |= add_first;
        on_second |= add_second;
        // a first-colour spoke forces the other colour on first-colour neighbours
        let mut next_second = 0;
        for a in members(add_first) {
            next_second |= first[a];
        }
        let mut next_first = 0;
        for a in members(add_second) {
            next_first |= second[a];
        }
        next_second &= m & !on_second;
        next_first &= m & !on_first;
        if next_first | next_second == 0 {
            return Some((on_first, on_second));
        }
        add_first = next_first;
        add_second = next_second;
    }
}

/// The (3,3)-free colourings of a host modulo swap, each stored as the
/// adjacency of its first colour class.
#[derive(Clone, Debug)]
pub struct HostColorings {
    host: Graph,
    first: Vec<VertexSet>,
}

impl HostColorings {
    pub fn collect(h: &Graph, cap: usize) -> Result<Self, ExtensionError> {
        let n = h.order();
        let table = TriangleTable::new(h);
        let edges = table.edges().clone();
        let mut first = Vec::new();
        let mut count = 0usize;
        let mut over = false;
        for_each_free_in(&table, true, &mut |assign| {
            count += 1;
            if count > cap {
                over = true;
                return ControlFlow::Break(());
            }
            let base = first.len();
            first.resize(base + n, 0);
            for (i, (u, v)) in edges.iter().enumerate() {
                if assign[i] == 0 {
                    first[base + u] |= bit(v);
                    first[base + v] |= bit(u);
                }
            }
            ControlFlow::Continue(())
        });
        if over {
            return Err(ExtensionError::ColoringCap { cap });
        }
        Ok(HostColorings {
            host: h.clone(),
            first,
        })
    }

    pub fn len(&self) -> usize {
        if self.host.order() == 0 {
            0
        } else {
            self.first.len() / self.host.order()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn first_class(&self, i: usize) -> &[VertexSet] {
        let n = self.host.order();
        &self.first[i * n..(i + 1) * n]
    }

    pub fn coloring(&self, i: usize) -> EdgeColoring {
        EdgeColoring::from_first_class(&self.host, self.first_class(i).to_vec())
    }

    /// Whether colouring `i` is blocked by `m`.
    pub fn blocked_by(&self, i: usize, m: VertexSet) -> bool {
        let first = self.first_class(i);
        let adj = self.host.adjacency();
        let mut second = [0u64; 64];
        for v in 0..first.len() {
            second[v] = adj[v] & !first[v];
        }
        !extends(first, &second[..first.len()], m)
    }
}

/// Whether some (3,3)-free colouring of `h` fails to extend over `m`.
/// Hosts that arrow have no colourings, and every set is reported unmarked.
pub fn is_marked_set(h: &Graph, m: VertexSet) -> Result<bool, ExtensionError> {
    check_set(h, m)?;
    let table = TriangleTable::new(h);
    let edges = table.edges().clone();
    let adj = h.adjacency();
    let n = h.order();
    let mut any = false;
    let mut marked = false;
    for_each_free_in(&table, true, &mut |assign| {
        any = true;
        let mut first = vec![0u64; n];
        for (i, (u, v)) in edges.iter().enumerate() {
            if assign[i] == 0 {
                first[u] |= bit(v);
                first[v] |= bit(u);
            }
        }
        let second: Vec<VertexSet> = (0..n).map(|v| adj[v] & !first[v]).collect();
        if extends(&first, &second, m) {
            ControlFlow::Continue(())
        } else {
            marked = true;
            ControlFlow::Break(())
        }
    });
    if !any {
        log::debug!("marked-set query on a host that arrows; reporting unmarked");
    }
    Ok(marked)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateSet {
    pub members: VertexSet,
}

/// Sets meeting the two cheap conditions: no `K_{q−1}` inside, and not
/// contained in any neighbourhood. Listed in increasing mask order.
fn cheap_candidates(h: &Graph, q: usize) -> Vec<VertexSet> {
    let adj = h.adjacency();
    let full = h.vertex_set();
    let clique = q.saturating_sub(1);
    (1..=full)
        .filter(|&m| !has_clique_of_size(adj, m, clique))
        .filter(|&m| adj.iter().all(|&nb| m & !nb != 0))
        .collect()
}

fn check_host(h: &Graph) -> Result<(), ExtensionError> {
    if h.order() > MAX_HOST_ORDER {
        return Err(ExtensionError::HostTooLarge {
            order: h.order(),
            limit: MAX_HOST_ORDER,
        });
    }
    Ok(())
}

/// All sets `M` with no `K_{q−1}` in `h[M]`, `M ⊄ N(v)` for every `v`, and
/// `M` marked.
pub fn candidate_family(h: &Graph, q: usize) -> Result<Vec<CandidateSet>, ExtensionError> {
    check_host(h)?;
    let colorings = HostColorings::collect(h, DEFAULT_COLORING_CAP)?;
    let cheap = cheap_candidates(h, q);
    let blocked = blocked_union(&colorings, h, q);
    Ok(cheap
        .into_iter()
        .filter(|&m| blocked.contains(m))
        .map(|members| CandidateSet { members })
        .collect())
}

/// Bitset over all subsets of the host's vertex set.
#[derive(Clone, Debug)]
struct SubsetBits(Vec<u64>);

impl SubsetBits {
    fn new(order: usize) -> Self {
        SubsetBits(vec![0; (1usize << order).div_ceil(64)])
    }

    fn contains(&self, m: VertexSet) -> bool {
        self.0[(m / 64) as usize] >> (m % 64) & 1 == 1
    }

    fn insert(&mut self, m: VertexSet) {
        self.0[(m / 64) as usize] |= 1 << (m % 64);
    }
}

/// The up-set of sets blocking colouring `i`, restricted to `K_{q−1}`-free
/// sets (a down-closed family, so every subset consulted is present).
fn blocked_sets(
    colorings: &HostColorings,
    i: usize,
    free_sets: &[VertexSet],
    order: usize,
) -> SubsetBits {
    let first = colorings.first_class(i);
    let adj = colorings.host.adjacency();
    let mut second = [0u64; 64];
    for v in 0..order {
        second[v] = adj[v] & !first[v];
    }
    let mut out = SubsetBits::new(order);
    for &m in free_sets {
        // sets of at most three vertices always extend
        if m.count_ones() < 4 {
            continue;
        }
        let inherited = members(m).any(|x| out.contains(m & !bit(x)));
        if inherited || !extends(first, &second[..order], m) {
            out.insert(m);
        }
    }
    out
}

fn clique_free_sets(h: &Graph, q: usize) -> Vec<VertexSet> {
    let adj = h.adjacency();
    let clique = q.saturating_sub(1);
    (0..=h.vertex_set())
        .filter(|&m| !has_clique_of_size(adj, m, clique))
        .collect()
}

fn blocked_union(colorings: &HostColorings, h: &Graph, q: usize) -> SubsetBits {
    let free = clique_free_sets(h, q);
    let mut union = SubsetBits::new(h.order());
    for i in 0..colorings.len() {
        let b = blocked_sets(colorings, i, &free, h.order());
        for (u, w) in union.0.iter_mut().zip(&b.0) {
            *u |= w;
        }
    }
    union
}

/// Fixed-width bitset used for rows and columns of the blocking matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow(Vec<u64>);

impl BitRow {
    pub fn new(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| members(w).map(move |b| 64 * i + b))
    }

    fn is_subset_of(&self, other: &BitRow) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Which candidate sets block which colourings.
#[derive(Clone, Debug)]
pub struct BlockingRelation {
    colorings: HostColorings,
    sets: Vec<CandidateSet>,
    /// one row per colouring, one bit per set
    rows: Vec<BitRow>,
}

impl BlockingRelation {
    pub fn host(&self) -> &Graph {
        &self.colorings.host
    }

    pub fn sets(&self) -> &[CandidateSet] {
        &self.sets
    }

    pub fn coloring_count(&self) -> usize {
        self.rows.len()
    }

    pub fn coloring(&self, i: usize) -> EdgeColoring {
        self.colorings.coloring(i)
    }

    pub fn blocks(&self, coloring: usize, set: usize) -> bool {
        self.rows[coloring].get(set)
    }

    pub fn row(&self, coloring: usize) -> &BitRow {
        &self.rows[coloring]
    }

    /// Every colouring is blocked by some chosen set.
    pub fn is_complete(&self, chosen: &[usize]) -> bool {
        self.rows.iter().all(|r| chosen.iter().any(|&j| r.get(j)))
    }
}

/// Blocking matrix of `family` against all (3,3)-free colourings of `h`.
pub fn blocking_relation(
    h: &Graph,
    family: &[CandidateSet],
) -> Result<BlockingRelation, ExtensionError> {
    blocking_relation_capped(h, family, DEFAULT_COLORING_CAP)
}

pub fn blocking_relation_capped(
    h: &Graph,
    family: &[CandidateSet],
    cap: usize,
) -> Result<BlockingRelation, ExtensionError> {
    for s in family {
        check_set(h, s.members)?;
    }
    let colorings = HostColorings::collect(h, cap)?;
    let rows = (0..colorings.len())
        .map(|i| {
            let mut row = BitRow::new(family.len());
            for (j, s) in family.iter().enumerate() {
                if colorings.blocked_by(i, s.members) {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    Ok(BlockingRelation {
        colorings,
        sets: family.to_vec(),
        rows,
    })
}

/// A complete family, as indices into the relation's candidate list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompleteFamily {
    pub sets: Vec<usize>,
    pub minimal: bool,
}

/// Drops duplicate rows and rows that contain another row; the minimal covers
/// are unchanged. `None` if some row is empty.
fn reduce_rows(rows: &[BitRow]) -> Option<Vec<BitRow>> {
    let mut seen = HashSet::new();
    let mut uniq: Vec<BitRow> = Vec::new();
    for r in rows {
        if r.is_empty() {
            return None;
        }
        if seen.insert(r.clone()) {
            uniq.push(r.clone());
        }
    }
    uniq.sort_by_key(BitRow::count);
    let mut kept: Vec<BitRow> = Vec::new();
    for r in uniq {
        if !kept.iter().any(|k| k.is_subset_of(&r)) {
            kept.push(r);
        }
    }
    Some(kept)
}

/// Calls `visit` with every minimal cover of `rows` by columns `0..columns`,
/// as sorted column lists; with `fixed_s`, only covers of that size.
pub fn for_each_minimal_cover<F>(
    rows: &[BitRow],
    columns: usize,
    fixed_s: Option<usize>,
    mut visit: F,
) where
    F: FnMut(&[usize]),
{
    let Some(rows) = reduce_rows(rows) else {
        return;
    };
    let mut col_rows = vec![BitRow::new(rows.len()); columns];
    for (r, row) in rows.iter().enumerate() {
        for c in row.ones() {
            col_rows[c].set(r);
        }
    }
    let mut uncovered = BitRow::new(rows.len());
    for r in 0..rows.len() {
        uncovered.set(r);
    }
    let mut cand = BitRow::new(columns);
    for (c, col) in col_rows.iter().enumerate() {
        if !col.is_empty() {
            cand.set(c);
        }
    }
    let mut search = Mmcs {
        rows: &rows,
        col_rows: &col_rows,
        fixed_s,
        chosen: Vec::new(),
        crit: Vec::new(),
        out: Vec::new(),
    };
    search.run(&mut uncovered, &mut cand, &mut visit);
}

/// Minimal hitting sets by the MMCS scheme: branch on the elements of an
/// uncovered row with fewest candidates, keeping for each chosen column the
/// rows it alone covers.
struct Mmcs<'a> {
    rows: &'a [BitRow],
    col_rows: &'a [BitRow],
    fixed_s: Option<usize>,
    chosen: Vec<usize>,
    crit: Vec<BitRow>,
    out: Vec<usize>,
}

impl Mmcs<'_> {
    fn run<F: FnMut(&[usize])>(
        &mut self,
        uncovered: &mut BitRow,
        cand: &mut BitRow,
        visit: &mut F,
    ) {
        if uncovered.is_empty() {
            if self.fixed_s.is_none_or(|s| s == self.chosen.len()) {
                self.out.clear();
                self.out.extend_from_slice(&self.chosen);
                self.out.sort_unstable();
                visit(&self.out);
            }
            return;
        }
        if self.fixed_s.is_some_and(|s| self.chosen.len() >= s) {
            return;
        }
        let pick = uncovered
            .ones()
            .min_by_key(|&r| {
                self.rows[r]
                    .0
                    .iter()
                    .zip(&cand.0)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .expect("an uncovered row");
        let branch: Vec<usize> = self.rows[pick].ones().filter(|&c| cand.get(c)).collect();
        for &c in &branch {
            cand.0[c / 64] &= !(1 << (c % 64));
        }
        for &c in &branch {
            let col = &self.col_rows[c];
            let saved_uncovered = uncovered.clone();
            let saved_crit = self.crit.clone();
            let mut own = BitRow::new(0);
            own.0 = uncovered.0.iter().zip(&col.0).map(|(u, r)| u & r).collect();
            for (u, r) in uncovered.0.iter_mut().zip(&col.0) {
                *u &= !r;
            }
            let mut minimal = true;
            for k in self.crit.iter_mut() {
                for (w, r) in k.0.iter_mut().zip(&col.0) {
                    *w &= !r;
                }
                if k.is_empty() {
                    minimal = false;
                }
            }
            if minimal {
                self.chosen.push(c);
                self.crit.push(own);
                self.run(uncovered, cand, visit);
                self.chosen.pop();
                self.crit.pop();
            }
            *uncovered = saved_uncovered;
            self.crit = saved_crit;
            cand.set(c);
        }
    }
}

/// Every minimal complete subfamily; with `fixed_s`, only those of that size.
pub fn minimal_complete_subfamilies(
    rel: &BlockingRelation,
    fixed_s: Option<usize>,
) -> Vec<CompleteFamily> {
    let mut out = Vec::new();
    for_each_minimal_cover(&rel.rows, rel.sets.len(), fixed_s, |sets| {
        out.push(CompleteFamily {
            sets: sets.to_vec(),
            minimal: true,
        })
    });
    out
}

/// `h` plus one new vertex per set, the new vertices pairwise non-adjacent.
/// The result is checked to arrow (3,3).
pub fn build_supergraph(h: &Graph, sets: &[VertexSet]) -> Result<Graph, ExtensionError> {
    let g = attach(h, sets)?;
    if !arrows_33(&g) {
        return Err(ExtensionError::NotArrowing {
            graph6: crate::graph6::to_graph6(&g),
        });
    }
    Ok(g)
}

fn attach(h: &Graph, sets: &[VertexSet]) -> Result<Graph, ExtensionError> {
    let mut g = h.clone();
    for &m in sets {
        check_set(h, m)?;
        g = g
            .add_vertex_with_neighborhood(m)
            .map_err(|_| ExtensionError::SetOutOfRange {
                set: m,
                order: h.order(),
            })?;
    }
    Ok(g)
}

/// Result of extending one host.
#[derive(Clone, Debug, Default)]
pub struct HostExtension {
    pub colorings: usize,
    pub candidates: usize,
    pub families: usize,
    pub supergraphs: Vec<Graph>,
}

/// Builds every supergraph of `h` given by a minimal complete subfamily of
/// its candidate sets (of size `fixed_s` if given). Hosts that arrow yield
/// nothing, since their only complete subfamily is empty.
pub fn extend_host(
    h: &Graph,
    q: usize,
    fixed_s: Option<usize>,
    cap: usize,
) -> Result<HostExtension, ExtensionError> {
    check_host(h)?;
    let colorings = HostColorings::collect(h, cap)?;
    let mut out = HostExtension {
        colorings: colorings.len(),
        ..HostExtension::default()
    };
    if colorings.is_empty() || fixed_s == Some(0) {
        return Ok(out);
    }
    let order = h.order();
    let free = clique_free_sets(h, q);
    let cheap = cheap_candidates(h, q);
    let blocked: Vec<SubsetBits> = (0..colorings.len())
        .map(|i| blocked_sets(&colorings, i, &free, order))
        .collect();
    let columns: Vec<VertexSet> = cheap
        .into_iter()
        .filter(|&m| blocked.iter().any(|b| b.contains(m)))
        .collect();
    out.candidates = columns.len();
    let rows: Vec<BitRow> = blocked
        .iter()
        .map(|b| {
            let mut row = BitRow::new(columns.len());
            for (j, &m) in columns.iter().enumerate() {
                if b.contains(m) {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    drop(blocked);
    let mut err = None;
    for_each_minimal_cover(&rows, columns.len(), fixed_s, |fam| {
        if err.is_some() {
            return;
        }
        out.families += 1;
        let sets: Vec<VertexSet> = fam.iter().map(|&j| columns[j]).collect();
        match build_supergraph(h, &sets) {
            Ok(g) => out.supergraphs.push(g),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
