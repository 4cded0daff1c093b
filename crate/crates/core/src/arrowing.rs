//! Edge 2-colourings without monochromatic triangles, the arrowing test
//! `G → (3,3)`, minimality, and the K3-multiplicity.
//!
//! Search is backtracking over edges with triangle-local unit propagation:
//! once two edges of a triangle share a colour, the third takes the other one.
//! Edges are visited in descending order of incident triangles, ties broken
//! lexicographically. The first edge in that order is pinned to the first
//! colour whenever colour-swapped copies are not wanted.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::bits::{bit, members, VertexSet};
use crate::graph::{Edge, EdgeList, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    First,
    Second,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::First => Color::Second,
            Color::Second => Color::First,
        }
    }
}

/// A 2-colouring of the edges of a host graph, stored as the adjacency of
/// each colour class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    first: Vec<VertexSet>,
    second: Vec<VertexSet>,
}

impl EdgeColoring {
    /// Builds a colouring from per-edge colours given in the order of `edges`.
    pub fn from_colors(n: usize, edges: &EdgeList, colors: &[Color]) -> Self {
        assert_eq!(edges.len(), colors.len(), "one colour per edge");
        let mut c = EdgeColoring {
            first: vec![0; n],
            second: vec![0; n],
        };
        for ((u, v), &col) in edges.iter().zip(colors) {
            let side = match col {
                Color::First => &mut c.first,
                Color::Second => &mut c.second,
            };
            side[u] |= bit(v);
            side[v] |= bit(u);
        }
        c
    }

    /// Colouring of `g` whose first class is the edges inside `first` adjacency.
    pub fn from_first_class(g: &Graph, first: Vec<VertexSet>) -> Self {
        let second = g
            .adjacency()
            .iter()
            .zip(&first)
            .map(|(&a, &f)| a & !f)
            .collect();
        EdgeColoring { first, second }
    }

    pub fn order(&self) -> usize {
        self.first.len()
    }

    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        if self.first[u] & bit(v) != 0 {
            Some(Color::First)
        } else if self.second[u] & bit(v) != 0 {
            Some(Color::Second)
        } else {
            None
        }
    }

    /// Per-edge colours in the order of `edges`.
    pub fn colors(&self, edges: &EdgeList) -> Vec<Color> {
        edges
            .iter()
            .map(|(u, v)| self.color(u, v).expect("edge of the host graph"))
            .collect()
    }

    pub fn class(&self, color: Color) -> &[VertexSet] {
        match color {
            Color::First => &self.first,
            Color::Second => &self.second,
        }
    }

    pub fn swapped(&self) -> EdgeColoring {
        EdgeColoring {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    /// `true` if exactly the edges of `g` are coloured.
    pub fn covers(&self, g: &Graph) -> bool {
        (0..g.order()).all(|v| {
            self.first[v] & self.second[v] == 0 && self.first[v] | self.second[v] == g.neighbors(v)
        })
    }

    /// Number of monochromatic triangles.
    pub fn monochromatic_triangles(&self) -> usize {
        [&self.first, &self.second]
            .iter()
            .map(|cls| triangles_in(cls))
            .sum()
    }

    pub fn is_33_free(&self) -> bool {
        self.monochromatic_triangles() == 0
    }
}

fn triangles_in(adj: &[VertexSet]) -> usize {
    let mut count = 0;
    for u in 0..adj.len() {
        for v in members(adj[u] & !crate::bits::low_mask(u + 1)) {
            count += (adj[u] & adj[v] & !crate::bits::low_mask(v + 1)).count_ones() as usize;
        }
    }
    count
}

/// Triangles of a graph indexed by edge, with the edge visiting order.
#[derive(Clone, Debug)]
pub struct TriangleTable {
    n: usize,
    edges: EdgeList,
    /// triangles as triples of edge indices
    triangles: Vec<[u32; 3]>,
    /// incident triangle indices per edge
    incident: Vec<Vec<u32>>,
    /// edge indices in search order
    order: Vec<u32>,
}

impl TriangleTable {
    pub fn new(g: &Graph) -> Self {
        let n = g.order();
        let edges = g.edges();
        let mut index = vec![u32::MAX; n * n];
        for (i, (u, v)) in edges.iter().enumerate() {
            index[u * n + v] = i as u32;
            index[v * n + u] = i as u32;
        }
        let adj = g.adjacency();
        let mut triangles = Vec::new();
        let mut incident = vec![Vec::new(); edges.len()];
        for (u, v) in edges.iter() {
            for w in members(adj[u] & adj[v] & !crate::bits::low_mask(v + 1)) {
                let t = [index[u * n + v], index[u * n + w], index[v * n + w]];
                let id = triangles.len() as u32;
                for &e in &t {
                    incident[e as usize].push(id);
                }
                triangles.push(t);
            }
        }
        let mut order: Vec<u32> = (0..edges.len() as u32).collect();
        // stable sort keeps lexicographic order among ties
        order.sort_by_key(|&e| std::cmp::Reverse(incident[e as usize].len()));
        TriangleTable {
            n,
            edges,
            triangles,
            incident,
            order,
        }
    }

    pub fn edges(&self) -> &EdgeList {
        &self.edges
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Edges in the order the search visits them.
    pub fn search_order(&self) -> impl Iterator<Item = Edge> + '_ {
        self.order
            .iter()
            .map(|&e| self.edges.as_slice()[e as usize])
    }

    fn coloring_of(&self, assign: &[i8]) -> EdgeColoring {
        let mut c = EdgeColoring {
            first: vec![0; self.n],
            second: vec![0; self.n],
        };
        for (i, (u, v)) in self.edges.iter().enumerate() {
            let side = if assign[i] == 0 {
                &mut c.first
            } else {
                &mut c.second
            };
            side[u] |= bit(v);
            side[v] |= bit(u);
        }
        c
    }
}

const UNSET: i8 = -1;

/// Backtracking state with an undo trail.
struct FreeSearch<'a> {
    t: &'a TriangleTable,
    assign: Vec<i8>,
    trail: Vec<u32>,
    queue: Vec<u32>,
}

impl<'a> FreeSearch<'a> {
    fn new(t: &'a TriangleTable) -> Self {
        FreeSearch {
            t,
            assign: vec![UNSET; t.edges.len()],
            trail: Vec::with_capacity(t.edges.len()),
            queue: Vec::new(),
        }
    }

    /// Assigns `e := c` and propagates. On conflict the partial work stays on
    /// the trail; callers undo to their mark.
    fn set(&mut self, e: u32, c: i8) -> bool {
        self.assign[e as usize] = c;
        self.trail.push(e);
        self.queue.clear();
        self.queue.push(e);
        while let Some(e) = self.queue.pop() {
            let c = self.assign[e as usize];
            for &ti in &self.t.incident[e as usize] {
                let tri = self.t.triangles[ti as usize];
                let mut others = tri.iter().copied().filter(|&x| x != e);
                let a = others.next().expect("triangle has three edges");
                let b = others.next().expect("triangle has three edges");
                let (ca, cb) = (self.assign[a as usize], self.assign[b as usize]);
                if ca == c && cb == c {
                    return false;
                }
                let forced = if ca == c && cb == UNSET {
                    b
                } else if cb == c && ca == UNSET {
                    a
                } else {
                    continue;
                };
                self.assign[forced as usize] = 1 - c;
                self.trail.push(forced);
                self.queue.push(forced);
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("trail above mark");
            self.assign[e as usize] = UNSET;
        }
    }

    /// Visits every completion of the current partial assignment.
    fn run<F>(&mut self, pos: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i8]) -> ControlFlow<()>,
    {
        let mut pos = pos;
        while pos < self.t.order.len() && self.assign[self.t.order[pos] as usize] != UNSET {
            pos += 1;
        }
        if pos == self.t.order.len() {
            return visit(&self.assign);
        }
        let e = self.t.order[pos];
        for c in 0..2 {
            let mark = self.trail.len();
            if self.set(e, c) {
                self.run(pos + 1, visit)?;
            }
            self.undo_to(mark);
        }
        ControlFlow::Continue(())
    }

    /// Pins the first edge in search order to the first colour.
    fn pin_first(&mut self) -> bool {
        match self.t.order.first() {
            Some(&e) => self.set(e, 0),
            None => true,
        }
    }
}

/// A colouring of `g` with no monochromatic triangle, if one exists.
pub fn find_33_free_coloring(g: &Graph) -> Option<EdgeColoring> {
    let t = TriangleTable::new(g);
    find_free_with(&t)
}

fn find_free_with(t: &TriangleTable) -> Option<EdgeColoring> {
    let mut s = FreeSearch::new(t);
    if !s.pin_first() {
        return None;
    }
    let mut found = None;
    let _ = s.run(0, &mut |assign| {
        found = Some(t.coloring_of(assign));
        ControlFlow::Break(())
    });
    found
}

/// `G → (3,3)`: every 2-colouring of the edges has a monochromatic triangle.
pub fn arrows_33(g: &Graph) -> bool {
    find_33_free_coloring(g).is_none()
}

/// Minimal (3,3)-Ramsey: arrows, no isolated vertex, and no single-edge
/// deletion still arrows.
pub fn is_minimal_ramsey(g: &Graph) -> bool {
    if g.has_isolated_vertex() || !arrows_33(g) {
        return false;
    }
    g.edges()
        .iter()
        .all(|(u, v)| !arrows_33(&g.delete_edge(u, v).expect("edge of g")))
}

/// Calls `visit` for every (3,3)-free colouring of `g`; with `modulo_swap`,
/// once per pair of colour-swapped colourings. Stops early on `Break`.
pub fn for_each_33_free_coloring<F>(g: &Graph, modulo_swap: bool, mut visit: F)
where
    F: FnMut(&EdgeColoring) -> ControlFlow<()>,
{
    let t = TriangleTable::new(g);
    for_each_free_in(&t, modulo_swap, &mut |assign| visit(&t.coloring_of(assign)));
}

/// Raw enumeration: `visit` receives the colour (0 or 1) of each edge in the
/// lexicographic edge order of the table.
pub(crate) fn for_each_free_in<F>(t: &TriangleTable, modulo_swap: bool, visit: &mut F)
where
    F: FnMut(&[i8]) -> ControlFlow<()>,
{
    let mut s = FreeSearch::new(t);
    if modulo_swap && !s.pin_first() {
        return;
    }
    let _ = s.run(0, visit);
}

pub fn enumerate_33_free_colorings(g: &Graph, modulo_swap: bool) -> Vec<EdgeColoring> {
    let mut out = Vec::new();
    for_each_33_free_coloring(g, modulo_swap, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Least number of monochromatic triangles over all 2-colourings, with a
/// colouring attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityResult {
    pub value: usize,
    pub witness: EdgeColoring,
}

/// K3-multiplicity `M(G)`.
///
/// Decides "some colouring has at most `t` monochromatic triangles" for
/// `t = 0, 1, 2, ...`; the first feasible `t` is the minimum.
pub fn multiplicity(g: &Graph) -> MultiplicityResult {
    let t = TriangleTable::new(g);
    if let Some(witness) = find_free_with(&t) {
        return MultiplicityResult { value: 0, witness };
    }
    for budget in 1..=t.triangles.len() {
        if let Some(witness) = BoundedSearch::new(&t, budget).solve() {
            debug_assert_eq!(witness.monochromatic_triangles(), budget);
            return MultiplicityResult {
                value: budget,
                witness,
            };
        }
    }
    unreachable!("a colouring never has more monochromatic triangles than triangles")
}

/// Search for a colouring with at most `budget` monochromatic triangles.
struct BoundedSearch<'a> {
    t: &'a TriangleTable,
    budget: usize,
    assign: Vec<i8>,
}

impl<'a> BoundedSearch<'a> {
    fn new(t: &'a TriangleTable, budget: usize) -> Self {
        BoundedSearch {
            t,
            budget,
            assign: vec![UNSET; t.edges.len()],
        }
    }

    fn solve(mut self) -> Option<EdgeColoring> {
        if self.t.order.is_empty() {
            return Some(self.t.coloring_of(&self.assign));
        }
        let first = self.t.order[0];
        self.assign[first as usize] = 0;
        if self.go(1, 0) {
            Some(self.t.coloring_of(&self.assign))
        } else {
            None
        }
    }

    /// Monochromatic triangles completed by colouring `e`.
    fn completed(&self, e: u32) -> usize {
        let c = self.assign[e as usize];
        self.t.incident[e as usize]
            .iter()
            .filter(|&&ti| {
                self.t.triangles[ti as usize]
                    .iter()
                    .all(|&x| self.assign[x as usize] == c)
            })
            .count()
    }

    /// The colour of `e` that completes fewer monochromatic triangles now.
    fn cheaper_color(&mut self, e: u32) -> i8 {
        let mut done = [0; 2];
        for (c, d) in done.iter_mut().enumerate() {
            self.assign[e as usize] = c as i8;
            *d = self.completed(e);
        }
        self.assign[e as usize] = UNSET;
        if done[1] < done[0] {
            1
        } else {
            0
        }
    }

    /// Lower bound on the monochromatic triangles any completion adds: an
    /// unset edge closing triangles whose other two edges are both coloured
    /// completes at least the smaller of its two colour counts. Such
    /// triangles have one unset edge each, so the terms do not overlap.
    fn forced(&self) -> usize {
        let mut total = 0;
        for (e, &a) in self.assign.iter().enumerate() {
            if a != UNSET {
                continue;
            }
            let mut closes = [0usize; 2];
            for &ti in &self.t.incident[e] {
                let mut other = self.t.triangles[ti as usize]
                    .iter()
                    .filter(|&&x| x as usize != e)
                    .map(|&x| self.assign[x as usize]);
                let (x, y) = (other.next().unwrap_or(UNSET), other.next().unwrap_or(UNSET));
                if x != UNSET && x == y {
                    closes[x as usize] += 1;
                }
            }
            total += closes[0].min(closes[1]);
        }
        total
    }

    /// With no slack left, colours forced by two same-coloured edges.
    /// Returns false on a contradiction.
    fn propagate_tight(&mut self, trail: &mut Vec<u32>) -> bool {
        loop {
            let mut changed = false;
            for tri in &self.t.triangles {
                let cs = tri.map(|x| self.assign[x as usize]);
                let unset: Vec<usize> = (0..3).filter(|&i| cs[i] == UNSET).collect();
                if unset.len() != 1 {
                    continue;
                }
                let i = unset[0];
                let (a, b) = (cs[(i + 1) % 3], cs[(i + 2) % 3]);
                if a == b {
                    let e = tri[i];
                    self.assign[e as usize] = 1 - a;
                    trail.push(e);
                    changed = true;
                    if self.completed(e) > 0 {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn go(&mut self, pos: usize, count: usize) -> bool {
        let mut pos = pos;
        while pos < self.t.order.len() && self.assign[self.t.order[pos] as usize] != UNSET {
            pos += 1;
        }
        if pos == self.t.order.len() {
            return true;
        }
        let e = self.t.order[pos];
        let first = self.cheaper_color(e);
        for c in [first, 1 - first] {
            self.assign[e as usize] = c;
            let now = count + self.completed(e);
            if now + self.forced() <= self.budget {
                let mut trail = Vec::new();
                let ok = now < self.budget || self.propagate_tight(&mut trail);
                if ok && self.go(pos + 1, now) {
                    return true;
                }
                for x in trail {
                    self.assign[x as usize] = UNSET;
                }
            }
            self.assign[e as usize] = UNSET;
        }
        false
    }
}
