//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;
use ramsey_core::arrowing::{Color, EdgeColoring};
use ramsey_core::bits::members;
use ramsey_core::{Graph, VertexSet};

pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if code >> k & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph on `n` vertices, each pair present with a random density.
pub fn arb_graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    (n, 0.05f64..0.95).prop_flat_map(|(n, p)| {
        proptest::collection::vec(proptest::bool::weighted(p), n * (n - 1) / 2).prop_map(
            move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            },
        )
    })
}

pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Graph with a random relabeling.
pub fn arb_relabeled(
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), arb_permutation(n))
    })
}

pub fn brute_clique_number(g: &Graph) -> usize {
    (0u64..1 << g.order())
        .filter(|&s| g.is_clique(s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn brute_colorable(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if k == 0 {
        return n == 0;
    }
    let total = (k as u64).pow(n as u32);
    (0..total).any(|mut code| {
        let mut col = vec![0; n];
        for c in col.iter_mut() {
            *c = (code % k as u64) as usize;
            code /= k as u64;
        }
        g.edges().iter().all(|(u, v)| col[u] != col[v])
    })
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Least adjacency code over all relabelings.
pub fn brute_canonical_code(g: &Graph, perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            let h = g.relabel(p);
            let mut code = 0u64;
            let mut k = 0;
            for v in 1..h.order() {
                for u in 0..v {
                    if h.has_edge(u, v) {
                        code |= 1 << k;
                    }
                    k += 1;
                }
            }
            code
        })
        .min()
        .unwrap()
}

/// Number of isomorphism classes of `n`-vertex graphs, by permutation orbits.
pub fn brute_census(n: usize) -> usize {
    let perms = permutations(n);
    let pairs = n * n.saturating_sub(1) / 2;
    let mut seen = HashSet::new();
    for code in 0u64..1 << pairs {
        seen.insert(brute_canonical_code(&graph_from_code(n, code), &perms));
    }
    seen.len()
}

/// `a` is isomorphic to a spanning subgraph of `b` (same order).
pub fn is_spanning_subgraph(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && permutations(a.order()).iter().any(|p| {
            let r = a.relabel(p);
            (0..r.order()).all(|v| r.neighbors(v) & !b.neighbors(v) == 0)
        })
}

/// Every 2-colouring of the edges, as a list of colours per edge.
pub fn all_colorings(g: &Graph) -> impl Iterator<Item = EdgeColoring> + '_ {
    let edges = g.edges();
    let m = edges.len();
    (0u64..1 << m).map(move |code| {
        let colors: Vec<Color> = (0..m)
            .map(|i| {
                if code >> i & 1 == 1 {
                    Color::Second
                } else {
                    Color::First
                }
            })
            .collect();
        EdgeColoring::from_colors(g.order(), &edges, &colors)
    })
}

/// Independent validator: scans every vertex triple.
pub fn has_monochromatic_triangle(g: &Graph, c: &EdgeColoring) -> bool {
    let n = g.order();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, d) && g.has_edge(b, d) {
                    let x = c.color(a, b);
                    if x == c.color(a, d) && x == c.color(b, d) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

pub fn brute_arrows(g: &Graph) -> bool {
    all_colorings(g).all(|c| has_monochromatic_triangle(g, &c))
}

pub fn brute_multiplicity(g: &Graph) -> usize {
    all_colorings(g)
        .map(|c| c.monochromatic_triangles())
        .min()
        .unwrap_or(0)
}

/// Spoke colourings tried exhaustively.
pub fn brute_extends(h: &Graph, c: &EdgeColoring, m: VertexSet) -> bool {
    let verts: Vec<usize> = members(m).collect();
    (0u64..1 << verts.len()).any(|mask| {
        let spoke = |v: usize| {
            let i = verts.iter().position(|&x| x == v).unwrap();
            if mask >> i & 1 == 1 {
                Color::First
            } else {
                Color::Second
            }
        };
        verts.iter().all(|&a| {
            members(h.neighbors(a) & m).all(|b| {
                let col = c.color(a, b).unwrap();
                !(spoke(a) == col && spoke(b) == col)
            })
        })
    })
}

pub fn graham() -> Graph {
    Graph::join(&Graph::complete(3).unwrap(), &Graph::cycle(5).unwrap()).unwrap()
}
