//! Browser bindings: analyse a graph6 string, edit it edge by edge, and
//! compute its K3-multiplicity. Every export returns JSON or graph6 text.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use ramsey_core::arrowing::{
    find_33_free_coloring, is_minimal_ramsey, multiplicity, Color, EdgeColoring, TriangleTable,
};
use ramsey_core::canonical::automorphism_count;
use ramsey_core::graph6::{from_graph6, to_graph6};
use ramsey_core::invariants::InvariantProfile;
use ramsey_core::Graph;

/// Largest order the page will analyse; the searches behind it stay interactive below this.
pub const MAX_DEMO_ORDER: usize = 16;

/// Most triangles the exact multiplicity search is run on (K8 has 56).
pub const MAX_MULTIPLICITY_TRIANGLES: usize = 60;

#[derive(Serialize)]
struct Analysis {
    graph6: String,
    order: usize,
    edges: Vec<[usize; 2]>,
    invariants: InvariantProfile,
    automorphisms: String,
    arrows: bool,
    minimal: bool,
    /// Colour (0 or 1) of each edge in a triangle-free 2-colouring, when one exists.
    coloring: Option<Vec<u8>>,
}

#[derive(Serialize)]
struct Multiplicity {
    value: usize,
    coloring: Vec<u8>,
    triangles: Vec<[usize; 3]>,
}

#[derive(Serialize)]
struct Preset {
    name: &'static str,
    graph6: String,
}

fn parse(g6: &str) -> Result<Graph, String> {
    let g = from_graph6(g6.trim()).map_err(|e| e.to_string())?;
    if g.order() > MAX_DEMO_ORDER {
        return Err(format!(
            "{} vertices; the demo handles at most {MAX_DEMO_ORDER}",
            g.order()
        ));
    }
    Ok(g)
}

fn edge_list(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().iter().map(|e| [e.0, e.1]).collect()
}

fn colors(g: &Graph, c: &EdgeColoring) -> Vec<u8> {
    c.colors(&g.edges())
        .into_iter()
        .map(|c| match c {
            Color::First => 0,
            Color::Second => 1,
        })
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Invariants, |Aut|, arrowing, minimality and a witness colouring.
#[wasm_bindgen]
pub fn analyze(g6: &str) -> Result<String, String> {
    let g = parse(g6)?;
    let coloring = find_33_free_coloring(&g);
    let analysis = Analysis {
        graph6: to_graph6(&g),
        order: g.order(),
        edges: edge_list(&g),
        invariants: InvariantProfile::of(&g),
        automorphisms: automorphism_count(&g)
            .map_err(|e| e.to_string())?
            .0
            .to_string(),
        arrows: coloring.is_none(),
        minimal: coloring.is_none() && is_minimal_ramsey(&g),
        coloring: coloring.map(|c| colors(&g, &c)),
    };
    to_json(&analysis)
}

/// Fewest monochromatic triangles over all 2-colourings, with one colouring
/// attaining it and the triangles it leaves monochromatic.
#[wasm_bindgen]
pub fn min_monochromatic(g6: &str) -> Result<String, String> {
    let g = parse(g6)?;
    let triangles = TriangleTable::new(&g).triangle_count();
    if triangles > MAX_MULTIPLICITY_TRIANGLES {
        return Err(format!(
            "{triangles} triangles; the exact search here is limited to {MAX_MULTIPLICITY_TRIANGLES}"
        ));
    }
    let m = multiplicity(&g);
    let n = g.order();
    let mut triangles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let ab = m.witness.color(a, b);
                if ab.is_some() && ab == m.witness.color(a, c) && ab == m.witness.color(b, c) {
                    triangles.push([a, b, c]);
                }
            }
        }
    }
    to_json(&Multiplicity {
        value: m.value,
        coloring: colors(&g, &m.witness),
        triangles,
    })
}

/// Adds the edge `uv` if absent, removes it otherwise.
#[wasm_bindgen]
pub fn toggle_edge(g6: &str, u: usize, v: usize) -> Result<String, String> {
    let g = parse(g6)?;
    let h = if g.has_edge(u, v) {
        g.delete_edge(u, v)
    } else {
        g.add_edge(u, v)
    };
    h.map(|h| to_graph6(&h)).map_err(|e| e.to_string())
}

/// Named starting graphs for the page.
#[wasm_bindgen]
pub fn presets() -> String {
    let k = |n| Graph::complete(n).expect("small complete graph");
    let c = |n| Graph::cycle(n).expect("small cycle");
    let join = |a: &Graph, b: &Graph| Graph::join(a, b).expect("small join");
    let list = [
        ("K5", k(5)),
        ("K6", k(6)),
        ("K3 + C5", join(&k(3), &c(5))),
        ("K3 + C7", join(&k(3), &c(7))),
        ("K3 + C9", join(&k(3), &c(9))),
    ];
    let presets: Vec<Preset> = list
        .into_iter()
        .map(|(name, g)| Preset {
            name,
            graph6: to_graph6(&g),
        })
        .collect();
    serde_json::to_string(&presets).expect("presets serialize")
}
