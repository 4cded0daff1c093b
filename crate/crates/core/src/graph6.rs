//! The graph6 interchange format.
//!
//! Encoding follows the standard definition used by graph-census tools: a
//! size prefix `N(n)` followed by the upper triangle of the adjacency matrix,
//! read column by column (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed six bits
//! per printable byte with an offset of 63.

use std::io::{self, BufRead, Write};

use crate::bits::bit;
use crate::graph::{Graph, GraphError, MAX_VERTICES};

const HEADER: &[u8] = b">>graph6<<";

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        for i in 0..j {
            acc = (acc << 1) | u8::from(row & bit(i) != 0);
            used += 1;
            if used == 6 {
                out.push(acc + 63);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push((acc << (6 - used)) + 63);
    }
    // every byte is in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn malformed(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

/// Decodes one graph6 string. A leading `>>graph6<<` header and trailing
/// line terminators are accepted.
pub fn from_graph6(s: &str) -> Result<Graph, GraphError> {
    let bytes = s.as_bytes();
    let start = if bytes.starts_with(HEADER) {
        HEADER.len()
    } else {
        0
    };
    let mut end = bytes.len();
    while end > start && matches!(bytes[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let data = &bytes[start..end];
    if data.is_empty() {
        return Err(malformed(start, "empty input"));
    }
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(malformed(
                start + i,
                format!("byte {b:#04x} outside 63..=126"),
            ));
        }
    }
    let (n, body_at) = if data[0] != 126 {
        (usize::from(data[0] - 63), 1)
    } else {
        if data.len() < 4 {
            return Err(malformed(start + data.len(), "truncated size field"));
        }
        if data[1] == 126 {
            return Err(malformed(
                start + 1,
                "graphs above 258047 vertices are not supported",
            ));
        }
        let n = data[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
        (n, 4)
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(malformed(start, format!("vertex count {n} outside 1..=64")));
    }
    let bits = n * (n - 1) / 2;
    let body = &data[body_at..];
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(malformed(
            start + body_at + body.len().min(expected),
            format!("expected {expected} body bytes, found {}", body.len()),
        ));
    }
    let mut adj = vec![0u64; n];
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            if k == bits {
                break 'outer;
            }
            let byte = body[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                adj[i] |= bit(j);
                adj[j] |= bit(i);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[expected - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(malformed(
                start + body_at + expected - 1,
                "non-zero padding bits",
            ));
        }
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

/// Reads graph6 lines, skipping blank lines. Errors carry the line number.
pub fn read_graph6_lines<R: BufRead>(reader: R) -> impl Iterator<Item = io::Result<Graph>> {
    reader.lines().enumerate().filter_map(|(lineno, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e)),
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            return None;
        }
        Some(from_graph6(trimmed).map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: {e}", lineno + 1),
            )
        }))
    })
}

/// Writes one graph per line.
pub fn write_graph6_lines<'a, W, I>(mut w: W, graphs: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Graph>,
{
    for g in graphs {
        writeln!(w, "{}", to_graph6(g))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_graphs() {
        assert_eq!(to_graph6(&Graph::complete(1).unwrap()), "@");
        assert_eq!(to_graph6(&Graph::complete(2).unwrap()), "A_");
        assert_eq!(to_graph6(&Graph::empty(2).unwrap()), "A?");
    }

    #[test]
    fn published_vectors() {
        // 5 vertices, edges 0-2 0-4 1-3 3-4
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(from_graph6("DQc").unwrap(), g);
        assert_eq!(to_graph6(&Graph::complete(6).unwrap()), "E~~w");
    }

    #[test]
    fn long_size_prefix() {
        for n in [62, 63, 64] {
            let g = Graph::cycle(n).unwrap();
            let s = to_graph6(&g);
            if n > 62 {
                assert!(s.starts_with('~'));
            }
            assert_eq!(from_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn header_and_newline_tolerated() {
        let g = from_graph6(">>graph6<<A_\n").unwrap();
        assert_eq!(g, Graph::complete(2).unwrap());
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        assert!(matches!(
            from_graph6(""),
            Err(GraphError::Graph6 { offset: 0, .. })
        ));
        assert!(matches!(
            from_graph6("A"),
            Err(GraphError::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(from_graph6("A_?"), Err(GraphError::Graph6 { .. })));
        assert!(matches!(
            from_graph6("D Qc"),
            Err(GraphError::Graph6 { offset: 1, .. })
        ));
        // K2 with a padding bit set
        assert!(matches!(
            from_graph6("A`"),
            Err(GraphError::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(from_graph6("?"), Err(GraphError::Graph6 { .. })));
        assert!(from_graph6("~??~").is_err());
    }

    #[test]
    fn line_reader() {
        let text = "@\n\nA_\nE~~w\n";
        let gs: Vec<_> = read_graph6_lines(text.as_bytes())
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(gs.len(), 3);
        let bad: Vec<_> = read_graph6_lines("@\n!!\n".as_bytes()).collect();
        let err = bad[1].as_ref().unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }
}
