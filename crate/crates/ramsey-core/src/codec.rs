//! File formats: graph6, plain edge lists, and a JSON form that carries
//! color and order data.
//!
//! Text-level problems surface as `Error::Parse` with a byte offset;
//! structurally invalid content (loops, bad colors) keeps its structural
//! error so callers can tell the two apart.

use crate::error::{Error, Result};
use crate::structures::{Graph, OrderedColoredGraph};
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Format {
    Graph6,
    EdgeList,
    OcgJson,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "graph6" => Ok(Format::Graph6),
            "edges" => Ok(Format::EdgeList),
            "ocg-json" => Ok(Format::OcgJson),
            other => Err(Error::Parse {
                offset: 0,
                message: format!("unknown format {other:?}, expected graph6, edges or ocg-json"),
            }),
        }
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// graph6 uses one size byte `n + 63` (n <= 62 here), then the column-major
/// upper-triangle bits packed into 6-bit groups, most significant bit first,
/// each group offset by 63.
pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.vertex_count();
    if n > 62 {
        return Err(Error::SizeCapExceeded {
            what: "graph6 encoding",
            cap: 62,
            actual: n,
        });
    }
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    let bits = g.upper_triangle_bits();
    for group in bits.chunks(6) {
        let mut value = 0u8;
        for (k, &bit) in group.iter().enumerate() {
            if bit {
                value |= 1 << (5 - k);
            }
        }
        out.push((value + 63) as char);
    }
    Ok(out)
}

pub fn read_graph6(input: &str) -> Result<Graph> {
    let body = input.trim_end();
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(0, "empty graph6 input"));
    }
    let header = bytes[0];
    if header == 126 {
        return Err(parse_err(0, "multi-byte graph6 sizes are not supported"));
    }
    if !(63..=125).contains(&header) {
        return Err(parse_err(0, format!("invalid graph6 size byte {header}")));
    }
    let n = (header - 63) as usize;
    let bit_count = n * n.saturating_sub(1) / 2;
    let data_len = bit_count.div_ceil(6);
    if bytes.len() - 1 < data_len {
        return Err(parse_err(
            bytes.len(),
            format!("graph6 data truncated, expected {data_len} data bytes"),
        ));
    }
    if bytes.len() - 1 > data_len {
        return Err(parse_err(1 + data_len, "trailing bytes after graph6 data"));
    }
    let mut edges = Vec::new();
    let mut t = 0usize;
    'outer: for i in 1..n {
        for j in 0..i {
            let byte = bytes[1 + t / 6];
            if !(63..=126).contains(&byte) {
                return Err(parse_err(
                    1 + t / 6,
                    format!("invalid graph6 data byte {byte}"),
                ));
            }
            if (byte - 63) >> (5 - t % 6) & 1 == 1 {
                edges.push((j, i));
            }
            t += 1;
            if t == bit_count {
                break 'outer;
            }
        }
    }
    // Padding bits must be zero; anything else is a malformed encoding.
    if bit_count > 0 {
        let last = bytes[1 + (bit_count - 1) / 6];
        if !(63..=126).contains(&last) {
            return Err(parse_err(
                1 + (bit_count - 1) / 6,
                format!("invalid graph6 data byte {last}"),
            ));
        }
        let used = bit_count - (bit_count - 1) / 6 * 6;
        if (last - 63) & ((1 << (6 - used)) - 1) != 0 {
            return Err(parse_err(
                1 + (bit_count - 1) / 6,
                "nonzero graph6 padding bits",
            ));
        }
    }
    Graph::new(n, &edges)
}

fn tokens_with_offsets(line: &str, base: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push((base + start, line[start..i].to_string()));
    }
    out
}

fn parse_usize(token: &str, offset: usize) -> Result<usize> {
    token.parse::<usize>().map_err(|_| {
        parse_err(
            offset,
            format!("expected a nonnegative integer, got {token:?}"),
        )
    })
}

/// Edge-list text: first line is the vertex count, then one `u v` pair
/// per line. Blank lines are ignored.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for &(a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

pub fn read_edge_list(input: &str) -> Result<Graph> {
    let mut offset = 0usize;
    let mut lines = Vec::new();
    for raw in input.split_inclusive('\n') {
        let line = raw.trim_end_matches(['\n', '\r']);
        if !line.trim().is_empty() {
            lines.push((offset, line));
        }
        offset += raw.len();
    }
    let Some(&(first_offset, first)) = lines.first() else {
        return Err(parse_err(0, "empty edge-list input"));
    };
    let head = tokens_with_offsets(first, first_offset);
    if head.len() != 1 {
        return Err(parse_err(
            first_offset,
            "first line must hold only the vertex count",
        ));
    }
    let vertex_count = parse_usize(&head[0].1, head[0].0)?;
    let mut edges = Vec::new();
    for &(line_offset, line) in &lines[1..] {
        let tokens = tokens_with_offsets(line, line_offset);
        if tokens.len() != 2 {
            return Err(parse_err(
                line_offset,
                "edge lines must hold exactly two endpoints",
            ));
        }
        let a = parse_usize(&tokens[0].1, tokens[0].0)?;
        let b = parse_usize(&tokens[1].1, tokens[1].0)?;
        edges.push((a, b));
    }
    Graph::new(vertex_count, &edges)
}

#[derive(Serialize, Deserialize)]
struct OcgJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<Vec<usize>>,
    ordered: bool,
}

/// JSON object with fields `vertices`, `edges`, `n`, optional `colors`,
/// and `ordered`.
pub fn write_ocg_json(ocg: &OrderedColoredGraph) -> String {
    let record = OcgJson {
        vertices: ocg.vertex_count(),
        edges: ocg.graph().edges().to_vec(),
        n: ocg.n(),
        colors: ocg.coloring().map(|c| c.to_vec()),
        ordered: ocg.ordered(),
    };
    serde_json::to_string(&record).expect("serialization cannot fail")
}

pub fn read_ocg_json(input: &str) -> Result<OrderedColoredGraph> {
    let record: OcgJson = serde_json::from_str(input).map_err(|e| {
        let offset = byte_offset(input, e.line(), e.column());
        parse_err(offset, e.to_string())
    })?;
    let graph = Graph::new(record.vertices, &record.edges)?;
    OrderedColoredGraph::new(graph, record.n, record.colors, record.ordered)
}

/// serde_json reports 1-based line and column; convert to a byte offset.
fn byte_offset(input: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut remaining = line - 1;
    let mut offset = 0;
    for raw in input.split_inclusive('\n') {
        if remaining == 0 {
            break;
        }
        offset += raw.len();
        remaining -= 1;
    }
    offset + column.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::OrderedColoredGraph;

    #[test]
    fn graph6_k4_is_c_tilde() {
        // Size byte 'C' = 4 + 63; six upper-triangle bits all set pack to
        // 0b111111 + 63 = '~'.
        let k4 = Graph::complete(4);
        assert_eq!(write_graph6(&k4).unwrap(), "C~");
        assert_eq!(read_graph6("C~").unwrap(), k4);
    }

    #[test]
    fn graph6_known_encodings() {
        // K2: single bit 1 padded to 100000 = 32, byte 95 = '_'.
        assert_eq!(write_graph6(&Graph::complete(2)).unwrap(), "A_");
        // C5 bits (0,1)(0,2)(1,2)(0,3)(1,3)(2,3)(0,4)(1,4)(2,4)(3,4)
        // = 101001 1001(00) -> 'h', 'c'.
        assert_eq!(write_graph6(&Graph::cycle(5)).unwrap(), "Dhc");
        assert_eq!(read_graph6("Dhc").unwrap(), Graph::cycle(5));
        assert_eq!(write_graph6(&Graph::edgeless(1)).unwrap(), "@");
        assert_eq!(write_graph6(&Graph::edgeless(0)).unwrap(), "?");
        assert_eq!(read_graph6("?").unwrap(), Graph::edgeless(0));
    }

    #[test]
    fn graph6_accepts_trailing_newline() {
        assert_eq!(read_graph6("C~\n").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_parse_errors_carry_offsets() {
        match read_graph6("C~~").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 2),
            other => panic!("unexpected error {other:?}"),
        }
        match read_graph6("C").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 1),
            other => panic!("unexpected error {other:?}"),
        }
        match read_graph6("~??").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected error {other:?}"),
        }
        // K2 with a stray padding bit: 100001 + 63 = '`'.
        match read_graph6("A`").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::path(4);
        let text = write_edge_list(&g);
        assert_eq!(text, "4\n0 1\n1 2\n2 3\n");
        assert_eq!(read_edge_list(&text).unwrap(), g);
        assert_eq!(read_edge_list("3\n").unwrap(), Graph::edgeless(3));
    }

    #[test]
    fn edge_list_errors() {
        match read_edge_list("3\n0 1\nx 2\n").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 6),
            other => panic!("unexpected error {other:?}"),
        }
        match read_edge_list("").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(
            read_edge_list("2\n1 1\n").unwrap_err(),
            Error::LoopEdge { vertex: 1 }
        );
        assert_eq!(
            read_edge_list("2\n0 5\n").unwrap_err(),
            Error::VertexOutOfRange {
                vertex: 5,
                vertex_count: 2
            }
        );
    }

    #[test]
    fn ocg_json_round_trip() {
        let colored =
            OrderedColoredGraph::new(Graph::path(3), 2, Some(vec![1, 2, 1]), true).unwrap();
        let text = write_ocg_json(&colored);
        assert_eq!(
            text,
            r#"{"vertices":3,"edges":[[0,1],[1,2]],"n":2,"colors":[1,2,1],"ordered":true}"#
        );
        assert_eq!(read_ocg_json(&text).unwrap(), colored);

        let plain = OrderedColoredGraph::plain(Graph::complete(3), 4).unwrap();
        assert_eq!(read_ocg_json(&write_ocg_json(&plain)).unwrap(), plain);
    }

    #[test]
    fn ocg_json_errors() {
        match read_ocg_json("{\"vertices\": 2,}").unwrap_err() {
            Error::Parse { offset, .. } => assert!(offset > 0),
            other => panic!("unexpected error {other:?}"),
        }
        let bad_color = r#"{"vertices":2,"edges":[],"n":2,"colors":[1,9],"ordered":true}"#;
        assert_eq!(
            read_ocg_json(bad_color).unwrap_err(),
            Error::ColorOutOfRange { color: 9, n: 2 }
        );
    }

    #[test]
    fn format_names() {
        assert_eq!("graph6".parse::<Format>().unwrap(), Format::Graph6);
        assert_eq!("edges".parse::<Format>().unwrap(), Format::EdgeList);
        assert_eq!("ocg-json".parse::<Format>().unwrap(), Format::OcgJson);
        assert!("dot".parse::<Format>().is_err());
    }
}
