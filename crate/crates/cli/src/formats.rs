//! Text formats: edge lists, graph6 and cover files.
//!
//! Line numbers in errors are 1-based and count every physical line,
//! comments included.

use genpos::bounds::{CoverPart, IsometricCover, PartKind};
use genpos::{build_graph, Graph};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: malformed edge: {reason}")]
    MalformedEdge { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: genpos::Error },
    #[error("line {line}, byte {pos}: character {ch:?} is outside the graph6 range")]
    BadChecksumChar { line: usize, pos: usize, ch: char },
    #[error("line {line}: malformed graph6: {reason}")]
    MalformedGraph6 { line: usize, reason: String },
    #[error("line {line}: malformed cover part: {reason}")]
    MalformedCover { line: usize, reason: String },
    #[error("empty input")]
    Empty,
}

/// Lines that carry content, with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `n m` header, then `m` lines `u v` with 0-based labels.
pub fn parse_edge_list(text: &str) -> Result<Graph, InputError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(InputError::Empty)?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let malformed = |reason: &str| InputError::MalformedHeader { line: hline, reason: reason.into() };
    let [n, m] = nums[..] else {
        return Err(malformed("expected two integers `n m`"));
    };
    let n: usize = n.parse().map_err(|_| malformed("vertex count is not a non-negative integer"))?;
    let m: usize = m.parse().map_err(|_| malformed("edge count is not a non-negative integer"))?;

    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (line, l) in lines {
        last = line;
        let bad = |reason: &str| InputError::MalformedEdge { line, reason: reason.into() };
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = parts[..] else {
            return Err(bad("expected two vertex labels `u v`"));
        };
        let u: usize = u.parse().map_err(|_| bad("label is not a non-negative integer"))?;
        let v: usize = v.parse().map_err(|_| bad("label is not a non-negative integer"))?;
        for x in [u, v] {
            if x >= n {
                return Err(InputError::Graph { line, source: genpos::Error::VertexOutOfRange { vertex: x, n } });
            }
        }
        if u == v {
            return Err(InputError::Graph { line, source: genpos::Error::SelfLoop { vertex: u } });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(InputError::MalformedHeader {
            line: hline,
            reason: format!("header declares {m} edges but {} were given", edges.len()),
        });
    }
    build_graph(n, &edges).map_err(|source| InputError::Graph { line: last, source })
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

const GRAPH6_HEADER: &str = ">>graph6<<";
const BIAS: u8 = 63;

fn decode_graph6_line(line: usize, code: &str) -> Result<Graph, InputError> {
    let code = code.strip_prefix(GRAPH6_HEADER).unwrap_or(code);
    let bytes = code.as_bytes();
    if let Some((pos, &b)) = bytes.iter().enumerate().find(|(_, &b)| !(BIAS..=126).contains(&b)) {
        return Err(InputError::BadChecksumChar { line, pos, ch: b as char });
    }
    let data: Vec<u8> = bytes.iter().map(|b| b - BIAS).collect();
    let malformed = |reason: String| InputError::MalformedGraph6 { line, reason };
    let (n, body) = match data.first() {
        None => return Err(malformed("empty code".into())),
        Some(&63) => {
            if data.get(1) == Some(&63) {
                return Err(malformed("orders above 258047 are not supported".into()));
            }
            if data.len() < 4 {
                return Err(malformed("truncated size field".into()));
            }
            let n = (data[1] as usize) << 12 | (data[2] as usize) << 6 | data[3] as usize;
            (n, &data[4..])
        }
        Some(&n) => (n as usize, &data[1..]),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(malformed(format!("order {n} needs {} data bytes, found {}", bits.div_ceil(6), body.len())));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if body[k / 6] >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    build_graph(n, &edges).map_err(|source| InputError::Graph { line, source })
}

/// Exactly one graph6 code, optionally preceded by the `>>graph6<<` header.
pub fn parse_graph6(text: &str) -> Result<Graph, InputError> {
    let mut graphs = parse_graph6_batch(text)?;
    match graphs.len() {
        1 => Ok(graphs.pop().unwrap()),
        k => Err(InputError::MalformedGraph6 { line: 1, reason: format!("expected one graph, found {k}") }),
    }
}

/// One graph6 code per line.
pub fn parse_graph6_batch(text: &str) -> Result<Vec<Graph>, InputError> {
    let graphs = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.is_empty() && *l != GRAPH6_HEADER)
        .map(|(line, l)| decode_graph6_line(line, l))
        .collect::<Result<Vec<_>, _>>()?;
    if graphs.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(graphs)
}

pub fn serialize_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut data: Vec<u8> =
        if n <= 62 { vec![n as u8] } else { vec![63, (n >> 12 & 63) as u8, (n >> 6 & 63) as u8, (n & 63) as u8] };
    let mut word = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            word = word << 1 | u8::from(g.has_edge(i, j));
            k += 1;
            if k % 6 == 0 {
                data.push(word);
                word = 0;
            }
        }
    }
    if k % 6 != 0 {
        data.push(word << (6 - k % 6));
    }
    data.into_iter().map(|b| (b + BIAS) as char).collect()
}

/// One part per line: comma-separated vertices with an optional `path:` or
/// `cycle:` tag. Untagged parts are general.
pub fn parse_cover(text: &str) -> Result<IsometricCover, InputError> {
    let mut parts = Vec::new();
    for (line, l) in content_lines(text) {
        let bad = |reason: String| InputError::MalformedCover { line, reason };
        let (kind, rest) = match l.split_once(':') {
            Some((tag, rest)) => match tag.trim().to_ascii_lowercase().as_str() {
                "path" => (PartKind::Path, rest),
                "cycle" => (PartKind::Cycle, rest),
                "general" => (PartKind::General, rest),
                other => return Err(bad(format!("unknown tag {other:?}"))),
            },
            None => (PartKind::General, l),
        };
        let vertices = parse_vertex_list(rest).map_err(bad)?;
        if vertices.is_empty() {
            return Err(bad("part has no vertices".into()));
        }
        parts.push(CoverPart { vertices, kind });
    }
    if parts.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(IsometricCover { parts })
}

pub fn format_cover(cover: &IsometricCover) -> String {
    let mut out = String::new();
    for p in &cover.parts {
        let tag = match p.kind {
            PartKind::Path => "path:",
            PartKind::Cycle => "cycle:",
            PartKind::General => "",
        };
        let vs: Vec<String> = p.vertices.iter().map(usize::to_string).collect();
        out.push_str(&format!("{tag}{}\n", vs.join(",")));
    }
    out
}

/// `"i,j,k"`; whitespace around entries is ignored and an empty string is
/// the empty set.
pub fn parse_vertex_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("{t:?} is not a vertex index")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use genpos::families::{make_cycle, make_path, make_petersen};

    #[test]
    fn edge_list_examples() {
        assert_eq!(parse_edge_list("3 2\n0 1\n1 2"), Ok(make_path(3).unwrap().graph));
        assert_eq!(parse_edge_list("2 1\n0 1\n").unwrap().edge_count(), 1);
        assert_eq!(
            parse_edge_list("3 1\n0 3"),
            Err(InputError::Graph { line: 2, source: genpos::Error::VertexOutOfRange { vertex: 3, n: 3 } })
        );
        assert_eq!(parse_edge_list("# comment\n3 2\n\n0 1\n# mid\n1 2\n"), Ok(make_path(3).unwrap().graph));
        assert!(matches!(parse_edge_list("3\n0 1"), Err(InputError::MalformedHeader { line: 1, .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1\n1 x"), Err(InputError::MalformedEdge { line: 3, .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1"), Err(InputError::MalformedHeader { .. })));
        assert!(matches!(parse_edge_list("3 1\n1 1"), Err(InputError::Graph { line: 2, .. })));
        assert!(matches!(
            parse_edge_list("4 2\n0 1\n2 3"),
            Err(InputError::Graph { source: genpos::Error::Disconnected { vertex: 2 }, .. })
        ));
        assert_eq!(parse_edge_list(""), Err(InputError::Empty));
    }

    #[test]
    fn graph6_known_codes() {
        // Reference codes produced by an independent graph6 writer.
        let c5 = make_cycle(5).unwrap().graph;
        assert_eq!(serialize_graph6(&c5), "Dhc");
        assert_eq!(parse_graph6("Dhc"), Ok(c5.clone()));
        assert_eq!(parse_graph6(">>graph6<<Dhc\n"), Ok(c5));
        assert_eq!(serialize_graph6(&make_petersen().graph), "IheA@GUAo");
        assert_eq!(serialize_graph6(&make_path(2).unwrap().graph), "A_");
        assert!(matches!(parse_graph6("D h"), Err(InputError::BadChecksumChar { pos: 1, ch: ' ', .. })));
        assert!(matches!(parse_graph6("C"), Err(InputError::MalformedGraph6 { .. })));
        assert!(matches!(parse_graph6("C??"), Err(InputError::MalformedGraph6 { .. })));
        assert!(matches!(
            parse_graph6("CK"),
            Err(InputError::Graph { source: genpos::Error::Disconnected { .. }, .. })
        ));
        assert_eq!(parse_graph6_batch("Dhc\nA_\n").unwrap().len(), 2);
        assert!(parse_graph6("Dhc\nA_").is_err());
    }

    #[test]
    fn large_order_prefix() {
        let p = make_path(70).unwrap().graph;
        let code = serialize_graph6(&p);
        assert!(code.starts_with('~'));
        assert_eq!(parse_graph6(&code), Ok(p));
    }

    #[test]
    fn cover_files() {
        let c = parse_cover("cycle: 0,1,2,3,4\ncycle:5,7,9,6,8\n").unwrap();
        assert_eq!(&c, make_petersen().cover.as_ref().unwrap());
        assert_eq!(parse_cover(&format_cover(&c)), Ok(c));
        let g = parse_cover("# parts\n0, 1\npath:2,3\n").unwrap();
        assert_eq!(g.parts[0].kind, PartKind::General);
        assert_eq!(g.parts[1].kind, PartKind::Path);
        assert!(matches!(parse_cover("tree:0,1"), Err(InputError::MalformedCover { line: 1, .. })));
        assert!(matches!(parse_cover("0,x"), Err(InputError::MalformedCover { .. })));
    }
}
