//! graph6 encoding (header-less) plus the JSON sidecar for incidence graphs.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMeta, IncidenceGraph};

fn size_prefix(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend_from_slice(&[126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    size_prefix(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    // upper triangle, column by column: (0,1),(0,2),(1,2),(0,3),...
    for j in 1..n as u32 {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

pub fn decode(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(i, format!("byte {b:#x} outside the graph6 range")));
        }
    }
    let six = |i: usize| -> Result<usize> {
        bytes.get(i).map(|&b| (b - 63) as usize).ok_or_else(|| parse_err(i, "truncated size header"))
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(parse_err(0, "empty input")),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0;
            for i in 2..8 {
                n = (n << 6) | six(i)?;
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0;
            for i in 1..4 {
                n = (n << 6) | six(i)?;
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let total_bits = n * n.saturating_sub(1) / 2;
    let need = total_bits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(parse_err(
            bytes.len().min(pos + need),
            format!("expected {need} data bytes for {n} vertices, found {}", bytes.len() - pos),
        ));
    }
    let mut lists = vec![Vec::new(); n];
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                lists[i].push(j as u32);
                lists[j].push(i as u32);
            }
            bit += 1;
        }
    }
    pos += need;
    if total_bits % 6 != 0 {
        let last = bytes[pos - 1] - 63;
        let pad = 6 - total_bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(pos - 1, "nonzero padding bits"));
        }
    }
    Graph::from_lists(lists)
}

/// The sidecar path next to a graph6 file.
pub fn sidecar_path(graph_path: &Path) -> PathBuf {
    graph_path.with_extension("json")
}

pub fn write_files(path: &Path, g: &IncidenceGraph) -> std::io::Result<()> {
    fs::write(path, encode(g.graph()) + "\n")?;
    let meta = serde_json::to_string_pretty(g.meta()).expect("metadata serializes");
    fs::write(sidecar_path(path), meta + "\n")
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: String, source: Error },
    #[error("{path}: sidecar line {line}, column {column}: {message}")]
    Sidecar { path: String, line: usize, column: usize, message: String },
}

pub fn read_files(path: &Path) -> std::result::Result<IncidenceGraph, ReadError> {
    let show = |p: &Path| p.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ReadError::Io { path: show(path), source })?;
    let graph = decode(&text).map_err(|source| ReadError::Graph { path: show(path), source })?;
    let side = sidecar_path(path);
    let meta_text = fs::read_to_string(&side).map_err(|source| ReadError::Io { path: show(&side), source })?;
    let meta: GraphMeta = serde_json::from_str(&meta_text).map_err(|e| ReadError::Sidecar {
        path: show(&side),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    IncidenceGraph::new(graph, meta).map_err(|source| ReadError::Graph { path: show(&side), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_vector() {
        // 5 vertices, edges a-c, a-e, b-d, d-e
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g), "DQc");
        assert_eq!(decode("DQc").unwrap(), g);
    }

    #[test]
    fn small_sizes() {
        assert_eq!(encode(&Graph::from_edges(0, &[]).unwrap()), "?");
        assert_eq!(encode(&Graph::from_edges(1, &[]).unwrap()), "@");
        assert_eq!(encode(&Graph::from_edges(2, &[(0, 1)]).unwrap()), "A_");
        let big = Graph::from_edges(100, &[(0, 99)]).unwrap();
        let s = encode(&big);
        assert!(s.starts_with("~?@c"));
        assert_eq!(decode(&s).unwrap(), big);
    }

    #[test]
    fn errors_carry_offsets() {
        match decode("D Qc") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(decode("DQ"), Err(Error::Parse { .. })));
        assert!(matches!(decode(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(decode("A`"), Err(Error::Parse { offset: 1, .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..80, raw in proptest::collection::vec((0u32..80, 0u32..80), 0..200)) {
            let mut edges: Vec<(u32, u32)> = raw
                .into_iter()
                .filter(|&(a, b)| (a as usize) < n && (b as usize) < n && a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let g = Graph::from_edges(n, &edges).unwrap();
            prop_assert_eq!(decode(&encode(&g)).unwrap(), g);
        }
    }
}
