//! Graph ingestion and serialization: graph6 (short form) and plain edge
//! lists.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! (`x(0,1) x(0,2) x(1,2) x(0,3) ...`) into 6-bit groups, each offset by 63
//! into printable ASCII, after a single size byte `n + 63`.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const GRAPH6_HEADER: &str = ">>graph6<<";
pub const GRAPH6_MAX_N: usize = 62;

fn g6_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 { offset, reason: reason.into() }
}

/// Column-major upper-triangle order used by graph6.
fn graph6_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let bytes = line.as_bytes();
    let Some(&first) = bytes.first() else {
        return Err(g6_err(0, "empty input"));
    };
    if first == b'~' {
        return Err(g6_err(0, "long-form size prefix (n > 62) is not supported"));
    }
    if !(63..=126).contains(&first) {
        return Err(g6_err(0, format!("byte {first:#04x} outside the printable graph6 range")));
    }
    let n = usize::from(first - 63);
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() != expected {
        return Err(g6_err(
            1 + data.len().min(expected),
            format!("expected {expected} data bytes for n = {n}, found {}", data.len()),
        ));
    }
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(g6_err(1 + i, format!("byte {b:#04x} outside the printable graph6 range")));
        }
    }
    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let edges: Vec<(usize, usize)> = graph6_pairs(n).enumerate().filter(|&(k, _)| bit(k)).map(|(_, e)| e).collect();
    if (bits..expected * 6).any(bit) {
        return Err(g6_err(expected, "nonzero padding bits"));
    }
    Graph::new(n, edges)
}

pub fn serialize_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > GRAPH6_MAX_N {
        return Err(Error::UnsupportedSize(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut groups = vec![0u8; bits.div_ceil(6)];
    for (k, (i, j)) in graph6_pairs(n).enumerate() {
        if g.has_edge(i, j) {
            groups[k / 6] |= 1 << (5 - k % 6);
        }
    }
    let mut out = String::with_capacity(1 + groups.len());
    out.push(char::from(n as u8 + 63));
    out.extend(groups.into_iter().map(|b| char::from(b + 63)));
    Ok(out)
}

/// Parses a newline-separated graph6 stream. Blank lines are skipped, as is
/// a `>>graph6<<` header at the start of any line.
pub fn read_graph6(text: &str, source: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let line = line.strip_prefix(GRAPH6_HEADER).unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| Error::Io { context: format!("{source}:{}", i + 1), message: e.to_string() })?;
        out.push(g);
    }
    Ok(out)
}

/// Writes `n m` followed by one `u v` line per edge, 0-based.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Parses one or more concatenated edge-list blocks (`n m` then `m` lines
/// `u v`). Blank lines and lines starting with `#` are ignored.
pub fn read_edge_lists(text: &str, source: &str) -> Result<Vec<Graph>> {
    let ctx = |line: usize, reason: String| Error::Io {
        context: format!("{source}:{line}"),
        message: Error::EdgeList { line, reason }.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let (n, m) = parse_pair::<usize>(header).map_err(|r| ctx(ln, format!("bad header: {r}")))?;
        let mut edges = Vec::with_capacity(m);
        let mut last = ln;
        for k in 0..m {
            let (eln, l) = lines.next().ok_or_else(|| ctx(last, format!("expected {m} edges, found {k}")))?;
            edges.push(parse_pair::<usize>(l).map_err(|r| ctx(eln, r))?);
            last = eln;
        }
        out.push(Graph::new(n, edges).map_err(|e| ctx(ln, e.to_string()))?);
    }
    Ok(out)
}

fn parse_pair<T: FromStr>(line: &str) -> std::result::Result<(T, T), String> {
    let mut it = line.split_whitespace();
    let mut next = || -> std::result::Result<T, String> {
        let tok = it.next().ok_or_else(|| format!("expected two integers in {line:?}"))?;
        tok.parse().map_err(|_| format!("not a non-negative integer: {tok:?}"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(format!("trailing tokens in {line:?}"));
    }
    Ok(pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Graph6,
    Edges,
}

pub fn read_graphs(text: &str, format: InputFormat, source: &str) -> Result<Vec<Graph>> {
    match format {
        InputFormat::Graph6 => read_graph6(text, source),
        InputFormat::Edges => read_edge_lists(text, source),
    }
}
