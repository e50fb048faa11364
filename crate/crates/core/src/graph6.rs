//! graph6 encoding for graphs with at most 62 nodes.
//!
//! Byte values are `63 + x`. The header is a single byte for `n`; the payload
//! packs the upper-triangle bits column by column (`x(0,1)`, `x(0,2)`,
//! `x(1,2)`, `x(0,3)`, ...), zero-padded to a multiple of six and emitted
//! most-significant bit first.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodePair};

/// Largest node count representable with a single-byte header.
pub const MAX_GRAPH6_NODES: usize = 62;

const OPTIONAL_HEADER: &str = ">>graph6<<";

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(OPTIONAL_HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    let (&head, payload) = bytes
        .split_first()
        .ok_or_else(|| Error::parse("empty graph6 string"))?;
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(format!("byte {b} outside graph6 range [63,126]")));
        }
    }
    if head == 126 {
        return Err(Error::parse("unsupported length: extended graph6 header (n > 62)"));
    }
    let n = (head - 63) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let needed = bits.div_ceil(6);
    if payload.len() < needed {
        return Err(Error::parse(format!(
            "truncated graph6 payload: {} bytes, expected {needed}",
            payload.len()
        )));
    }
    if payload.len() > needed {
        return Err(Error::parse(format!(
            "trailing bytes after graph6 payload: {} bytes, expected {needed}",
            payload.len()
        )));
    }

    let bit = |k: usize| -> bool {
        let byte = payload[k / 6] - 63;
        byte >> (5 - k % 6) & 1 == 1
    };
    let mut links = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                links.push(NodePair { u, v });
            }
            k += 1;
        }
    }
    Graph::from_links(n, links)
}

pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.node_count();
    if n > MAX_GRAPH6_NODES {
        return Err(Error::Domain(format!(
            "graph6 single-byte header supports n <= {MAX_GRAPH6_NODES}, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(1 + (n * n) / 12 + 1);
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_link(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Reads a newline-delimited graph6 catalog. Blank lines are skipped; a parse
/// failure reports its 1-based line number.
pub fn read_catalog(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6(l.trim()).map_err(|e| e.at_line(i + 1)))
        .collect()
}

pub fn read_catalog_file(path: &Path) -> Result<Vec<Graph>> {
    read_catalog(&std::fs::read_to_string(path)?)
}
