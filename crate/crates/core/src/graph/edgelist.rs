//! Plain-text edge lists.
//!
//! ```text
//! # N=4
//! 1 2
//! 2 3
//! 4
//! ```
//!
//! The optional `# N=<int>` header fixes the ID space; without it `N` is the
//! largest ID seen. Other `#` lines are comments. A line with a single ID
//! declares a node, which is how isolated nodes survive a round trip.

use std::collections::HashSet;
use std::fmt::Write;

use super::{Graph, NodeId};
use crate::error::{Error, ParseErrorKind, Result};

fn parse_err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn parse_header(line: &str) -> Option<&str> {
    let rest = line.strip_prefix('#')?.trim_start();
    rest.strip_prefix("N=").map(str::trim)
}

pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut id_space: Option<u64> = None;
    let mut nodes: Vec<NodeId> = Vec::new();
    let mut seen_nodes: HashSet<NodeId> = HashSet::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut seen_edges: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut lines_of_ids: Vec<(usize, NodeId)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(value) = parse_header(line) {
                let n = value
                    .parse::<u64>()
                    .map_err(|_| parse_err(lineno, ParseErrorKind::Malformed(raw.to_string())))?;
                id_space = Some(n);
            }
            continue;
        }
        let ids: Vec<NodeId> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(lineno, ParseErrorKind::Malformed(raw.to_string())))?;
        match ids[..] {
            [a] => {
                lines_of_ids.push((lineno, a));
                if seen_nodes.insert(a) {
                    nodes.push(a);
                }
            }
            [a, b] => {
                if a == b {
                    return Err(parse_err(lineno, ParseErrorKind::SelfLoop(a)));
                }
                if !seen_edges.insert((a.min(b), a.max(b))) {
                    return Err(parse_err(lineno, ParseErrorKind::DuplicateEdge(a, b)));
                }
                lines_of_ids.push((lineno, a));
                lines_of_ids.push((lineno, b));
                for x in [a, b] {
                    if seen_nodes.insert(x) {
                        nodes.push(x);
                    }
                }
                edges.push((a, b));
            }
            _ => {
                return Err(parse_err(
                    lineno,
                    ParseErrorKind::Malformed(raw.to_string()),
                ))
            }
        }
    }

    let id_space = id_space.unwrap_or_else(|| nodes.iter().copied().max().unwrap_or(0));
    if let Some(&(line, id)) = lines_of_ids
        .iter()
        .find(|&&(_, id)| id == 0 || id > id_space)
    {
        return Err(parse_err(
            line,
            ParseErrorKind::IdOutOfRange { id, id_space },
        ));
    }
    Graph::from_parts(id_space, nodes, edges)
}

/// Canonical text form: header, edges sorted by `(min, max)`, then isolated
/// nodes in ascending order.
pub fn save_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "# N={}", g.id_space()).unwrap();
    for (a, b) in g.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    for &id in g.ids() {
        if g.degree(id).unwrap() == 0 {
            writeln!(out, "{id}").unwrap();
        }
    }
    out
}
