//! Graph import/export. All indices in files are 1-based.
//!
//! Edge-list text: one directed pair `i j` per line. Blank lines and lines
//! starting with `#` are ignored, except a `# nodes: N` header, which fixes the
//! node count (otherwise it is the largest index seen).
//!
//! JSON: `{"n": N, "edges": [[i, j], ...]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::DirectedNetwork;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDocument {
    pub fn from_network(g: &DirectedNetwork) -> Self {
        Self { n: g.n(), edges: g.edges().map(|(i, j)| [i + 1, j + 1]).collect() }
    }

    pub fn to_network(&self) -> Result<DirectedNetwork> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, &[i, j]) in self.edges.iter().enumerate() {
            if i == 0 || j == 0 {
                return Err(Error::Parse { line: k + 1, msg: "node indices are 1-based".into() });
            }
            edges.push((i - 1, j - 1));
        }
        DirectedNetwork::new(self.n, edges)
    }
}

pub fn to_json(g: &DirectedNetwork) -> String {
    serde_json::to_string(&GraphDocument::from_network(g)).expect("graph document serializes")
}

pub fn from_json(text: &str) -> Result<DirectedNetwork> {
    serde_json::from_str::<GraphDocument>(text)?.to_network()
}

pub fn to_edge_list(g: &DirectedNetwork) -> String {
    let mut out = format!("# nodes: {}\n", g.n());
    for (i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}

pub fn from_edge_list(text: &str) -> Result<DirectedNetwork> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = k + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("nodes:") {
                let n = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse { line: lineno, msg: format!("bad node count: {e}") })?;
                declared = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: lineno, msg: format!("expected `i j`, got {line:?}") });
        }
        let mut pair = [0usize; 2];
        for (slot, f) in pair.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|e| Error::Parse { line: lineno, msg: format!("bad index {f:?}: {e}") })?;
            if *slot == 0 {
                return Err(Error::Parse { line: lineno, msg: "node indices are 1-based".into() });
            }
        }
        edges.push((pair[0] - 1, pair[1] - 1));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0));
    DirectedNetwork::new(n, edges)
}
