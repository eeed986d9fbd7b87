//! Directed and undirected interaction graphs.
//!
//! A [`DirectedNetwork`] holds ordered pairs `(i, j)`: agent `i` observes agent
//! `j`. An edge is *bidirectional* when its reverse is present too, and
//! *unidirectional* otherwise. Tails of unidirectional edges form `V_t`, heads
//! form `V_h`; the controllers in this crate need `V_t ∩ V_h = ∅`.

mod cliques;
pub mod io;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateMatrix;

pub use cliques::{brute_force_maximal_cliques, cliques_containing, maximal_cliques, Clique, LocalSubgraph};

/// Directed graph on nodes `0..n` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedNetwork {
    n: usize,
    adj: Vec<bool>,
}

impl DirectedNetwork {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![false; n * n] }
    }

    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        for k in [i, j] {
            if k >= self.n {
                return Err(Error::NodeOutOfRange { index: k, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        self.adj[i * self.n + j] = true;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    /// Out-neighbours `N_i(G) = { j : (i, j) ∈ E }`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    /// Treats an undirected graph as a digraph with both orientations of every edge.
    pub fn from_undirected(g: &UndirectedGraph) -> Self {
        Self { n: g.n, adj: g.adj.clone() }
    }
}

/// Split of a directed edge set into bidirectional and unidirectional parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    /// Ordered pairs whose reverse is also an edge (`E_ud`).
    pub bidirectional: Vec<(usize, usize)>,
    /// Ordered pairs whose reverse is absent (`E_di`).
    pub unidirectional: Vec<(usize, usize)>,
    /// Tails of unidirectional edges (`V_t`).
    pub tails: BTreeSet<usize>,
    /// Heads of unidirectional edges (`V_h`).
    pub heads: BTreeSet<usize>,
}

impl EdgeClassification {
    pub fn tail_head_overlap(&self) -> Vec<usize> {
        self.tails.intersection(&self.heads).copied().collect()
    }
}

pub fn classify_edges(g: &DirectedNetwork) -> EdgeClassification {
    let mut out = EdgeClassification {
        bidirectional: Vec::new(),
        unidirectional: Vec::new(),
        tails: BTreeSet::new(),
        heads: BTreeSet::new(),
    };
    for (i, j) in g.edges() {
        if g.has_edge(j, i) {
            out.bidirectional.push((i, j));
        } else {
            out.unidirectional.push((i, j));
            out.tails.insert(i);
            out.heads.insert(j);
        }
    }
    out
}

/// True iff no node is both a tail and a head of unidirectional edges.
pub fn check_assumption1(g: &DirectedNetwork) -> bool {
    classify_edges(g).tail_head_overlap().is_empty()
}

/// Simple undirected graph on nodes `0..n` (symmetric adjacency).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<bool>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = vec![true; n * n];
        for i in 0..n {
            adj[i * n + i] = false;
        }
        Self { n, adj }
    }

    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        for k in [i, j] {
            if k >= self.n {
                return Err(Error::NodeOutOfRange { index: k, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Unordered edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(&a, &b)| !a || b)
    }
}

/// `G_ud`: keeps only the bidirectional edges.
pub fn bidirectional_core(g: &DirectedNetwork) -> UndirectedGraph {
    let n = g.n();
    let mut out = UndirectedGraph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(i, j) && g.has_edge(j, i) {
                out.adj[i * n + j] = true;
                out.adj[j * n + i] = true;
            }
        }
    }
    out
}

/// `Ḡ_ud`: every unidirectional edge is made bidirectional.
pub fn undirected_closure(g: &DirectedNetwork) -> UndirectedGraph {
    let n = g.n();
    let mut out = UndirectedGraph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(i, j) || g.has_edge(j, i) {
                out.adj[i * n + j] = true;
                out.adj[j * n + i] = true;
            }
        }
    }
    out
}

/// δ-proximity graph: `{i, j}` is an edge iff `‖x_i − x_j‖ ≤ δ` (closed ball).
pub fn proximity_graph(x: &StateMatrix, delta: f64) -> UndirectedGraph {
    let n = x.n();
    let mut out = UndirectedGraph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if x.distance(i, j) <= delta {
                out.adj[i * n + j] = true;
                out.adj[j * n + i] = true;
            }
        }
    }
    out
}

/// Membership of each agent in group A (the long-range group).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    group_a: Vec<bool>,
}

impl Partition {
    pub fn from_mask(group_a: Vec<bool>) -> Self {
        Self { group_a }
    }

    /// Agents `0..n_a` in group A, the rest in group B.
    pub fn leading(n: usize, n_a: usize) -> Self {
        Self { group_a: (0..n).map(|i| i < n_a).collect() }
    }

    pub fn from_group_a<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut group_a = vec![false; n];
        for i in members {
            if i >= n {
                return Err(Error::NodeOutOfRange { index: i, n });
            }
            group_a[i] = true;
        }
        Ok(Self { group_a })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.group_a.len()
    }

    #[inline]
    pub fn in_a(&self, i: usize) -> bool {
        self.group_a[i]
    }

    pub fn group_a(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.group_a[i]).collect()
    }

    pub fn group_b(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.group_a[i]).collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.group_a
    }
}

/// Directed proximity graph with two sensing ranges: agents in group A see
/// everything within `delta_a`, agents in group B within `delta_b`.
pub fn two_range_digraph(x: &StateMatrix, groups: &Partition, delta_a: f64, delta_b: f64) -> Result<DirectedNetwork> {
    if !(delta_a > delta_b && delta_b > 0.0) {
        return Err(Error::SensingRanges { delta_a, delta_b });
    }
    let n = x.n();
    if groups.n() != n {
        return Err(Error::Dimension(format!("partition covers {} agents, state has {n}", groups.n())));
    }
    let mut g = DirectedNetwork::empty(n);
    for i in 0..n {
        let range = if groups.in_a(i) { delta_a } else { delta_b };
        for j in 0..n {
            if i != j && x.distance(i, j) <= range {
                g.adj[i * n + j] = true;
            }
        }
    }
    Ok(g)
}

/// Splits the nodes into `N_A = V_t ∪ V̂` and `N_B = N \ N_A`.
///
/// `hint` lists extra nodes to place in `N_A`; they must not be heads of
/// unidirectional edges. Passing group A of a two-range digraph yields
/// `N_A = group A` exactly.
pub fn generalized_partition(g: &DirectedNetwork, hint: Option<&[usize]>) -> Result<Partition> {
    let cls = classify_edges(g);
    let overlap = cls.tail_head_overlap();
    if !overlap.is_empty() {
        return Err(Error::TailHeadOverlap(overlap));
    }
    let mut mask = vec![false; g.n()];
    for &t in &cls.tails {
        mask[t] = true;
    }
    if let Some(hint) = hint {
        let bad: Vec<usize> = hint.iter().copied().filter(|h| cls.heads.contains(h)).collect();
        if !bad.is_empty() {
            return Err(Error::HintOnHeads(bad));
        }
        for &h in hint {
            if h >= g.n() {
                return Err(Error::NodeOutOfRange { index: h, n: g.n() });
            }
            mask[h] = true;
        }
    }
    Ok(Partition::from_mask(mask))
}
