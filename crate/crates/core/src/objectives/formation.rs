use serde::{Deserialize, Serialize};

use super::Objective;
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::state::{squared_distance, StateMatrix};

/// An undirected edge with its desired inter-agent distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesiredEdge {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// Distance-based formation potential over an undirected edge set.
///
/// The value sums `φ_ij = (‖x_i − x_j‖² − d_ij²)² / 8` over *ordered* pairs,
/// so each undirected edge contributes twice.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationSpec {
    n: usize,
    edges: Vec<DesiredEdge>,
    /// Per-agent `(neighbour, d²)`, neighbours ascending.
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl FormationSpec {
    pub fn new(n: usize, edges: impl IntoIterator<Item = DesiredEdge>) -> Result<Self> {
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut list = Vec::new();
        for e in edges {
            let (i, j) = (e.i.min(e.j), e.i.max(e.j));
            if j >= n {
                return Err(Error::NodeOutOfRange { index: j, n });
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !(e.distance > 0.0 && e.distance.is_finite()) {
                return Err(Error::InvalidParameter(format!("desired distance for ({i}, {j}) must be positive, got {}", e.distance)));
            }
            if let Some(&(_, d2)) = adjacency[i].iter().find(|(k, _)| *k == j) {
                if d2 != e.distance * e.distance {
                    return Err(Error::InvalidParameter(format!("conflicting desired distances for ({i}, {j})")));
                }
                continue;
            }
            adjacency[i].push((j, e.distance * e.distance));
            adjacency[j].push((i, e.distance * e.distance));
            list.push(DesiredEdge { i, j, distance: e.distance });
        }
        for nbrs in &mut adjacency {
            nbrs.sort_by_key(|p| p.0);
        }
        list.sort_by_key(|e| (e.i, e.j));
        Ok(Self { n, edges: list, adjacency })
    }

    /// Desired distances read off a target shape, restricted to `graph`'s edges.
    pub fn from_shape(graph: &UndirectedGraph, shape: &StateMatrix) -> Result<Self> {
        if graph.n() != shape.n() {
            return Err(Error::Dimension(format!("graph has {} nodes, shape has {} agents", graph.n(), shape.n())));
        }
        Self::new(graph.n(), graph.edges().map(|(i, j)| DesiredEdge { i, j, distance: shape.distance(i, j) }))
    }

    /// All pairwise distances of a target shape.
    pub fn complete_from_shape(shape: &StateMatrix) -> Result<Self> {
        Self::from_shape(&UndirectedGraph::complete(shape.n()), shape)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[DesiredEdge] {
        &self.edges
    }

    pub fn desired_distance(&self, i: usize, j: usize) -> Option<f64> {
        self.adjacency[i].iter().find(|(k, _)| *k == j).map(|(_, d2)| d2.sqrt())
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(|p| p.0)
    }
}

pub fn formation_value(x: &StateMatrix, spec: &FormationSpec) -> f64 {
    spec.edges
        .iter()
        .map(|e| {
            let s = squared_distance(x.col(e.i), x.col(e.j)) - e.distance * e.distance;
            // two ordered copies of (s²)/8
            s * s / 4.0
        })
        .sum()
}

/// `Σ_{j ∈ N_i} (‖x_i − x_j‖² − d_ij²)(x_i − x_j)`.
pub fn formation_gradient(x: &StateMatrix, spec: &FormationSpec, i: usize) -> Vec<f64> {
    let xi = x.col(i);
    let mut g = vec![0.0; x.dim()];
    for &(j, d2) in &spec.adjacency[i] {
        let xj = x.col(j);
        let s = squared_distance(xi, xj) - d2;
        for (gk, (a, b)) in g.iter_mut().zip(xi.iter().zip(xj)) {
            *gk += s * (a - b);
        }
    }
    g
}

impl Objective for FormationSpec {
    fn value(&self, x: &StateMatrix) -> f64 {
        formation_value(x, self)
    }

    fn gradient(&self, x: &StateMatrix, i: usize) -> Vec<f64> {
        formation_gradient(x, self, i)
    }
}

/// `Σ_{(i,j) ∈ E_di} φ_ij` over unidirectional edges, differentiated only
/// with respect to the tail: the observed agent cannot evaluate `φ_ji`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnidirectionalPotential {
    /// Per tail: `(head, d²)`, heads ascending.
    by_tail: Vec<Vec<(usize, f64)>>,
}

impl UnidirectionalPotential {
    /// `edges` are ordered `(tail, head)`; distances come from `desired`.
    pub fn new(n: usize, edges: &[(usize, usize)], desired: &FormationSpec) -> Result<Self> {
        let mut by_tail: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(t, h) in edges {
            let d = desired
                .desired_distance(t, h)
                .ok_or_else(|| Error::InvalidParameter(format!("no desired distance for unidirectional edge ({t}, {h})")))?;
            by_tail[t].push((h, d * d));
        }
        for v in &mut by_tail {
            v.sort_by_key(|p| p.0);
        }
        Ok(Self { by_tail })
    }

    pub fn value(&self, x: &StateMatrix) -> f64 {
        let mut total = 0.0;
        for (t, heads) in self.by_tail.iter().enumerate() {
            for &(h, d2) in heads {
                let s = squared_distance(x.col(t), x.col(h)) - d2;
                total += s * s / 8.0;
            }
        }
        total
    }

    /// `∇_{x_i} Σ_{(i,j) ∈ E_di} φ_ij = Σ_j ½ (‖x_i − x_j‖² − d_ij²)(x_i − x_j)`.
    pub fn tail_gradient(&self, x: &StateMatrix, i: usize) -> Vec<f64> {
        let xi = x.col(i);
        let mut g = vec![0.0; x.dim()];
        for &(j, d2) in &self.by_tail[i] {
            let xj = x.col(j);
            let s = squared_distance(xi, xj) - d2;
            for (gk, (a, b)) in g.iter_mut().zip(xi.iter().zip(xj)) {
                *gk += 0.5 * s * (a - b);
            }
        }
        g
    }
}
