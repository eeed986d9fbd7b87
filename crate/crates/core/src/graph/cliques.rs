use serde::{Deserialize, Serialize};

use super::UndirectedGraph;
use crate::state::StateMatrix;

/// A maximal clique, members sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clique {
    members: Vec<usize>,
}

impl Clique {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    #[inline]
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn count_and(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

struct Enumerator<'a> {
    nbrs: &'a [Bits],
    out: Vec<Vec<usize>>,
}

impl Enumerator<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits, mut x: Bits) {
        if p.is_empty() {
            if x.is_empty() {
                self.out.push(r.clone());
            }
            return;
        }
        // Tomita pivot: the vertex of P ∪ X with most neighbours in P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.count_and(&self.nbrs[u]), std::cmp::Reverse(u)))
            .expect("P is non-empty");
        let candidates: Vec<usize> = p.and_not(&self.nbrs[pivot]).iter().collect();
        for v in candidates {
            r.push(v);
            self.expand(r, p.and(&self.nbrs[v]), x.and(&self.nbrs[v]));
            r.pop();
            p.clear(v);
            x.set(v);
        }
    }
}

/// Degeneracy ordering by repeatedly removing a minimum-degree vertex
/// (smallest index on ties).
fn degeneracy_order(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

/// All maximal cliques (Bron–Kerbosch with degeneracy ordering and pivoting).
///
/// Isolated nodes come out as singleton cliques. Output is deterministic:
/// members sorted, cliques in lexicographic order.
pub fn maximal_cliques(g: &UndirectedGraph) -> Vec<Clique> {
    let n = g.n();
    let nbrs: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::new(n);
            for j in g.neighbors(i) {
                b.set(j);
            }
            b
        })
        .collect();
    let order = degeneracy_order(g);
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let mut en = Enumerator { nbrs: &nbrs, out: Vec::new() };
    for &v in &order {
        let mut p = Bits::new(n);
        let mut x = Bits::new(n);
        for u in g.neighbors(v) {
            if position[u] > position[v] {
                p.set(u);
            } else {
                x.set(u);
            }
        }
        let mut r = vec![v];
        en.expand(&mut r, p, x);
    }
    let mut cliques: Vec<Clique> = en.out.into_iter().map(Clique::new).collect();
    cliques.sort();
    cliques
}

/// Exhaustive `2^n` enumeration of maximal cliques. Test oracle; `n ≤ 20`.
pub fn brute_force_maximal_cliques(g: &UndirectedGraph) -> Vec<Clique> {
    let n = g.n();
    assert!(n <= 20, "brute-force clique enumeration limited to 20 nodes");
    let is_clique = |mask: u32| {
        (0..n).all(|i| mask & (1 << i) == 0 || ((i + 1)..n).all(|j| mask & (1 << j) == 0 || g.has_edge(i, j)))
    };
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if !is_clique(mask) {
            continue;
        }
        let maximal = (0..n).filter(|&k| mask & (1 << k) == 0).all(|k| !is_clique(mask | (1 << k)));
        if maximal {
            out.push(Clique::new((0..n).filter(|&i| mask & (1 << i) != 0).collect()));
        }
    }
    out.sort();
    out
}

/// `clq_i`: the cliques that contain node `i`.
pub fn cliques_containing(cliques: &[Clique], i: usize) -> Vec<Clique> {
    cliques.iter().filter(|c| c.contains(i)).cloned().collect()
}

/// The subgraph an agent can build from its own measurements: its δ-neighbours
/// plus itself, with every pair among them at distance ≤ δ.
#[derive(Debug, Clone)]
pub struct LocalSubgraph {
    pub center: usize,
    /// Global ids of the local nodes, ascending.
    pub nodes: Vec<usize>,
    /// Graph over local indices `0..nodes.len()`.
    pub graph: UndirectedGraph,
}

impl LocalSubgraph {
    pub fn new(x: &StateMatrix, i: usize, delta: f64) -> Self {
        let nodes: Vec<usize> = (0..x.n()).filter(|&j| j == i || x.distance(i, j) <= delta).collect();
        let mut graph = UndirectedGraph::empty(nodes.len());
        for a in 0..nodes.len() {
            for b in (a + 1)..nodes.len() {
                if x.distance(nodes[a], nodes[b]) <= delta {
                    graph.add_edge(a, b).expect("local indices are valid");
                }
            }
        }
        Self { center: i, nodes, graph }
    }

    /// Maximal cliques of the local subgraph that contain the center, in
    /// global ids.
    pub fn cliques_of_center(&self) -> Vec<Clique> {
        let local_center = self.nodes.binary_search(&self.center).expect("center is a local node");
        let mut out: Vec<Clique> = maximal_cliques(&self.graph)
            .into_iter()
            .filter(|c| c.contains(local_center))
            .map(|c| Clique::new(c.members().iter().map(|&k| self.nodes[k]).collect()))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_is_one_clique() {
        let cliques = maximal_cliques(&UndirectedGraph::complete(6));
        assert_eq!(cliques, vec![Clique::new((0..6).collect())]);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let cliques = maximal_cliques(&UndirectedGraph::empty(4));
        assert_eq!(cliques, (0..4).map(|i| Clique::new(vec![i])).collect::<Vec<_>>());
    }

    #[test]
    fn small_mixed_graph() {
        // triangle 0-1-2, tail 2-3, isolated 4
        let g = UndirectedGraph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let cliques = maximal_cliques(&g);
        assert_eq!(cliques, vec![Clique::new(vec![0, 1, 2]), Clique::new(vec![2, 3]), Clique::new(vec![4])]);
        assert_eq!(cliques, brute_force_maximal_cliques(&g));
        assert_eq!(cliques_containing(&cliques, 2).len(), 2);
        assert_eq!(cliques_containing(&cliques, 4), vec![Clique::new(vec![4])]);
        assert!(cliques_containing(&cliques, 7).is_empty());
    }

    #[test]
    fn local_subgraph_isolated_and_far_cluster() {
        let x = StateMatrix::from_points(&[[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [50.0, 0.0], [50.5, 0.0]]).unwrap();
        let local = LocalSubgraph::new(&x, 0, 1.0);
        assert_eq!(local.nodes, vec![0, 1, 2]);
        assert_eq!(local.cliques_of_center(), vec![Clique::new(vec![0, 1, 2])]);
        let lonely = StateMatrix::from_points(&[[0.0], [10.0]]).unwrap();
        let l = LocalSubgraph::new(&lonely, 1, 1.0);
        assert_eq!(l.nodes, vec![1]);
        assert_eq!(l.cliques_of_center(), vec![Clique::new(vec![1])]);
    }
}
