//! Objective functions over the stacked state and their per-agent gradients.

mod formation;
mod matching;

pub use formation::{formation_gradient, formation_value, DesiredEdge, FormationSpec, UnidirectionalPotential};
pub use matching::{
    clique_objective_gradient, clique_objective_value, minority_majority, CliqueEvaluation, CliqueSignature, MatchingSpec, TiePolicy,
};

use crate::graph::UndirectedGraph;
use crate::state::StateMatrix;

/// A differentiable objective `V(X)` with per-agent gradient `∇_i V(X)`.
pub trait Objective: Sync {
    fn value(&self, x: &StateMatrix) -> f64;

    fn gradient(&self, x: &StateMatrix, i: usize) -> Vec<f64>;

    /// All per-agent gradients as a `d × n` matrix.
    fn gradients(&self, x: &StateMatrix) -> StateMatrix {
        let mut out = StateMatrix::zeros(x.dim(), x.n());
        for i in 0..x.n() {
            out.col_mut(i).copy_from_slice(&self.gradient(x, i));
        }
        out
    }
}

/// `½ Σ_{ {i,j} ∈ E } ‖x_i − x_j‖²`. Only used to sanity-check the
/// finite-difference oracle.
#[derive(Debug, Clone)]
pub struct ConsensusObjective {
    pub graph: UndirectedGraph,
}

impl Objective for ConsensusObjective {
    fn value(&self, x: &StateMatrix) -> f64 {
        0.5 * self.graph.edges().map(|(i, j)| crate::state::squared_distance(x.col(i), x.col(j))).sum::<f64>()
    }

    fn gradient(&self, x: &StateMatrix, i: usize) -> Vec<f64> {
        let mut g = vec![0.0; x.dim()];
        for j in self.graph.neighbors(i) {
            for (gk, (a, b)) in g.iter_mut().zip(x.col(i).iter().zip(x.col(j))) {
                *gk += a - b;
            }
        }
        g
    }
}

/// Central finite differences of `obj` at `x`, one coordinate at a time.
pub fn finite_difference_gradient<O: Objective + ?Sized>(obj: &O, x: &StateMatrix, h: f64) -> StateMatrix {
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut out = StateMatrix::zeros(x.dim(), x.n());
    let mut probe = x.clone();
    for k in 0..x.as_slice().len() {
        let orig = probe.as_slice()[k];
        probe.as_mut_slice()[k] = orig + h;
        let up = obj.value(&probe);
        probe.as_mut_slice()[k] = orig - h;
        let down = obj.value(&probe);
        probe.as_mut_slice()[k] = orig;
        out.as_mut_slice()[k] = (up - down) / (2.0 * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_differences_recover_quadratic_gradient() {
        let graph = UndirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let obj = ConsensusObjective { graph };
        let x = StateMatrix::from_points(&[[0.3, -1.0], [2.0, 0.5], [-0.7, 4.0]]).unwrap();
        let fd = finite_difference_gradient(&obj, &x, 1e-5);
        let exact = obj.gradients(&x);
        assert_eq!(exact.col(1), &[2.0 - 0.3 + 2.0 + 0.7, 0.5 + 1.0 + 0.5 - 4.0]);
        for (a, b) in fd.as_slice().iter().zip(exact.as_slice()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }
}
