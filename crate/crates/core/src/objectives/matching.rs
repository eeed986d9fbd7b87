use serde::{Deserialize, Serialize};

use super::Objective;
use crate::assignment::{self, AssignmentMap, AssignmentProblem};
use crate::graph::{maximal_cliques, proximity_graph, Clique, LocalSubgraph, Partition, UndirectedGraph};
use crate::state::StateMatrix;

/// Which group is the minority when a clique (or the whole team) has equally
/// many A and B agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    AMinority,
    BMinority,
}

/// Splits `members` into `(minority, majority)` by group counts.
pub fn minority_majority(members: &[usize], groups: &Partition, tie: TiePolicy) -> (Vec<usize>, Vec<usize>) {
    let (a, b): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&i| groups.in_a(i));
    match a.len().cmp(&b.len()) {
        std::cmp::Ordering::Less => (a, b),
        std::cmp::Ordering::Greater => (b, a),
        std::cmp::Ordering::Equal => match tie {
            TiePolicy::AMinority => (a, b),
            TiePolicy::BMinority => (b, a),
        },
    }
}

/// One clique's contribution `v_C = ½ ‖[x_j − x_{ᾱ(j)}]_{j ∈ C_mn}‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueEvaluation {
    pub clique: Clique,
    pub minority: Vec<usize>,
    pub majority: Vec<usize>,
    pub assignment: AssignmentMap,
    pub value: f64,
}

impl CliqueEvaluation {
    /// `∇_i v_C`, accumulated into `out`.
    fn add_gradient(&self, x: &StateMatrix, i: usize, out: &mut [f64]) {
        let other = self.assignment.partner_of(i).or_else(|| self.assignment.preimage_of(i));
        if let Some(j) = other {
            for (o, (a, b)) in out.iter_mut().zip(x.col(i).iter().zip(x.col(j))) {
                *o += a - b;
            }
        }
    }
}

/// Clique-based matching potential on the δ-proximity graph:
/// `V(X) = Σ_{C ∈ clq(G_δ(X))} v_C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingSpec {
    pub groups: Partition,
    pub delta: f64,
    #[serde(default)]
    pub tie: TiePolicy,
}

impl MatchingSpec {
    pub fn new(groups: Partition, delta: f64) -> Self {
        assert!(delta > 0.0, "sensing radius must be positive");
        Self { groups, delta, tie: TiePolicy::default() }
    }

    pub fn with_tie(mut self, tie: TiePolicy) -> Self {
        self.tie = tie;
        self
    }

    pub fn evaluate_clique(&self, x: &StateMatrix, clique: Clique) -> CliqueEvaluation {
        let (minority, majority) = minority_majority(clique.members(), &self.groups, self.tie);
        let problem = AssignmentProblem::from_state(x, &minority, &majority).expect("clique members are valid agents");
        let assignment = assignment::solve(&problem);
        let value = 0.5 * assignment.cost;
        CliqueEvaluation { clique, minority, majority, assignment, value }
    }

    /// Per-clique evaluation on a given graph snapshot.
    pub fn evaluate_on(&self, x: &StateMatrix, graph: &UndirectedGraph) -> Vec<CliqueEvaluation> {
        maximal_cliques(graph).into_iter().map(|c| self.evaluate_clique(x, c)).collect()
    }

    pub fn evaluate(&self, x: &StateMatrix) -> Vec<CliqueEvaluation> {
        self.evaluate_on(x, &proximity_graph(x, self.delta))
    }

    /// Gradients of every agent on a fixed graph snapshot.
    pub fn gradients_on(&self, x: &StateMatrix, graph: &UndirectedGraph) -> StateMatrix {
        let mut out = StateMatrix::zeros(x.dim(), x.n());
        for ev in self.evaluate_on(x, graph) {
            for &i in ev.clique.members() {
                ev.add_gradient(x, i, out.col_mut(i));
            }
        }
        out
    }

    /// `∇_i V` computed only from agent `i`'s own neighbourhood: local
    /// subgraph, its cliques through `i`, and their assignments.
    pub fn gradient_local(&self, x: &StateMatrix, i: usize) -> Vec<f64> {
        let local = LocalSubgraph::new(x, i, self.delta);
        let mut g = vec![0.0; x.dim()];
        for c in local.cliques_of_center() {
            self.evaluate_clique(x, c).add_gradient(x, i, &mut g);
        }
        g
    }

    /// Clique set and assignments at `x`; equal signatures mean `V` is the
    /// same quadratic piece at both states.
    pub fn signature(&self, x: &StateMatrix) -> Vec<CliqueSignature> {
        self.evaluate(x).into_iter().map(|ev| (ev.clique.members().to_vec(), ev.assignment.pairs)).collect()
    }
}

/// Members of one maximal clique and its minority → majority pairs.
pub type CliqueSignature = (Vec<usize>, Vec<(usize, usize)>);

pub fn clique_objective_value(x: &StateMatrix, spec: &MatchingSpec) -> f64 {
    spec.evaluate(x).iter().map(|ev| ev.value).sum()
}

/// `Σ_{C ∈ clq_i} ∇_i v_C`: `x_i − x_{ᾱ(i)}` for minority members,
/// `x_i − x_{ᾱ⁻¹(i)}` for matched majority members, zero otherwise.
pub fn clique_objective_gradient(x: &StateMatrix, spec: &MatchingSpec, i: usize) -> Vec<f64> {
    let mut g = vec![0.0; x.dim()];
    for ev in spec.evaluate(x) {
        if ev.clique.contains(i) {
            ev.add_gradient(x, i, &mut g);
        }
    }
    g
}

impl Objective for MatchingSpec {
    fn value(&self, x: &StateMatrix) -> f64 {
        clique_objective_value(x, self)
    }

    fn gradient(&self, x: &StateMatrix, i: usize) -> Vec<f64> {
        clique_objective_gradient(x, self, i)
    }

    fn gradients(&self, x: &StateMatrix) -> StateMatrix {
        self.gradients_on(x, &proximity_graph(x, self.delta))
    }
}
