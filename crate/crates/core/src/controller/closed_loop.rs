use super::{gradient_flow_control, naive_directed_control, proposed_control, ControlOutput, ControllerKind, ControllerParams};
use crate::error::{Error, Result};
use crate::graph::{bidirectional_core, classify_edges, two_range_digraph, undirected_closure, DirectedNetwork};
use crate::objectives::{FormationSpec, MatchingSpec, Objective, TiePolicy, UnidirectionalPotential};
use crate::state::StateMatrix;

/// A control law bound to its objectives: everything the integrator needs.
pub trait ClosedLoop: Sync {
    fn n(&self) -> usize;
    fn kind(&self) -> ControllerKind;
    fn control(&self, x: &StateMatrix) -> ControlOutput;
    /// `V_ud(X)`.
    fn lyapunov(&self, x: &StateMatrix) -> f64;
    fn lyapunov_gradients(&self, x: &StateMatrix) -> StateMatrix;
    /// The sensing graph at `x`.
    fn snapshot(&self, x: &StateMatrix) -> DirectedNetwork;
}

/// Formation control over a fixed directed network.
#[derive(Debug, Clone)]
pub struct FormationLoop {
    kind: ControllerKind,
    params: ControllerParams,
    nu: Vec<f64>,
    graph: DirectedNetwork,
    v_ud: FormationSpec,
    v_bar: FormationSpec,
    di: UnidirectionalPotential,
}

impl FormationLoop {
    /// Desired distances are read off `shape`. The partition in `params` must
    /// contain every tail of a unidirectional edge and no head.
    pub fn new(graph: DirectedNetwork, shape: &StateMatrix, kind: ControllerKind, params: ControllerParams, nu: Vec<f64>) -> Result<Self> {
        let n = graph.n();
        if shape.n() != n || params.n() != n || nu.len() != n {
            return Err(Error::Dimension(format!(
                "graph has {n} nodes, shape {}, params {}, nu {}",
                shape.n(),
                params.n(),
                nu.len()
            )));
        }
        params.validate()?;
        if nu.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("nu must be positive".into()));
        }
        let cls = classify_edges(&graph);
        let overlap = cls.tail_head_overlap();
        if !overlap.is_empty() {
            return Err(Error::TailHeadOverlap(overlap));
        }
        if let Some(t) = cls.tails.iter().find(|&&t| !params.partition.in_a(t)) {
            return Err(Error::InvalidParameter(format!("tail agent {t} must belong to N_A")));
        }
        let on_heads: Vec<usize> = cls.heads.iter().copied().filter(|&h| params.partition.in_a(h)).collect();
        if !on_heads.is_empty() {
            return Err(Error::HintOnHeads(on_heads));
        }
        let v_ud = FormationSpec::from_shape(&bidirectional_core(&graph), shape)?;
        let v_bar = FormationSpec::from_shape(&undirected_closure(&graph), shape)?;
        let di = UnidirectionalPotential::new(n, &cls.unidirectional, &v_bar)?;
        Ok(Self { kind, params, nu, graph, v_ud, v_bar, di })
    }

    pub fn graph(&self) -> &DirectedNetwork {
        &self.graph
    }

    pub fn params(&self) -> &ControllerParams {
        &self.params
    }

    pub fn v_ud(&self) -> &FormationSpec {
        &self.v_ud
    }

    pub fn v_bar(&self) -> &FormationSpec {
        &self.v_bar
    }

    pub fn unidirectional(&self) -> &UnidirectionalPotential {
        &self.di
    }
}

impl ClosedLoop for FormationLoop {
    fn n(&self) -> usize {
        self.graph.n()
    }

    fn kind(&self) -> ControllerKind {
        self.kind
    }

    fn control(&self, x: &StateMatrix) -> ControlOutput {
        match self.kind {
            ControllerKind::Proposed => proposed_control(x, &self.params, &self.v_ud, &self.v_bar),
            ControllerKind::GradientFlow => gradient_flow_control(x, &self.nu, &self.v_ud),
            ControllerKind::NaiveDirected => naive_directed_control(x, &self.nu, &self.v_ud, &self.di),
        }
    }

    fn lyapunov(&self, x: &StateMatrix) -> f64 {
        self.v_ud.value(x)
    }

    fn lyapunov_gradients(&self, x: &StateMatrix) -> StateMatrix {
        self.v_ud.gradients(x)
    }

    fn snapshot(&self, _x: &StateMatrix) -> DirectedNetwork {
        self.graph.clone()
    }
}

/// Dynamic matching over the two-range proximity digraph. `V_ud` and `V̄_ud`
/// are the clique objectives on the `δ_B`- and `δ_A`-proximity graphs.
#[derive(Debug, Clone)]
pub struct MatchingLoop {
    kind: ControllerKind,
    params: ControllerParams,
    nu: Vec<f64>,
    delta_a: f64,
    delta_b: f64,
    v_ud: MatchingSpec,
    v_bar: MatchingSpec,
}

impl MatchingLoop {
    /// `params.partition` is the A/B grouping. Only the proposed law and
    /// gradient flow are defined for matching.
    pub fn new(kind: ControllerKind, params: ControllerParams, nu: Vec<f64>, delta_a: f64, delta_b: f64, tie: TiePolicy) -> Result<Self> {
        if !(delta_a > delta_b && delta_b > 0.0 && delta_a.is_finite()) {
            return Err(Error::SensingRanges { delta_a, delta_b });
        }
        if kind == ControllerKind::NaiveDirected {
            return Err(Error::InvalidParameter("the naive directed law is defined for fixed-graph formation only".into()));
        }
        params.validate()?;
        if nu.len() != params.n() || nu.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("nu must hold one positive gain per agent".into()));
        }
        let groups = params.partition.clone();
        let v_ud = MatchingSpec::new(groups.clone(), delta_b).with_tie(tie);
        let v_bar = MatchingSpec::new(groups, delta_a).with_tie(tie);
        Ok(Self { kind, params, nu, delta_a, delta_b, v_ud, v_bar })
    }

    pub fn params(&self) -> &ControllerParams {
        &self.params
    }

    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }

    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }

    pub fn v_ud(&self) -> &MatchingSpec {
        &self.v_ud
    }

    pub fn v_bar(&self) -> &MatchingSpec {
        &self.v_bar
    }
}

impl ClosedLoop for MatchingLoop {
    fn n(&self) -> usize {
        self.params.n()
    }

    fn kind(&self) -> ControllerKind {
        self.kind
    }

    fn control(&self, x: &StateMatrix) -> ControlOutput {
        match self.kind {
            ControllerKind::Proposed => proposed_control(x, &self.params, &self.v_ud, &self.v_bar),
            _ => gradient_flow_control(x, &self.nu, &self.v_ud),
        }
    }

    fn lyapunov(&self, x: &StateMatrix) -> f64 {
        self.v_ud.value(x)
    }

    fn lyapunov_gradients(&self, x: &StateMatrix) -> StateMatrix {
        self.v_ud.gradients(x)
    }

    fn snapshot(&self, x: &StateMatrix) -> DirectedNetwork {
        two_range_digraph(x, &self.params.partition, self.delta_a, self.delta_b).expect("ranges validated at construction")
    }
}
