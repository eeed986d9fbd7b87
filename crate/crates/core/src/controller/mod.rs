//! Control laws: gradient flow, the naive directed law, and the proposed
//! projection-based law.

mod closed_loop;
mod projection;

pub use closed_loop::{ClosedLoop, FormationLoop, MatchingLoop};
pub use projection::{g_bar_closed_form, g_bar_qp_oracle, g_hat, GBarCase};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::objectives::{Objective, UnidirectionalPotential};
use crate::state::{dot, StateMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    /// `uᵢ = −ḡᵢ − κᵢ∇ᵢV_ud` on `N_A`, `uᵢ = −μᵢ∇ᵢV_ud` on `N_B`.
    Proposed,
    /// `uᵢ = −νᵢ∇ᵢV_ud` (previous method A).
    GradientFlow,
    /// Gradient flow that also descends unidirectional edges from the tail
    /// side (previous method B).
    NaiveDirected,
}

/// Per-agent gains and the `(N_A, N_B)` split. Vectors are indexed by agent;
/// `λ, η, κ` are read only on `N_A`, `μ` only on `N_B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    pub partition: Partition,
    pub lambda: Vec<f64>,
    pub eta: Vec<f64>,
    pub kappa: Vec<f64>,
    pub mu: Vec<f64>,
}

impl ControllerParams {
    pub fn uniform(partition: Partition, lambda: f64, eta: f64, kappa: f64, mu: f64) -> Result<Self> {
        let n = partition.n();
        let p = Self { partition, lambda: vec![lambda; n], eta: vec![eta; n], kappa: vec![kappa; n], mu: vec![mu; n] };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for (name, v) in [("lambda", &self.lambda), ("eta", &self.eta), ("kappa", &self.kappa), ("mu", &self.mu)] {
            if v.len() != n {
                return Err(Error::InvalidParameter(format!("{name} has {} entries for {n} agents", v.len())));
            }
        }
        for i in 0..n {
            let ok = if self.partition.in_a(i) {
                self.lambda[i] > 0.0 && self.eta[i] > 0.0 && self.kappa[i] >= 0.0
            } else {
                self.mu[i] > 0.0
            };
            let finite = [self.lambda[i], self.eta[i], self.kappa[i], self.mu[i]].iter().all(|g| g.is_finite());
            if !ok || !finite {
                return Err(Error::InvalidParameter(format!("gains of agent {i} violate λ, η, μ > 0, κ ≥ 0")));
            }
        }
        Ok(())
    }
}

/// Inputs `U` (one column per agent) and, for `N_A` agents of the proposed
/// law, which branch produced `ḡᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlOutput {
    pub inputs: StateMatrix,
    pub cases: Vec<Option<GBarCase>>,
}

/// Proposed input of agent `i` from its two gradients.
pub fn proposed_input(params: &ControllerParams, i: usize, grad_ud: &[f64], grad_bar: &[f64]) -> (Vec<f64>, Option<GBarCase>) {
    if params.partition.in_a(i) {
        let (g, case) = g_bar_closed_form(grad_bar, grad_ud, params.lambda[i], params.eta[i]);
        let k = params.kappa[i];
        (g.iter().zip(grad_ud).map(|(gk, vk)| -gk - k * vk).collect(), Some(case))
    } else {
        (grad_ud.iter().map(|v| -params.mu[i] * v).collect(), None)
    }
}

/// Input of a single agent, computed from per-agent gradient queries only.
pub fn proposed_control_agent<U, B>(x: &StateMatrix, params: &ControllerParams, v_ud: &U, v_bar: &B, i: usize) -> (Vec<f64>, Option<GBarCase>)
where
    U: Objective + ?Sized,
    B: Objective + ?Sized,
{
    let grad_ud = v_ud.gradient(x, i);
    let grad_bar = if params.partition.in_a(i) { v_bar.gradient(x, i) } else { vec![0.0; x.dim()] };
    proposed_input(params, i, &grad_ud, &grad_bar)
}

pub fn proposed_control_from_gradients(params: &ControllerParams, grad_ud: &StateMatrix, grad_bar: &StateMatrix) -> ControlOutput {
    let mut inputs = StateMatrix::zeros(grad_ud.dim(), grad_ud.n());
    let mut cases = Vec::with_capacity(grad_ud.n());
    for i in 0..grad_ud.n() {
        let (u, case) = proposed_input(params, i, grad_ud.col(i), grad_bar.col(i));
        inputs.col_mut(i).copy_from_slice(&u);
        cases.push(case);
    }
    ControlOutput { inputs, cases }
}

pub fn proposed_control<U, B>(x: &StateMatrix, params: &ControllerParams, v_ud: &U, v_bar: &B) -> ControlOutput
where
    U: Objective + ?Sized,
    B: Objective + ?Sized,
{
    let grad_ud = v_ud.gradients(x);
    let grad_bar = if params.partition.group_a().is_empty() { StateMatrix::zeros(x.dim(), x.n()) } else { v_bar.gradients(x) };
    proposed_control_from_gradients(params, &grad_ud, &grad_bar)
}

/// `uᵢ = −νᵢ∇ᵢV`.
pub fn gradient_flow_control<V: Objective + ?Sized>(x: &StateMatrix, nu: &[f64], v: &V) -> ControlOutput {
    let mut inputs = v.gradients(x);
    for i in 0..x.n() {
        inputs.col_mut(i).iter_mut().for_each(|g| *g *= -nu[i]);
    }
    ControlOutput { inputs, cases: vec![None; x.n()] }
}

/// `uᵢ = −νᵢ(∇ᵢV_ud + ∇_{xᵢ} Σ_{(i,j) ∈ E_di} φ_ij)`.
pub fn naive_directed_control<V: Objective + ?Sized>(x: &StateMatrix, nu: &[f64], v_ud: &V, di: &UnidirectionalPotential) -> ControlOutput {
    let mut inputs = v_ud.gradients(x);
    for i in 0..x.n() {
        let extra = di.tail_gradient(x, i);
        for (u, e) in inputs.col_mut(i).iter_mut().zip(&extra) {
            *u = -nu[i] * (*u + e);
        }
    }
    ControlOutput { inputs, cases: vec![None; x.n()] }
}

/// `Σᵢ (∇ᵢV_ud)ᵀuᵢ`, the instantaneous rate of change of `V_ud`.
pub fn check_descent<V: Objective + ?Sized>(x: &StateMatrix, u: &StateMatrix, v_ud: &V) -> f64 {
    descent_rate(&v_ud.gradients(x), u)
}

pub fn descent_rate(grad_ud: &StateMatrix, u: &StateMatrix) -> f64 {
    dot(grad_ud.as_slice(), u.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{DesiredEdge, FormationSpec};

    #[test]
    fn params_validation() {
        let part = Partition::leading(3, 1);
        assert!(ControllerParams::uniform(part.clone(), 1.0, 1.0, 0.0, 1.0).is_ok());
        assert!(ControllerParams::uniform(part.clone(), 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(ControllerParams::uniform(part.clone(), 1.0, 1.0, -0.1, 1.0).is_err());
        assert!(ControllerParams::uniform(part.clone(), 1.0, 1.0, 0.0, 0.0).is_err());
        let mut p = ControllerParams::uniform(part, 1.0, 1.0, 0.0, 1.0).unwrap();
        p.mu.pop();
        assert!(p.validate().is_err());
    }

    #[test]
    fn b_agents_follow_scaled_gradient() {
        let grad = StateMatrix::from_points(&[[1.0, 2.0], [3.0, -4.0]]).unwrap();
        let params = ControllerParams::uniform(Partition::leading(2, 0), 1.0, 1.0, 0.0, 0.5).unwrap();
        let out = proposed_control_from_gradients(&params, &grad, &StateMatrix::zeros(2, 2));
        assert_eq!(out.inputs.as_slice(), &[-0.5, -1.0, -1.5, 2.0]);
        assert_eq!(out.cases, vec![None, None]);
    }

    #[test]
    fn gradient_flow_and_naive_scale() {
        let x = StateMatrix::from_points(&[[0.0], [2.0]]).unwrap();
        let spec = FormationSpec::new(2, [DesiredEdge { i: 0, j: 1, distance: 1.0 }]).unwrap();
        let out = gradient_flow_control(&x, &[0.5, 2.0], &spec);
        assert_eq!(out.inputs.as_slice(), &[3.0, -12.0]);
        let di = UnidirectionalPotential::new(2, &[(0, 1)], &spec).unwrap();
        let naive = naive_directed_control(&x, &[1.0, 1.0], &spec, &di);
        // tail 0: -(−6 − 3) = 9; head 1: −6
        assert_eq!(naive.inputs.as_slice(), &[9.0, -6.0]);
        assert!(check_descent(&x, &out.inputs, &spec) < 0.0);
    }
}
