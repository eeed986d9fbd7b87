//! Fixed-step integration of `ẋᵢ = uᵢ`.
//!
//! The control (and with it any proximity graph, clique set and assignment)
//! is re-evaluated at every derivative evaluation, so each RK4 stage sees its
//! own graph.

mod attraction;
mod metrics;

pub use attraction::{epsilon_of_target, AttractionBall};
pub use metrics::{formation_error, input_norm, matched_pairs, zeta_rates};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::controller::{descent_rate, ClosedLoop, ControllerKind};
use crate::error::{Error, Result};
use crate::graph::DirectedNetwork;
use crate::state::StateMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    Euler,
    Rk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Steps between recorded samples; the final state is always recorded.
    pub record_stride: usize,
    pub integrator: Integrator,
    pub seed: u64,
    /// Keep a graph snapshot with every recorded sample.
    pub record_graphs: bool,
    /// Compare the graph snapshot at every step and count changes.
    pub monitor_graph: bool,
    /// Enforce the per-step `V_ud` descent bound (proposed law only).
    pub check_descent: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            t_final: 10.0,
            record_stride: 100,
            integrator: Integrator::Euler,
            seed: 0,
            record_graphs: false,
            monitor_graph: false,
            check_descent: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_final must be at least dt, got {}", self.t_final)));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().max(1.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// A state entry became non-finite.
    Diverged { step: usize, time: f64 },
    /// `V_ud` rose by more than the `C·dt²` allowance.
    DescentViolation { step: usize, time: f64, increase: f64, allowance: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub seed: u64,
    pub times: Vec<f64>,
    pub states: Vec<StateMatrix>,
    pub inputs: Vec<StateMatrix>,
    pub v_ud: Vec<f64>,
    pub graphs: Vec<DirectedNetwork>,
    pub status: RunStatus,
    /// Largest `Σᵢ (∇ᵢV_ud)ᵀuᵢ` seen at a step start (proposed law only).
    pub max_descent_rate: f64,
    /// Number of steps whose end-of-step graph differs from the previous one.
    pub graph_changes: usize,
    pub steps_taken: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateMatrix {
        self.states.last().expect("a trajectory holds at least the initial state")
    }

    pub fn final_input(&self) -> &StateMatrix {
        self.inputs.last().expect("a trajectory holds at least the initial input")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty")
    }

    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }

    /// CSV with columns `t, x_i_k…, u_i_k…, V_ud` (agents and coordinates 1-based).
    pub fn to_csv(&self) -> String {
        let first = &self.states[0];
        let (d, n) = (first.dim(), first.n());
        let mut out = String::from("t");
        for prefix in ["x", "u"] {
            for i in 1..=n {
                for k in 1..=d {
                    write!(out, ",{prefix}_{i}_{k}").unwrap();
                }
            }
        }
        out.push_str(",V_ud\n");
        for s in 0..self.times.len() {
            write!(out, "{}", self.times[s]).unwrap();
            for m in [&self.states[s], &self.inputs[s]] {
                for v in m.as_slice() {
                    write!(out, ",{v}").unwrap();
                }
            }
            writeln!(out, ",{}", self.v_ud[s]).unwrap();
        }
        out
    }
}

/// Per-run record written by the batch harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub method: String,
    pub final_formation_error: Option<f64>,
    pub final_input_norm: f64,
    pub matched_pairs: Option<usize>,
    pub converged: bool,
    pub status: RunStatus,
    pub wall_time: f64,
}

fn step_rk4<L: ClosedLoop + ?Sized>(lp: &L, x: &StateMatrix, k1: &StateMatrix, dt: f64) -> StateMatrix {
    let k2 = lp.control(&x.axpy(dt / 2.0, k1)).inputs;
    let k3 = lp.control(&x.axpy(dt / 2.0, &k2)).inputs;
    let k4 = lp.control(&x.axpy(dt, &k3)).inputs;
    let mut next = x.clone();
    for (idx, v) in next.as_mut_slice().iter_mut().enumerate() {
        *v += dt / 6.0 * (k1.as_slice()[idx] + 2.0 * k2.as_slice()[idx] + 2.0 * k3.as_slice()[idx] + k4.as_slice()[idx]);
    }
    next
}

/// Allowance `C·dt²` for one step from `x` to `next`.
///
/// `C = L·‖Ū‖² + ‖∇V(x)‖·‖Ū − u‖/dt`, where `Ū = (next − x)/dt` is the
/// effective step direction and `L` a secant estimate of the Lipschitz
/// constant of `∇V_ud` along the step. For Euler the second term vanishes.
fn descent_allowance(dt: f64, x: &StateMatrix, next: &StateMatrix, u: &StateMatrix, grad: &StateMatrix, grad_next: &StateMatrix) -> f64 {
    let step: Vec<f64> = next.as_slice().iter().zip(x.as_slice()).map(|(a, b)| a - b).collect();
    let step_norm = step.iter().map(|v| v * v).sum::<f64>().sqrt();
    if step_norm == 0.0 {
        return 0.0;
    }
    let grad_jump = grad_next.as_slice().iter().zip(grad.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let lipschitz = grad_jump / step_norm;
    let u_bar_norm = step_norm / dt;
    let drift = step.iter().zip(u.as_slice()).map(|(s, uk)| (s / dt - uk).powi(2)).sum::<f64>().sqrt();
    let c = lipschitz * u_bar_norm * u_bar_norm + grad.norm() * drift / dt;
    c * dt * dt
}

pub fn simulate<L: ClosedLoop + ?Sized>(x0: &StateMatrix, lp: &L, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if x0.n() != lp.n() {
        return Err(Error::Dimension(format!("initial state has {} agents, controller {}", x0.n(), lp.n())));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidParameter("initial state is not finite".into()));
    }
    let steps = cfg.steps();
    let monitor_descent = cfg.check_descent && lp.kind() == ControllerKind::Proposed;

    let mut x = x0.clone();
    let mut u = lp.control(&x).inputs;
    let mut v = lp.lyapunov(&x);
    let mut grad = if monitor_descent { Some(lp.lyapunov_gradients(&x)) } else { None };
    let mut graph = if cfg.monitor_graph { Some(lp.snapshot(&x)) } else { None };

    let mut traj = Trajectory {
        seed: cfg.seed,
        times: vec![0.0],
        states: vec![x.clone()],
        inputs: vec![u.clone()],
        v_ud: vec![v],
        graphs: if cfg.record_graphs { vec![lp.snapshot(&x)] } else { Vec::new() },
        status: RunStatus::Completed,
        max_descent_rate: f64::NEG_INFINITY,
        graph_changes: 0,
        steps_taken: 0,
    };

    for step in 1..=steps {
        let t = step as f64 * cfg.dt;
        if let Some(g) = &grad {
            traj.max_descent_rate = traj.max_descent_rate.max(descent_rate(g, &u));
        }
        let next = match cfg.integrator {
            Integrator::Euler => x.axpy(cfg.dt, &u),
            Integrator::Rk4 => step_rk4(lp, &x, &u, cfg.dt),
        };
        traj.steps_taken = step;
        if !next.is_finite() {
            traj.status = RunStatus::Diverged { step, time: t };
            break;
        }
        let u_next = lp.control(&next).inputs;
        let v_next = lp.lyapunov(&next);
        if let Some(g) = &grad {
            let g_next = lp.lyapunov_gradients(&next);
            let allowance = descent_allowance(cfg.dt, &x, &next, &u, g, &g_next);
            let slack = 1e-12 * (1.0 + v.abs());
            if v_next - v > allowance + slack {
                traj.status = RunStatus::DescentViolation { step, time: t, increase: v_next - v, allowance };
                x = next;
                u = u_next;
                v = v_next;
                traj.times.push(t);
                traj.states.push(x.clone());
                traj.inputs.push(u.clone());
                traj.v_ud.push(v);
                break;
            }
            grad = Some(g_next);
        }
        if let Some(prev) = &mut graph {
            let now = lp.snapshot(&next);
            if now != *prev {
                traj.graph_changes += 1;
                *prev = now;
            }
        }
        x = next;
        u = u_next;
        v = v_next;
        if step % cfg.record_stride == 0 || step == steps {
            traj.times.push(t);
            traj.states.push(x.clone());
            traj.inputs.push(u.clone());
            traj.v_ud.push(v);
            if cfg.record_graphs {
                traj.graphs.push(lp.snapshot(&x));
            }
        }
    }
    Ok(traj)
}
