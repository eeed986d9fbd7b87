//! Property suites behind `dirflow validate <suite>`.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use dirflow_core::assignment::{solve_brute_force, solve_hungarian, AssignmentProblem};
use dirflow_core::controller::{
    g_bar_closed_form, g_bar_qp_oracle, ControllerKind, ControllerParams, GBarCase, MatchingLoop,
};
use dirflow_core::graph::{
    brute_force_maximal_cliques, check_assumption1, maximal_cliques, proximity_graph, two_range_digraph, undirected_closure, Partition,
    UndirectedGraph,
};
use dirflow_core::objectives::{finite_difference_gradient, DesiredEdge, FormationSpec, MatchingSpec, Objective, TiePolicy};
use dirflow_core::sim::{epsilon_of_target, simulate, zeta_rates, Integrator, SimConfig};
use dirflow_core::state::dot;
use dirflow_core::StateMatrix;

use crate::config::preset;
use crate::harness::run_scenario;
use crate::sampler::unit;

pub const SUITES: [&str; 6] = ["gbar", "graph", "gradient", "assignment", "descent", "attraction"];

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: usize,
    pub failures: usize,
    /// The first few failing instances.
    pub counterexamples: Vec<String>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Self { suite: suite.into(), checks: 0, failures: 0, counterexamples: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < 5 {
                self.counterexamples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} checks, {} failures", self.suite, self.checks, self.failures)?;
        for c in &self.counterexamples {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Runs a named suite with `samples` random instances (scaled per suite).
pub fn run_suite(name: &str, samples: usize, seed: u64) -> Option<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Some(match name {
        "gbar" => gbar(samples, &mut rng),
        "graph" => graph(samples, &mut rng),
        "gradient" => gradient(samples, &mut rng),
        "assignment" => assignment(samples, &mut rng),
        "descent" => descent(samples.clamp(1, 100) as u64),
        "attraction" => attraction(samples.clamp(1, 100), &mut rng),
        _ => return None,
    })
}

fn gauss(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

fn random_state(rng: &mut impl RngCore, n: usize, half_width: f64) -> StateMatrix {
    let data = (0..2 * n).map(|_| uniform(rng, -half_width, half_width)).collect();
    StateMatrix::from_columns(2, data).expect("dimension 2")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn gbar(samples: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut r = Report::new("gbar");
    for _ in 0..samples {
        let d = [1, 2, 3, 5][rng.gen_range(0..4)];
        let (gv, gu) = (gauss(rng, d), gauss(rng, d));
        let (lambda, eta) = (uniform(rng, 0.01, 5.0), uniform(rng, 0.01, 5.0));
        let (g, case) = g_bar_closed_form(&gv, &gu, lambda, eta);
        let oracle = g_bar_qp_oracle(&gv, &gu, lambda, eta);
        let scale = 1.0 + g.iter().map(|v| v.abs()).fold(0.0, f64::max);
        r.check(max_abs_diff(&g, &oracle) <= 1e-8 * scale, || format!("closed form {g:?} vs oracle {oracle:?} for ∇V̄ {gv:?}, ∇V {gu:?}"));
        r.check(dot(&g, &gv) >= -1e-12 * scale && dot(&g, &gu) >= -1e-12 * scale, || format!("constraint violated by {g:?}"));
        r.check(case != GBarCase::Zero, || format!("fourth sign pattern at ∇V̄ {gv:?}, ∇V {gu:?}"));
    }
    r
}

fn graph(samples: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut r = Report::new("graph");
    for _ in 0..samples {
        let n = rng.gen_range(2..=15);
        let x = random_state(rng, n, 4.0);
        let groups = Partition::from_mask((0..n).map(|_| rng.gen_bool(0.5)).collect());
        let delta_b = uniform(rng, 0.2, 3.0);
        let delta_a = delta_b + uniform(rng, 0.01, 3.0);
        let g = two_range_digraph(&x, &groups, delta_a, delta_b).expect("valid ranges");
        r.check(check_assumption1(&g), || format!("tail/head overlap for n = {n}"));
        let near = proximity_graph(&x, delta_b);
        r.check(near.edges().all(|(i, j)| g.has_edge(i, j) && g.has_edge(j, i)), || "a δ_B pair is not bidirectional".into());
        let closure = undirected_closure(&g);
        let far = proximity_graph(&x, delta_a);
        r.check(closure.is_subgraph_of(&far), || "closure leaves the δ_A graph".into());
        r.check(
            far.edges().all(|(i, j)| closure.has_edge(i, j) || (!groups.in_a(i) && !groups.in_a(j))),
            || "δ_A edge outside closure ∪ B–B pairs".into(),
        );
    }
    for _ in 0..(samples / 20).max(1) {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.9);
        let mut h = UndirectedGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    h.add_edge(i, j).expect("valid edge");
                }
            }
        }
        let fast = maximal_cliques(&h);
        let slow = brute_force_maximal_cliques(&h);
        r.check(fast == slow, || format!("clique mismatch on n = {n}: {fast:?} vs {slow:?}"));
    }
    r
}

fn relative_error(analytic: &StateMatrix, numeric: &StateMatrix) -> f64 {
    max_abs_diff(analytic.as_slice(), numeric.as_slice()) / analytic.as_slice().iter().map(|v| v.abs()).fold(1.0, f64::max)
}

/// True if the clique/assignment structure is the same at `x` and at every
/// `x ± 2h·e_k`.
pub fn matching_structure_stable(spec: &MatchingSpec, x: &StateMatrix, h: f64) -> bool {
    let base = spec.signature(x);
    let mut probe = x.clone();
    for k in 0..x.as_slice().len() {
        let orig = probe.as_slice()[k];
        for s in [-2.0 * h, 2.0 * h] {
            probe.as_mut_slice()[k] = orig + s;
            if spec.signature(&probe) != base {
                return false;
            }
        }
        probe.as_mut_slice()[k] = orig;
    }
    true
}

fn gradient(samples: usize, rng: &mut ChaCha8Rng) -> Report {
    const H: f64 = 1e-6;
    let mut r = Report::new("gradient");
    for _ in 0..samples {
        let n = rng.gen_range(2..=8);
        let shape = random_state(rng, n, 5.0);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.6) {
                    edges.push(DesiredEdge { i, j, distance: shape.distance(i, j) });
                }
            }
        }
        let spec = FormationSpec::new(n, edges).expect("valid edges");
        let x = random_state(rng, n, 5.0);
        let err = relative_error(&spec.gradients(&x), &finite_difference_gradient(&spec, &x, H));
        r.check(err < 1e-5, || format!("formation gradient relative error {err:e} at n = {n}"));
    }
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples && attempts < 20 * samples {
        attempts += 1;
        let n = rng.gen_range(2..=8);
        let groups = Partition::from_mask((0..n).map(|_| rng.gen_bool(0.5)).collect());
        let delta = if rng.gen_bool(0.5) { 1.5 } else { 3.0 };
        let spec = MatchingSpec::new(groups, delta);
        let x = random_state(rng, n, 2.0);
        if !matching_structure_stable(&spec, &x, H) {
            continue;
        }
        checked += 1;
        let err = relative_error(&spec.gradients(&x), &finite_difference_gradient(&spec, &x, H));
        r.check(err < 1e-5, || format!("matching gradient relative error {err:e} at n = {n}, δ = {delta}"));
    }
    r
}

fn assignment(samples: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut r = Report::new("assignment");
    for _ in 0..samples {
        let m = rng.gen_range(0..=7);
        let k = rng.gen_range(m..=m + 3);
        let pts = |rng: &mut ChaCha8Rng, count: usize, offset: usize| -> Vec<(usize, Vec<f64>)> {
            (0..count).map(|i| (offset + i, vec![uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0)])).collect()
        };
        let (mn, mj) = (pts(rng, m, 0), pts(rng, k, m));
        let p = AssignmentProblem::from_points(mn, mj).expect("minority fits");
        let brute = solve_brute_force(&p).expect("within the brute-force limit");
        let fast = solve_hungarian(&p);
        r.check((brute.cost - fast.cost).abs() <= 1e-12, || format!("{m}×{k}: brute force {} vs Hungarian {}", brute.cost, fast.cost));
    }
    r
}

/// Proposed formation runs with the descent monitor enabled.
fn descent(seeds: u64) -> Report {
    let mut r = Report::new("descent");
    for name in ["formation4", "formation6"] {
        let mut cfg = preset(name).expect("bundled preset");
        cfg.methods = vec![crate::config::Method::Proposed];
        cfg.seeds = crate::config::Seeds::Count(seeds);
        cfg.sim.t_final = 10.0;
        cfg.sim.check_descent = true;
        let batch = run_scenario(&cfg).expect("preset validates");
        for rec in &batch.summary.runs {
            r.check(rec.status == dirflow_core::sim::RunStatus::Completed, || format!("{name} seed {}: {:?}", rec.seed, rec.status));
        }
    }
    r
}

/// A random matched configuration of `pairs` co-located A–B pairs in
/// `[-w, w]²`, agents `0..pairs` in A and `pairs..2·pairs` in B.
pub fn random_matched_target(rng: &mut impl RngCore, pairs: usize, half_width: f64) -> StateMatrix {
    let centers = random_state(rng, pairs, half_width);
    let mut y = StateMatrix::zeros(2, 2 * pairs);
    for k in 0..pairs {
        y.col_mut(k).copy_from_slice(centers.col(k));
        y.col_mut(pairs + k).copy_from_slice(centers.col(k));
    }
    y
}

/// Moves each agent uniformly inside its own disc of radius `radius`.
pub fn perturb_in_discs(rng: &mut impl RngCore, y: &StateMatrix, radius: f64) -> StateMatrix {
    let mut x = y.clone();
    for i in 0..y.n() {
        let rho = radius * unit(rng).sqrt();
        let theta = std::f64::consts::TAU * unit(rng);
        x.col_mut(i)[0] += rho * theta.cos();
        x.col_mut(i)[1] += rho * theta.sin();
    }
    x
}

/// Least-squares slope of `ln d` against `t`.
pub fn log_slope(times: &[f64], dists: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = times.iter().zip(dists).map(|(&t, &d)| (t, d.ln())).collect();
    let m = pts.len() as f64;
    let (st, sl) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + t, b + l));
    let (mt, ml) = (st / m, sl / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + (t - mt) * (l - ml), b + (t - mt) * (t - mt)));
    num / den
}

fn attraction(samples: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut r = Report::new("attraction");
    let (delta_a, delta_b, pairs) = (3.0, 1.5, 3);
    let groups = Partition::leading(2 * pairs, pairs);
    let params = ControllerParams::uniform(groups.clone(), 1.2, 0.6, 0.0, 0.6).expect("valid gains");
    let lp = MatchingLoop::new(ControllerKind::Proposed, params.clone(), vec![1.0; 2 * pairs], delta_a, delta_b, TiePolicy::AMinority)
        .expect("valid loop");
    let mut done = 0;
    while done < samples {
        let y = random_matched_target(rng, pairs, 3.0);
        let ball = epsilon_of_target(&y, &groups, delta_a, delta_b, TiePolicy::AMinority).expect("matched by construction");
        if ball.radius <= 1e-3 {
            continue;
        }
        done += 1;
        let x0 = perturb_in_discs(rng, &y, 0.9 * ball.radius);
        let zeta = zeta_rates(&x0, &params, delta_a, delta_b);
        let cfg = SimConfig {
            dt: 1e-3,
            t_final: 15.0,
            record_stride: 100,
            integrator: Integrator::Rk4,
            monitor_graph: true,
            check_descent: false,
            ..SimConfig::default()
        };
        let traj = simulate(&x0, &lp, &cfg).expect("valid config");
        r.check(traj.graph_changes == 0, || format!("graph changed {} times", traj.graph_changes));
        for &(i, j) in &ball.assignment.pairs {
            let (ts, ds): (Vec<f64>, Vec<f64>) =
                traj.times.iter().zip(&traj.states).map(|(&t, x)| (t, x.distance(i, j))).filter(|&(_, d)| d > 1e-9).unzip();
            let expected = -(zeta[i] + zeta[j]);
            let final_d = traj.final_state().distance(i, j);
            r.check(final_d < 1e-6, || format!("pair ({i}, {j}) ends at distance {final_d:e}"));
            if ts.len() >= 3 {
                let slope = log_slope(&ts, &ds);
                r.check((slope / expected - 1.0).abs() < 0.05, || format!("pair ({i}, {j}) slope {slope} vs {expected}"));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_slope_of_an_exponential() {
        let ts: Vec<f64> = (0..10).map(|k| k as f64 * 0.5).collect();
        let ds: Vec<f64> = ts.iter().map(|t| 3.0 * (-1.7 * t).exp()).collect();
        assert!((log_slope(&ts, &ds) + 1.7).abs() < 1e-12);
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["gbar", "graph", "gradient", "assignment"] {
            let rep = run_suite(name, 200, 1).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        assert!(run_suite("nope", 1, 0).is_none());
    }
}
