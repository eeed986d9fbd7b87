mod common;

use common::dot;
use dirflow_core::controller::{proposed_control_agent, ClosedLoop, ControllerKind, ControllerParams, FormationLoop, MatchingLoop};
use dirflow_core::objectives::{Objective, TiePolicy};
use dirflow_core::{DirectedNetwork, Partition, StateMatrix};
use proptest::prelude::*;

/// A random digraph whose one-way edges all run from the first half of the
/// agents to the second, with its shape.
fn network_case() -> impl Strategy<Value = (DirectedNetwork, StateMatrix, StateMatrix)> {
    (4usize..=8)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0u8..3, n * (n - 1) / 2),
                prop::collection::vec(-5.0..5.0f64, 2 * n),
                prop::collection::vec(-8.0..8.0f64, 2 * n),
            )
        })
        .prop_map(|(kinds, shape, x)| {
            let n = shape.len() / 2;
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    match kinds[k] {
                        0 => edges.extend([(i, j), (j, i)]),
                        1 if i < n / 2 && j >= n / 2 => edges.push((i, j)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            (
                DirectedNetwork::new(n, edges).unwrap(),
                StateMatrix::from_columns(2, shape).unwrap(),
                StateMatrix::from_columns(2, x).unwrap(),
            )
        })
}

fn formation_loop(g: &DirectedNetwork, shape: &StateMatrix, kind: ControllerKind) -> Option<FormationLoop> {
    let n = g.n();
    let tails = g.edges().filter(|&(i, j)| !g.has_edge(j, i)).map(|e| e.0);
    let params = ControllerParams::uniform(Partition::from_group_a(n, tails).ok()?, 1.1, 0.7, 0.3, 0.5).ok()?;
    FormationLoop::new(g.clone(), shape, kind, params, vec![0.8; n]).ok()
}

proptest! {
    #[test]
    fn inputs_ignore_agents_outside_the_out_neighbourhood(
        (g, shape, x) in network_case(),
        noise in prop::collection::vec(-20.0..20.0f64, 16),
    ) {
        for kind in [ControllerKind::Proposed, ControllerKind::GradientFlow, ControllerKind::NaiveDirected] {
            let Some(lp) = formation_loop(&g, &shape, kind) else { continue };
            let base = lp.control(&x).inputs;
            for i in 0..g.n() {
                let mut y = x.clone();
                for (j, v) in (0..g.n()).filter(|&j| j != i && !g.has_edge(i, j)).zip(noise.chunks(2)) {
                    y.col_mut(j)[0] += v[0];
                    y.col_mut(j)[1] += v[1];
                }
                let u = lp.control(&y).inputs;
                prop_assert_eq!(u.col(i), base.col(i));
            }
        }
    }

    #[test]
    fn agent_law_agrees_with_the_team_law((g, shape, x) in network_case()) {
        let Some(lp) = formation_loop(&g, &shape, ControllerKind::Proposed) else { return Ok(()) };
        let team = lp.control(&x).inputs;
        for i in 0..g.n() {
            let (u, _) = proposed_control_agent(&x, lp.params(), lp.v_ud(), lp.v_bar(), i);
            prop_assert_eq!(u.as_slice(), team.col(i));
        }
    }

    #[test]
    fn proposed_law_never_increases_v_ud((g, shape, x) in network_case()) {
        let Some(lp) = formation_loop(&g, &shape, ControllerKind::Proposed) else { return Ok(()) };
        let u = lp.control(&x).inputs;
        let grad = lp.v_ud().gradients(&x);
        prop_assert!(dot(grad.as_slice(), u.as_slice()) <= 1e-9 * (1.0 + grad.norm() * u.norm()));
        // the projected part ḡ = −uᵢ − κ∇ᵢV_ud of a tail input never ascends V̄
        for i in lp.params().partition.group_a() {
            let kappa = lp.params().kappa[i];
            let g_bar: Vec<f64> = u.col(i).iter().zip(grad.col(i)).map(|(ui, gi)| -ui - kappa * gi).collect();
            prop_assert!(dot(&lp.v_bar().gradient(&x, i), &g_bar) >= -1e-9 * (1.0 + u.norm()));
        }
    }

    #[test]
    fn matching_law_descends_the_bidirectional_objective(x in common::state(4..=10, 3.0)) {
        let n = x.n();
        let params = ControllerParams::uniform(Partition::leading(n, n / 2), 1.2, 0.6, 0.1, 0.6).unwrap();
        let lp = MatchingLoop::new(ControllerKind::Proposed, params, vec![1.0; n], 3.0, 1.5, TiePolicy::AMinority).unwrap();
        let u = lp.control(&x).inputs;
        let grad = lp.v_ud().gradients(&x);
        prop_assert!(dot(grad.as_slice(), u.as_slice()) <= 1e-9 * (1.0 + grad.norm() * u.norm()));
    }
}

#[test]
fn gains_must_be_positive_where_they_are_read() {
    let p = Partition::leading(3, 1);
    assert!(ControllerParams::uniform(p.clone(), 0.0, 1.0, 0.0, 1.0).is_err());
    assert!(ControllerParams::uniform(p.clone(), 1.0, 1.0, -0.1, 1.0).is_err());
    assert!(ControllerParams::uniform(p, 1.0, 1.0, 0.0, 1.0).is_ok());
}
