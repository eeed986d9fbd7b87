mod common;

use dirflow_core::graph::{maximal_cliques, proximity_graph, UndirectedGraph};
use dirflow_core::objectives::{finite_difference_gradient, FormationSpec, MatchingSpec, Objective, TiePolicy};
use dirflow_core::{Partition, StateMatrix};
use proptest::prelude::*;

fn formation_case() -> impl Strategy<Value = (FormationSpec, StateMatrix)> {
    (common::state(2..=7, 5.0), common::state(7..=7, 5.0)).prop_map(|(x, shape)| {
        let n = x.n();
        let cols: Vec<f64> = shape.as_slice()[..2 * n].to_vec();
        let shape = StateMatrix::from_columns(2, cols).unwrap();
        (FormationSpec::complete_from_shape(&shape).unwrap(), x)
    })
}

fn matching_case() -> impl Strategy<Value = (MatchingSpec, StateMatrix)> {
    common::state(2..=8, 2.0).prop_flat_map(|x| {
        let n = x.n();
        (Just(x), prop::collection::vec(any::<bool>(), n), 0.5..3.0f64, any::<bool>()).prop_map(|(x, mask, delta, b_minority)| {
            let tie = if b_minority { TiePolicy::BMinority } else { TiePolicy::AMinority };
            (MatchingSpec::new(Partition::from_mask(mask), delta).with_tie(tie), x)
        })
    })
}

fn shifted(x: &StateMatrix, by: [f64; 2]) -> StateMatrix {
    let mut y = x.clone();
    for i in 0..y.n() {
        y.col_mut(i)[0] += by[0];
        y.col_mut(i)[1] += by[1];
    }
    y
}

fn max_abs_diff(a: &StateMatrix, b: &StateMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn formation_gradients_match_finite_differences((spec, x) in formation_case()) {
        let g = spec.gradients(&x);
        let fd = finite_difference_gradient(&spec, &x, 1e-6);
        prop_assert!(max_abs_diff(&g, &fd) <= 1e-5 * (1.0 + g.norm()));
    }

    #[test]
    fn formation_objective_is_translation_invariant((spec, x) in formation_case(), dx in -10.0..10.0f64, dy in -10.0..10.0f64) {
        let v = spec.value(&x);
        prop_assert!(v >= 0.0);
        prop_assert!((spec.value(&shifted(&x, [dx, dy])) - v).abs() <= 1e-9 * (1.0 + v));
        // the gradients of a translation-invariant objective sum to zero
        let g = spec.gradients(&x);
        for k in 0..2 {
            let s: f64 = (0..x.n()).map(|i| g.col(i)[k]).sum();
            prop_assert!(s.abs() <= 1e-9 * (1.0 + g.norm()));
        }
    }

    #[test]
    fn matching_gradients_match_finite_differences_away_from_switches((spec, x) in matching_case()) {
        let sig = spec.signature(&x);
        let mut probe = x.clone();
        for k in 0..x.as_slice().len() {
            for s in [-2e-6, 2e-6] {
                probe.as_mut_slice()[k] = x.as_slice()[k] + s;
                prop_assume!(spec.signature(&probe) == sig);
            }
            probe.as_mut_slice()[k] = x.as_slice()[k];
        }
        let g = spec.gradients(&x);
        let fd = finite_difference_gradient(&spec, &x, 1e-6);
        prop_assert!(max_abs_diff(&g, &fd) <= 1e-5 * (1.0 + g.norm()));
    }

    #[test]
    fn local_matching_gradient_agrees_with_the_global_one((spec, x) in matching_case()) {
        let g = spec.gradients(&x);
        for i in 0..x.n() {
            let local = spec.gradient_local(&x, i);
            for (a, b) in local.iter().zip(g.col(i)) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn matching_objective_vanishes_only_when_every_clique_is_matched((spec, x) in matching_case()) {
        let v = spec.value(&x);
        prop_assert!(v >= 0.0);
        prop_assert!((spec.value(&shifted(&x, [3.0, -1.0])) - v).abs() <= 1e-9 * (1.0 + v));
        let g = spec.gradients_on(&x, &proximity_graph(&x, 1e9));
        prop_assert!(g.is_finite());
    }
}

#[test]
fn matched_pairs_in_one_clique_have_zero_cost() {
    // two A–B pairs stacked on each other, all four within range
    let x = StateMatrix::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]).unwrap();
    let spec = MatchingSpec::new(Partition::leading(4, 2), 2.0);
    assert_eq!(maximal_cliques(&proximity_graph(&x, 2.0)).len(), 1);
    assert_eq!(spec.value(&x), 0.0);
    assert!(spec.gradients(&x).as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn formation_at_its_shape_has_zero_value() {
    let shape = StateMatrix::from_points(&[[0.0, 0.0], [2.0, 0.0], [0.0, 3.0]]).unwrap();
    let spec = FormationSpec::from_shape(&UndirectedGraph::complete(3), &shape).unwrap();
    assert!(spec.value(&shape) < 1e-20);
    assert!(spec.value(&shifted(&shape, [1.0, 1.0])) < 1e-20);
    let squeezed = StateMatrix::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.0, 3.0]]).unwrap();
    assert!(spec.value(&squeezed) > 0.0);
}
