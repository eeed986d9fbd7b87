mod common;

use common::dot;
use dirflow_core::controller::{g_bar_closed_form, g_bar_qp_oracle, g_hat, GBarCase};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64, f64)> {
    (1usize..=4).prop_flat_map(|d| (common::vector(d), common::vector(d), 0.01..5.0f64, 0.01..5.0f64))
}

proptest! {
    #[test]
    fn closed_form_matches_the_qp(( a, b, lambda, eta) in instance()) {
        let (g, _) = g_bar_closed_form(&a, &b, lambda, eta);
        let oracle = g_bar_qp_oracle(&a, &b, lambda, eta);
        for (x, y) in g.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn projection_keeps_both_descent_constraints((a, b, lambda, eta) in instance()) {
        let (g, case) = g_bar_closed_form(&a, &b, lambda, eta);
        let scale = 1e-12 * (1.0 + dot(&a, &a) + dot(&b, &b)) * (lambda + eta);
        prop_assert!(dot(&g, &a) >= -scale);
        prop_assert!(dot(&g, &b) >= -scale);
        prop_assert_ne!(case, GBarCase::Zero);
    }

    #[test]
    fn feasible_blends_pass_through_unchanged((a, b, lambda, eta) in instance()) {
        let h = g_hat(&a, &b, lambda, eta);
        prop_assume!(dot(&h, &a) >= 0.0 && dot(&h, &b) >= 0.0);
        let (g, case) = g_bar_closed_form(&a, &b, lambda, eta);
        prop_assert_eq!(case, GBarCase::Unconstrained);
        prop_assert_eq!(g, h);
    }

    #[test]
    fn projection_is_no_further_than_any_feasible_point((a, b, lambda, eta) in instance(), probe in common::vector(4)) {
        let (g, _) = g_bar_closed_form(&a, &b, lambda, eta);
        let h = g_hat(&a, &b, lambda, eta);
        let p = &probe[..a.len()];
        prop_assume!(dot(p, &a) >= 0.0 && dot(p, &b) >= 0.0);
        let dist = |v: &[f64]| v.iter().zip(&h).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
        prop_assert!(dist(&g) <= dist(p) + 1e-9);
    }
}

#[test]
fn opposed_gradients_project_onto_the_shared_normal_plane() {
    // ĝ points along a but against b: only the V_ud constraint binds
    let a = [1.0, 0.0];
    let b = [-1.0, 1.0];
    let (g, case) = g_bar_closed_form(&a, &b, 4.0, 0.5);
    assert_eq!(case, GBarCase::ProjectVud);
    assert!(dot(&g, &b).abs() < 1e-12);
    assert!(dot(&g, &a) > 0.0);
}
