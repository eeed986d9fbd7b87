use crate::assignment::{self, AssignmentMap, AssignmentProblem};
use crate::controller::ControllerParams;
use crate::error::{Error, Result};
use crate::graph::{maximal_cliques, proximity_graph, Partition};
use crate::objectives::{minority_majority, FormationSpec, TiePolicy};
use crate::state::StateMatrix;

/// `½ Σᵢ Σⱼ |‖xᵢ − xⱼ‖ − d_ij|` over all ordered pairs `i ≠ j`.
pub fn formation_error(x: &StateMatrix, spec: &FormationSpec) -> Result<f64> {
    if !spec.is_complete() || spec.n() != x.n() {
        return Err(Error::InvalidParameter("formation error needs every pairwise desired distance".into()));
    }
    Ok(spec.edges().iter().map(|e| (x.distance(e.i, e.j) - e.distance).abs()).sum())
}

/// Frobenius norm of the stacked inputs.
pub fn input_norm(u: &StateMatrix) -> f64 {
    u.norm()
}

/// Solves the team-wide minority → majority assignment on `x` and counts pairs
/// closer than `tol`.
pub fn matched_pairs(x: &StateMatrix, groups: &Partition, tol: f64, tie: TiePolicy) -> (usize, AssignmentMap) {
    assert!(tol > 0.0, "matched-pair tolerance must be positive");
    let all: Vec<usize> = (0..x.n()).collect();
    let (minority, majority) = minority_majority(&all, groups, tie);
    let problem = AssignmentProblem::from_state(x, &minority, &majority).expect("agents index the state");
    let map = assignment::solve(&problem);
    let count = map.pairs.iter().filter(|&&(i, j)| x.distance(i, j) < tol).count();
    (count, map)
}

/// Per-agent exponential rate coefficients:
/// `ζᵢ = ½(λᵢ|clqᵢ(G_δA)| + (2κᵢ + ηᵢ)|clqᵢ(G_δB)|)` on `N_A`,
/// `ζᵢ = μᵢ|clqᵢ(G_δB)|` on `N_B`.
pub fn zeta_rates(x: &StateMatrix, params: &ControllerParams, delta_a: f64, delta_b: f64) -> Vec<f64> {
    let count = |delta: f64| {
        let mut c = vec![0usize; x.n()];
        for clique in maximal_cliques(&proximity_graph(x, delta)) {
            for &i in clique.members() {
                c[i] += 1;
            }
        }
        c
    };
    let (in_a, in_b) = (count(delta_a), count(delta_b));
    (0..x.n())
        .map(|i| {
            if params.partition.in_a(i) {
                0.5 * (params.lambda[i] * in_a[i] as f64 + (2.0 * params.kappa[i] + params.eta[i]) * in_b[i] as f64)
            } else {
                params.mu[i] * in_b[i] as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formation_error_hand_values() {
        let shape = StateMatrix::from_points(&[[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        let spec = FormationSpec::complete_from_shape(&shape).unwrap();
        assert_eq!(formation_error(&shape, &spec).unwrap(), 0.0);
        // collapse to the origin: |0−3| + |0−4| + |0−5|
        assert_eq!(formation_error(&StateMatrix::zeros(2, 3), &spec).unwrap(), 12.0);
        let stretched = StateMatrix::from_points(&[[0.0, 0.0], [6.0, 0.0], [0.0, 8.0]]).unwrap();
        assert_eq!(formation_error(&stretched, &spec).unwrap(), 12.0);
    }

    #[test]
    fn input_norm_hand_values() {
        assert_eq!(input_norm(&StateMatrix::zeros(2, 3)), 0.0);
        assert_eq!(input_norm(&StateMatrix::from_points(&[[3.0, 4.0]]).unwrap()), 5.0);
        assert_eq!(input_norm(&StateMatrix::from_points(&[[1.0, 1.0], [1.0, 1.0]]).unwrap()), 2.0);
    }

    #[test]
    fn half_matched_state() {
        let x = StateMatrix::from_points(&[[0.0, 0.0], [5.0, 0.0], [0.0, 0.0], [5.5, 0.0]]).unwrap();
        let (count, map) = matched_pairs(&x, &Partition::leading(4, 2), 1e-2, TiePolicy::AMinority);
        assert_eq!(count, 1);
        assert_eq!(map.pairs, vec![(0, 2), (1, 3)]);
        let far = StateMatrix::from_points(&[[0.0, 0.0], [5.0, 0.0], [10.0, 0.0], [15.0, 0.0]]).unwrap();
        assert_eq!(matched_pairs(&far, &Partition::leading(4, 2), 1e-2, TiePolicy::AMinority).0, 0);
    }

    #[test]
    fn zeta_of_an_isolated_pair() {
        let x = StateMatrix::from_points(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let params = ControllerParams::uniform(Partition::leading(2, 1), 1.2, 0.6, 0.0, 0.6).unwrap();
        let z = zeta_rates(&x, &params, 3.0, 1.5);
        assert!((z[0] - 0.9).abs() < 1e-15);
        assert!((z[1] - 0.6).abs() < 1e-15);
        let with_kappa = ControllerParams::uniform(Partition::leading(2, 1), 1.2, 0.6, 0.25, 0.6).unwrap();
        assert!((zeta_rates(&x, &with_kappa, 3.0, 1.5)[0] - 1.15).abs() < 1e-15);
    }
}
