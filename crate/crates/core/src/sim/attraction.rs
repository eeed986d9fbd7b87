use serde::{Deserialize, Serialize};

use crate::assignment::{self, AssignmentMap, AssignmentProblem};
use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::objectives::{minority_majority, TiePolicy};
use crate::state::StateMatrix;

/// Ball around a matched configuration inside which every pair converges
/// exponentially and the sensing graph does not change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractionBall {
    pub center: StateMatrix,
    pub radius: f64,
    pub assignment: AssignmentMap,
    pub eps0: f64,
    pub eps_a: f64,
    pub eps_b: f64,
}

/// `ε(Y) = min{ε₀, ε_A, ε_B, δ_B/2}` with
/// `ε₀ = ⅙ min ‖yᵢ − yⱼ‖` and `ε_K = ½ min |δ_K − ‖yᵢ − yⱼ‖|`, both over
/// minority `i` and majority `j ≠ α_Y(i)`.
pub fn epsilon_of_target(y: &StateMatrix, groups: &Partition, delta_a: f64, delta_b: f64, tie: TiePolicy) -> Result<AttractionBall> {
    if !(delta_a > delta_b && delta_b > 0.0) {
        return Err(Error::SensingRanges { delta_a, delta_b });
    }
    if groups.n() != y.n() {
        return Err(Error::Dimension(format!("partition has {} agents, state {}", groups.n(), y.n())));
    }
    let all: Vec<usize> = (0..y.n()).collect();
    let (minority, majority) = minority_majority(&all, groups, tie);
    let map = assignment::solve(&AssignmentProblem::from_state(y, &minority, &majority)?);
    if map.cost != 0.0 {
        return Err(Error::NotMatched(format!("minority agents are not co-located with distinct partners (cost {:e})", map.cost)));
    }
    let (mut eps0, mut eps_a, mut eps_b) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for &i in &minority {
        let partner = map.partner_of(i);
        for &j in &majority {
            if Some(j) == partner {
                continue;
            }
            let d = y.distance(i, j);
            eps0 = eps0.min(d / 6.0);
            eps_a = eps_a.min((delta_a - d).abs() / 2.0);
            eps_b = eps_b.min((delta_b - d).abs() / 2.0);
        }
    }
    let radius = eps0.min(eps_a).min(eps_b).min(delta_b / 2.0);
    Ok(AttractionBall { center: y.clone(), radius, assignment: map, eps0, eps_a, eps_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pairs_at_distance_six() {
        let y = StateMatrix::from_points(&[[0.0, 0.0], [6.0, 0.0], [0.0, 0.0], [6.0, 0.0]]).unwrap();
        let ball = epsilon_of_target(&y, &Partition::leading(4, 2), 3.0, 1.5, TiePolicy::AMinority).unwrap();
        assert_eq!(ball.eps0, 1.0);
        assert_eq!(ball.eps_a, 1.5);
        assert_eq!(ball.eps_b, 2.25);
        assert_eq!(ball.radius, 0.75);
        assert_eq!(ball.assignment.pairs, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn degenerate_targets_have_zero_radius() {
        // two majority agents on top of each other
        let y = StateMatrix::from_points(&[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]).unwrap();
        let ball = epsilon_of_target(&y, &Partition::leading(3, 1), 3.0, 1.5, TiePolicy::AMinority).unwrap();
        assert_eq!(ball.radius, 0.0);
        // a cross pair exactly at δ_A
        let y = StateMatrix::from_points(&[[0.0, 0.0], [3.0, 0.0], [0.0, 0.0], [3.0, 0.0]]).unwrap();
        let ball = epsilon_of_target(&y, &Partition::leading(4, 2), 3.0, 1.5, TiePolicy::AMinority).unwrap();
        assert_eq!(ball.eps_a, 0.0);
        assert_eq!(ball.radius, 0.0);
    }

    #[test]
    fn rejects_unmatched_states() {
        let y = StateMatrix::from_points(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            epsilon_of_target(&y, &Partition::leading(2, 1), 3.0, 1.5, TiePolicy::AMinority),
            Err(Error::NotMatched(_))
        ));
    }
}
