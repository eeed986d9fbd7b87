mod common;

use dirflow_core::assignment::{solve, solve_brute_force, solve_hungarian, AssignmentProblem};
use dirflow_core::Error;
use proptest::prelude::*;

fn problem() -> impl Strategy<Value = AssignmentProblem> {
    (0usize..=6, 0usize..=3)
        .prop_flat_map(|(m, extra)| {
            let k = (m + extra).max(1);
            (prop::collection::vec(common::vector(2), m), prop::collection::vec(common::vector(2), k))
        })
        .prop_map(|(mn, mj)| {
            let m = mn.len();
            AssignmentProblem::from_points(mn.into_iter().enumerate().collect(), mj.into_iter().enumerate().map(|(j, q)| (m + j, q)).collect())
                .unwrap()
        })
}

proptest! {
    #[test]
    fn hungarian_cost_equals_exhaustive(p in problem()) {
        let fast = solve_hungarian(&p);
        let slow = solve_brute_force(&p).unwrap();
        prop_assert!((fast.cost - slow.cost).abs() <= 1e-9 * (1.0 + slow.cost));
        prop_assert_eq!(solve(&p).cost, fast.cost);
    }

    #[test]
    fn assignments_are_injective_and_complete(p in problem()) {
        let map = solve_hungarian(&p);
        prop_assert_eq!(map.len(), p.minority().len());
        let mut used: Vec<usize> = map.pairs.iter().map(|q| q.1).collect();
        used.sort();
        used.dedup();
        prop_assert_eq!(used.len(), map.len());
        for &(i, j) in &map.pairs {
            prop_assert!(p.minority().contains(&i) && p.majority().contains(&j));
            prop_assert_eq!(map.partner_of(i), Some(j));
            prop_assert_eq!(map.preimage_of(j), Some(i));
        }
    }
}

#[test]
fn more_minority_than_majority_is_rejected() {
    let r = AssignmentProblem::from_points(vec![(0, vec![0.0]), (1, vec![1.0])], vec![(2, vec![0.0])]);
    assert!(matches!(r, Err(Error::AssignmentShape { minority: 2, majority: 1 })));
}

#[test]
fn obvious_pairing_is_found() {
    let p = AssignmentProblem::from_points(
        vec![(0, vec![0.0, 0.0]), (1, vec![10.0, 0.0])],
        vec![(2, vec![10.1, 0.0]), (3, vec![0.0, 0.2]), (4, vec![50.0, 50.0])],
    )
    .unwrap();
    let map = solve_hungarian(&p);
    assert_eq!(map.pairs, vec![(0, 3), (1, 2)]);
    assert!((map.cost - 0.05).abs() < 1e-12);
}
