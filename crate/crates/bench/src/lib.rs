//! Seeded fixtures shared by the benchmarks in `benches/`.

use dirflow_core::assignment::AssignmentProblem;
use dirflow_core::controller::{ControllerKind, ControllerParams, MatchingLoop};
use dirflow_core::objectives::TiePolicy;
use dirflow_core::{Partition, StateMatrix, UndirectedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_state(seed: u64, n: usize, half_width: f64) -> StateMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..2 * n).map(|_| rng.gen_range(-half_width..half_width)).collect();
    StateMatrix::from_columns(2, data).expect("2n entries")
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn random_graph(seed: u64, n: usize, p: f64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = UndirectedGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j).expect("valid pair");
            }
        }
    }
    g
}

/// `m` minority points against `k` majority points in a 10 × 10 box.
pub fn random_assignment(seed: u64, m: usize, k: usize) -> AssignmentProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pt = || vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)];
    let minority = (0..m).map(|i| (i, pt())).collect();
    let majority = (0..k).map(|j| (m + j, pt())).collect();
    AssignmentProblem::from_points(minority, majority).expect("m <= k")
}

/// Half the agents in group A, ranges 3 and 1.5, matching-study gains.
pub fn matching_loop(n: usize) -> MatchingLoop {
    let params = ControllerParams::uniform(Partition::leading(n, n / 2), 1.2, 0.6, 0.0, 0.6).expect("positive gains");
    MatchingLoop::new(ControllerKind::Proposed, params, vec![0.9; n], 3.0, 1.5, TiePolicy::AMinority).expect("ordered ranges")
}
