//! Optimal one-to-one assignment from a minority point set into a majority
//! point set, minimising the sum of squared distances.
//!
//! Minimising the sum of squares is the same as minimising the stacked
//! Euclidean norm, so no square roots are taken.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{squared_distance, StateMatrix};

/// Largest minority size accepted by [`solve_brute_force`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// [`solve`] uses brute force when minority + majority is at most this.
pub const BRUTE_FORCE_GROUP_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    minority: Vec<usize>,
    majority: Vec<usize>,
    /// Row-major `minority.len() × majority.len()` squared distances.
    cost: Vec<f64>,
}

impl AssignmentProblem {
    /// Builds the problem from agent columns of `x`. Ids are sorted ascending.
    pub fn from_state(x: &StateMatrix, minority: &[usize], majority: &[usize]) -> Result<Self> {
        let mut minority = minority.to_vec();
        let mut majority = majority.to_vec();
        minority.sort_unstable();
        majority.sort_unstable();
        for &id in minority.iter().chain(&majority) {
            if id >= x.n() {
                return Err(Error::NodeOutOfRange { index: id, n: x.n() });
            }
        }
        Self::check_ids(&minority, &majority)?;
        let cost = minority
            .iter()
            .flat_map(|&i| majority.iter().map(move |&j| squared_distance(x.col(i), x.col(j))))
            .collect();
        Ok(Self { minority, majority, cost })
    }

    /// Builds the problem from explicit `(id, point)` lists.
    pub fn from_points(mut minority: Vec<(usize, Vec<f64>)>, mut majority: Vec<(usize, Vec<f64>)>) -> Result<Self> {
        minority.sort_by_key(|p| p.0);
        majority.sort_by_key(|p| p.0);
        let min_ids: Vec<usize> = minority.iter().map(|p| p.0).collect();
        let maj_ids: Vec<usize> = majority.iter().map(|p| p.0).collect();
        Self::check_ids(&min_ids, &maj_ids)?;
        let mut cost = Vec::with_capacity(minority.len() * majority.len());
        for (_, a) in &minority {
            for (_, b) in &majority {
                if a.len() != b.len() {
                    return Err(Error::Dimension("assignment points of different dimension".into()));
                }
                cost.push(squared_distance(a, b));
            }
        }
        Ok(Self { minority: min_ids, majority: maj_ids, cost })
    }

    fn check_ids(minority: &[usize], majority: &[usize]) -> Result<()> {
        if minority.len() > majority.len() {
            return Err(Error::AssignmentShape { minority: minority.len(), majority: majority.len() });
        }
        let mut all: Vec<usize> = minority.iter().chain(majority).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("assignment ids must be distinct".into()));
        }
        Ok(())
    }

    pub fn minority(&self) -> &[usize] {
        &self.minority
    }

    pub fn majority(&self) -> &[usize] {
        &self.majority
    }

    #[inline]
    pub fn cost(&self, row: usize, col: usize) -> f64 {
        self.cost[row * self.majority.len() + col]
    }

    fn map_from_columns(&self, cols: &[usize]) -> AssignmentMap {
        let pairs: Vec<(usize, usize)> = cols.iter().enumerate().map(|(r, &c)| (self.minority[r], self.majority[c])).collect();
        let cost = cols.iter().enumerate().map(|(r, &c)| self.cost(r, c)).sum();
        AssignmentMap { pairs, cost }
    }
}

/// Injective map minority id → majority id, with its total squared cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentMap {
    /// Sorted by minority id.
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

impl AssignmentMap {
    pub fn partner_of(&self, minority: usize) -> Option<usize> {
        self.pairs.binary_search_by_key(&minority, |p| p.0).ok().map(|k| self.pairs[k].1)
    }

    pub fn preimage_of(&self, majority: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.1 == majority).map(|p| p.0)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Exhaustive search over all injections.
///
/// Injections are visited in lexicographic order (minority ascending, majority
/// ascending) and only strict improvements replace the incumbent, so among
/// exact-cost ties the lexicographically smallest map wins.
pub fn solve_brute_force(p: &AssignmentProblem) -> Result<AssignmentMap> {
    let rows = p.minority.len();
    if rows > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceLimit { got: rows, limit: BRUTE_FORCE_LIMIT });
    }
    struct Search<'a> {
        p: &'a AssignmentProblem,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_cost: f64,
    }
    impl Search<'_> {
        fn dfs(&mut self, row: usize, partial: f64) {
            if partial >= self.best_cost {
                return;
            }
            if row == self.p.minority.len() {
                self.best_cost = partial;
                self.best.clone_from(&self.current);
                return;
            }
            for col in 0..self.p.majority.len() {
                if self.used[col] {
                    continue;
                }
                self.used[col] = true;
                self.current.push(col);
                self.dfs(row + 1, partial + self.p.cost(row, col));
                self.current.pop();
                self.used[col] = false;
            }
        }
    }
    let mut s = Search { p, used: vec![false; p.majority.len()], current: Vec::with_capacity(rows), best: Vec::new(), best_cost: f64::INFINITY };
    s.dfs(0, 0.0);
    Ok(p.map_from_columns(&s.best))
}

/// Rectangular Hungarian algorithm (shortest augmenting paths with
/// potentials), `O(rows² · cols)`.
///
/// Returns an optimal map; under exact cost ties it may differ from the
/// brute-force choice.
pub fn solve_hungarian(p: &AssignmentProblem) -> AssignmentMap {
    let rows = p.minority.len();
    let cols = p.majority.len();
    if rows == 0 {
        return AssignmentMap { pairs: Vec::new(), cost: 0.0 };
    }
    // 1-based arrays; column 0 is the virtual root.
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for row in 1..=rows {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let reduced = p.cost(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut cols_of_row = vec![0usize; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            cols_of_row[owner[j] - 1] = j - 1;
        }
    }
    p.map_from_columns(&cols_of_row)
}

/// Brute force for small groups (minority + majority ≤ 8), Hungarian above.
pub fn solve(p: &AssignmentProblem) -> AssignmentMap {
    if p.minority.len() + p.majority.len() <= BRUTE_FORCE_GROUP_SIZE {
        solve_brute_force(p).expect("small problems are within the brute-force limit")
    } else {
        solve_hungarian(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(usize, &[f64])]) -> Vec<(usize, Vec<f64>)> {
        v.iter().map(|(i, p)| (*i, p.to_vec())).collect()
    }

    #[test]
    fn single_minority_picks_nearest_then_smallest_id() {
        let p = AssignmentProblem::from_points(pts(&[(0, &[0.0])]), pts(&[(3, &[2.0]), (1, &[-1.0]), (2, &[1.0])])).unwrap();
        let m = solve_brute_force(&p).unwrap();
        // ids 1 and 2 are both at distance 1; the smaller id wins
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.cost, 1.0);
    }

    #[test]
    fn co_located_pairs_cost_zero() {
        let x = StateMatrix::from_points(&[[0.0, 0.0], [5.0, 5.0], [9.0, 9.0], [5.0, 5.0], [0.0, 0.0]]).unwrap();
        let p = AssignmentProblem::from_state(&x, &[0, 1], &[2, 3, 4]).unwrap();
        let m = solve_brute_force(&p).unwrap();
        assert_eq!(m.pairs, vec![(0, 4), (1, 3)]);
        assert_eq!(m.cost, 0.0);
        assert_eq!(solve_hungarian(&p).pairs, m.pairs);
        assert_eq!(m.partner_of(1), Some(3));
        assert_eq!(m.preimage_of(4), Some(0));
        assert_eq!(m.preimage_of(2), None);
    }

    #[test]
    fn empty_minority() {
        let p = AssignmentProblem::from_points(vec![], pts(&[(1, &[0.0]), (2, &[1.0])])).unwrap();
        assert!(solve_hungarian(&p).is_empty());
        assert_eq!(solve_brute_force(&p).unwrap().cost, 0.0);
    }

    #[test]
    fn shape_and_size_guards() {
        assert!(matches!(
            AssignmentProblem::from_points(pts(&[(0, &[0.0]), (1, &[0.0])]), pts(&[(2, &[0.0])])),
            Err(Error::AssignmentShape { minority: 2, majority: 1 })
        ));
        let x = StateMatrix::zeros(1, 20);
        let p = AssignmentProblem::from_state(&x, &(0..9).collect::<Vec<_>>(), &(9..20).collect::<Vec<_>>()).unwrap();
        assert!(matches!(solve_brute_force(&p), Err(Error::BruteForceLimit { got: 9, .. })));
        assert!(AssignmentProblem::from_state(&x, &[0], &[0, 1]).is_err());
    }

    #[test]
    fn hungarian_beats_greedy() {
        // row-greedy takes 0→2 (0.81) and leaves 1→3 (4.0); optimum is 0→3, 1→2
        let p = AssignmentProblem::from_points(pts(&[(0, &[0.0]), (1, &[1.0])]), pts(&[(2, &[0.9]), (3, &[-1.0])])).unwrap();
        let bf = solve_brute_force(&p).unwrap();
        let hu = solve_hungarian(&p);
        assert_eq!(bf.cost, hu.cost);
        assert_eq!(bf.pairs, hu.pairs);
        assert_eq!(bf.pairs, vec![(0, 3), (1, 2)]);
    }
}
