// shared proptest strategies; included from each test file
#![allow(dead_code)]

use dirflow_core::StateMatrix;
use proptest::prelude::*;

pub fn state(n: std::ops::RangeInclusive<usize>, half_width: f64) -> impl Strategy<Value = StateMatrix> {
    n.prop_flat_map(move |n| prop::collection::vec(-half_width..half_width, 2 * n))
        .prop_map(|data| StateMatrix::from_columns(2, data).unwrap())
}

pub fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
