use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The stacked agent state `[x_1, ..., x_n]`, one column of length `dim` per
/// agent, stored column-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl StateMatrix {
    pub fn zeros(dim: usize, n: usize) -> Self {
        assert!(dim >= 1, "state dimension must be at least 1");
        Self { dim, data: vec![0.0; dim * n] }
    }

    /// Builds a state from column-major data (`data.len()` must be a multiple of `dim`).
    pub fn from_columns(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::Dimension(format!(
                "{} values cannot be split into columns of length {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Builds a state from one point per agent.
    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::Dimension("empty point list or zero-length point".into()));
        }
        let mut data = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::Dimension(format!("point {i} has length {} instead of {dim}", p.len())));
            }
            data.extend_from_slice(p);
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.data.len() / self.dim
    }

    #[inline]
    pub fn col(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn col_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.col(i), self.col(j))
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &StateMatrix) -> StateMatrix {
        debug_assert_eq!(self.data.len(), other.data.len());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + scale * b).collect();
        StateMatrix { dim: self.dim, data }
    }

    pub fn same_shape(&self, other: &StateMatrix) -> bool {
        self.dim == other.dim && self.data.len() == other.data.len()
    }
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}
