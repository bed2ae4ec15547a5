use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ u_i = 1` for a point to count as on the simplex.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Species densities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if u.len() < 2 {
            return Err(Error::NotOnSimplex(format!(
                "need at least 2 coordinates, got {}",
                u.len()
            )));
        }
        if let Some((i, v)) = u
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0 || **v > 1.0)
        {
            return Err(Error::NotOnSimplex(format!(
                "u{} = {v} outside [0, 1]",
                i + 1
            )));
        }
        let sum: f64 = u.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::NotOnSimplex(format!("coordinates sum to {sum}")));
        }
        Ok(SimplexPoint(u))
    }

    /// Rescales a nonnegative vector with positive sum onto the simplex.
    pub fn normalized(mut u: Vec<f64>) -> Result<Self> {
        let sum: f64 = u.iter().sum();
        if !(sum > 0.0) || u.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::NotOnSimplex(
                "cannot normalize a vector with negative or zero mass".into(),
            ));
        }
        u.iter_mut().for_each(|v| *v /= sum);
        Self::new(u)
    }

    /// The vertex `e_i`: only species `i` present.
    pub fn vertex(n: usize, i: usize) -> Self {
        let mut u = vec![0.0; n];
        u[i] = 1.0;
        SimplexPoint(u)
    }

    pub fn uniform(n: usize) -> Self {
        SimplexPoint(vec![1.0 / n as f64; n])
    }

    /// Builds a point from raw coordinates already known to lie on the simplex.
    pub(crate) fn from_raw(u: Vec<f64>) -> Self {
        debug_assert!((u.iter().sum::<f64>() - 1.0).abs() <= 1e-6);
        SimplexPoint(u)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Deref for SimplexPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SimplexPoint {
    type Error = Error;

    fn try_from(u: Vec<f64>) -> Result<Self> {
        SimplexPoint::new(u)
    }
}

impl From<SimplexPoint> for Vec<f64> {
    fn from(p: SimplexPoint) -> Self {
        p.0
    }
}
