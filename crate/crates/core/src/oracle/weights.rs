use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients `a_i` normalized so that `sum a_i^2 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    a: Vec<f64>,
}

impl WeightVector {
    /// Rescales `raw` to unit Euclidean norm. Zero entries are allowed, an
    /// all-zero vector is not.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Construction("weight vector must be non-empty".into()));
        }
        if let Some(bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::Construction(format!("weight {bad} is not finite")));
        }
        let scale = raw.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::Construction("weight vector is identically zero".into()));
        }
        let norm = scale * raw.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt();
        let a = raw.into_iter().map(|v| v / norm).collect();
        Ok(WeightVector { a })
    }

    /// `n` equal weights `1/sqrt(n)`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum()
    }
}
