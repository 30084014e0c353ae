//! `||eta_1 x_1 + eta_2 x_2 + ...||` for fixed vectors with
//! `sum ||x_i||^2 = 1` and independent bounded zero-mean `eta_i`.

use super::montecarlo::{check_samples, frequencies, simulate, TailEstimate};
use super::DiscreteZeroMeanDistribution;
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertInstance {
    vectors: Vec<Vec<f64>>,
    dists: Vec<DiscreteZeroMeanDistribution>,
}

impl HilbertInstance {
    /// Requires `sum ||x_i||^2 = 1` within `1e-12`.
    pub fn new(vectors: Vec<Vec<f64>>, dists: Vec<DiscreteZeroMeanDistribution>) -> Result<Self> {
        if vectors.is_empty() || vectors.len() != dists.len() {
            return Err(Error::Construction(format!(
                "{} vectors but {} distributions",
                vectors.len(),
                dists.len()
            )));
        }
        let d = vectors[0].len();
        if d == 0 {
            return Err(Error::Construction("vectors must have dimension >= 1".into()));
        }
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::Construction("vectors differ in dimension".into()));
        }
        if vectors.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Construction("vector entries must be finite".into()));
        }
        let total = squared_norm_sum(&vectors);
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Construction(format!("sum of squared norms is {total}, not 1")));
        }
        Ok(HilbertInstance { vectors, dists })
    }

    /// Rescales the vectors to unit total squared norm first.
    pub fn normalized(
        mut vectors: Vec<Vec<f64>>,
        dists: Vec<DiscreteZeroMeanDistribution>,
    ) -> Result<Self> {
        let total = squared_norm_sum(&vectors);
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Construction(format!("cannot normalize vectors with total {total}")));
        }
        let scale = total.sqrt();
        vectors.iter_mut().flatten().for_each(|c| *c /= scale);
        Self::new(vectors, dists)
    }

    pub fn dimension(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn terms(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn dists(&self) -> &[DiscreteZeroMeanDistribution] {
        &self.dists
    }

    fn sample_norm<R: rand::Rng + ?Sized>(&self, rng: &mut R, acc: &mut [f64]) -> f64 {
        acc.iter_mut().for_each(|c| *c = 0.0);
        for (x, d) in self.vectors.iter().zip(&self.dists) {
            let eta = d.sample(rng);
            acc.iter_mut().zip(x).for_each(|(c, xi)| *c += eta * xi);
        }
        acc.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn squared_norm_sum(vectors: &[Vec<f64>]) -> f64 {
    vectors.iter().flatten().map(|c| c * c).sum()
}

/// Monte Carlo estimates of `P(||sum eta_i x_i|| >= x)` on `xs`.
pub fn mc_hilbert_tails(
    inst: &HilbertInstance,
    xs: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<TailEstimate>> {
    check_samples(samples)?;
    let sorted = simulate(samples, seed, |rng| {
        let mut acc = vec![0.0; inst.dimension()];
        inst.sample_norm(rng, &mut acc)
    });
    frequencies(&sorted, xs)
}

pub fn mc_hilbert_tail(inst: &HilbertInstance, x: f64, samples: usize, seed: u64) -> Result<TailEstimate> {
    Ok(mc_hilbert_tails(inst, &[x], samples, seed)?[0])
}
