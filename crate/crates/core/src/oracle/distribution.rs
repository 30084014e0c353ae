use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

const MASS_TOLERANCE: f64 = 1e-12;

/// A zero-mean law on finitely many points of `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteZeroMeanDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl DiscreteZeroMeanDistribution {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::Construction(format!(
                "support ({}) and probabilities ({}) must be non-empty and of equal length",
                support.len(),
                probs.len()
            )));
        }
        if let Some(v) = support.iter().find(|v| v.is_nan() || v.abs() > 1.0) {
            return Err(Error::Construction(format!("support point {v} lies outside [-1, 1]")));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::Construction(format!("probability {p} is not a nonnegative number")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Construction(format!("probabilities sum to {total}, not 1")));
        }
        let mean: f64 = support.iter().zip(&probs).map(|(v, p)| v * p).sum();
        if mean.abs() > MASS_TOLERANCE {
            return Err(Error::Construction(format!("mean is {mean:e}, not 0")));
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(DiscreteZeroMeanDistribution {
            support,
            probs,
            cumulative,
        })
    }

    /// Random sign: `+-1` with probability 1/2 each.
    pub fn rademacher() -> Self {
        Self::new(vec![-1.0, 1.0], vec![0.5, 0.5]).expect("valid law")
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let total = *self.cumulative.last().unwrap_or(&1.0);
        let target = u * total;
        let i = self.cumulative.partition_point(|&c| c <= target);
        self.support[i.min(self.support.len() - 1)]
    }
}

/// Two-point zero-mean law on `{+up, -down}`, `up, down in (0, 1]`, with
/// `P(+up) = down / (up + down)` so that `up P(+up) = down P(-down)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointLaw {
    up: f64,
    down: f64,
}

impl TwoPointLaw {
    pub fn new(up: f64, down: f64) -> Result<Self> {
        for (name, v) in [("up", up), ("down", down)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Construction(format!("two-point law: {name} = {v} not in (0, 1]")));
            }
        }
        Ok(TwoPointLaw { up, down })
    }

    pub fn rademacher() -> Self {
        TwoPointLaw { up: 1.0, down: 1.0 }
    }

    pub fn up(&self) -> f64 {
        self.up
    }

    pub fn down(&self) -> f64 {
        self.down
    }

    pub fn p_up(&self) -> f64 {
        self.down / (self.up + self.down)
    }

    /// Draws a value and reports whether it was the upward one.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, bool) {
        let u: f64 = rng.gen();
        if u < self.p_up() {
            (self.up, true)
        } else {
            (-self.down, false)
        }
    }

    pub fn to_distribution(&self) -> DiscreteZeroMeanDistribution {
        let p = self.p_up();
        DiscreteZeroMeanDistribution::new(vec![-self.down, self.up], vec![1.0 - p, p])
            .expect("two-point law is zero-mean by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(DiscreteZeroMeanDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]).is_ok());
        assert!(DiscreteZeroMeanDistribution::new(vec![-1.0, 1.0], vec![0.4, 0.6]).is_err());
        assert!(DiscreteZeroMeanDistribution::new(vec![-2.0, 2.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteZeroMeanDistribution::new(vec![0.0], vec![0.9]).is_err());
        assert!(DiscreteZeroMeanDistribution::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(DiscreteZeroMeanDistribution::new(vec![-1.0, 1.0], vec![1.5, -0.5]).is_err());
        assert!(DiscreteZeroMeanDistribution::new(vec![0.0], vec![1.0]).is_ok());
        let d = DiscreteZeroMeanDistribution::new(vec![-1.0, 1.0 / 3.0], vec![0.25, 0.75]).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn two_point_is_zero_mean() {
        for (u, v) in [(1.0, 1.0), (0.2, 1.0), (1.0, 0.05), (0.7, 0.3)] {
            let law = TwoPointLaw::new(u, v).unwrap();
            let p = law.p_up();
            assert!((u * p - v * (1.0 - p)).abs() <= 1e-15);
            law.to_distribution();
        }
        assert!(TwoPointLaw::new(0.0, 1.0).is_err());
        assert!(TwoPointLaw::new(1.0, 1.5).is_err());
        assert!(TwoPointLaw::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn sampling_frequencies() {
        let d = DiscreteZeroMeanDistribution::new(vec![-1.0, 0.0, 0.5], vec![0.2, 0.4, 0.4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let v = d.sample(&mut rng);
            counts[d.support().iter().position(|&s| s == v).unwrap()] += 1;
        }
        for (c, p) in counts.iter().zip(d.probs()) {
            assert!((*c as f64 / n as f64 - p).abs() < 0.01);
        }
    }
}
