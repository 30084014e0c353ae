//! Exact law of `sum a_i eta_i` for independent finite-support `eta_i`, by
//! iterated sparse convolution.

use super::{threshold, DiscreteZeroMeanDistribution, WeightVector};
use crate::error::{Error, Result};

/// Upper limit on the product of support sizes.
pub const MAX_OUTCOMES: u64 = 10_000_000;

/// Atoms closer than this are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Atoms `(value, probability)` sorted by value.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDistribution {
    atoms: Vec<(f64, f64)>,
}

impl SumDistribution {
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn tail(&self, x: f64, two_sided: bool) -> Result<f64> {
        let t = threshold(x)?;
        let mass: f64 = self
            .atoms
            .iter()
            .filter(|(v, _)| if two_sided { v.abs() >= t } else { *v >= t })
            .map(|(_, p)| p)
            .sum();
        Ok(mass.clamp(0.0, 1.0))
    }
}

fn merge(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    let mut anchor = f64::NEG_INFINITY;
    for (v, p) in atoms {
        match merged.last_mut() {
            Some(last) if v - anchor <= MERGE_TOLERANCE => {
                let mass = last.1 + p;
                if mass > 0.0 {
                    last.0 = (last.0 * last.1 + v * p) / mass;
                }
                last.1 = mass;
            }
            _ => {
                anchor = v;
                merged.push((v, p));
            }
        }
    }
    let total: f64 = merged.iter().map(|(_, p)| p).sum();
    if total > 0.0 {
        merged.iter_mut().for_each(|(_, p)| *p /= total);
    }
    merged
}

/// Distribution of `sum a_i eta_i`.
pub fn sum_distribution(
    w: &WeightVector,
    dists: &[DiscreteZeroMeanDistribution],
) -> Result<SumDistribution> {
    if dists.len() != w.len() {
        return Err(Error::Construction(format!(
            "{} weights but {} distributions",
            w.len(),
            dists.len()
        )));
    }
    let outcomes = dists
        .iter()
        .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64).filter(|&n| n <= MAX_OUTCOMES));
    if outcomes.is_none() {
        return Err(Error::Capacity(format!(
            "product of support sizes exceeds {MAX_OUTCOMES}"
        )));
    }
    let mut atoms = vec![(0.0, 1.0)];
    for (&a, d) in w.as_slice().iter().zip(dists) {
        let mut next = Vec::with_capacity(atoms.len() * d.len());
        for &(s, p) in &atoms {
            for (&v, &q) in d.support().iter().zip(d.probs()) {
                if q > 0.0 {
                    next.push((s + a * v, p * q));
                }
            }
        }
        atoms = merge(next);
    }
    Ok(SumDistribution { atoms })
}

/// Exact `P(S >= x)` (or `P(|S| >= x)`).
pub fn exact_bounded_sum_tail(
    w: &WeightVector,
    dists: &[DiscreteZeroMeanDistribution],
    x: f64,
    two_sided: bool,
) -> Result<f64> {
    sum_distribution(w, dists)?.tail(x, two_sided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_rademacher_tail;

    #[test]
    fn asymmetric_single_variable() {
        let w = WeightVector::new(vec![1.0]).unwrap();
        let d = DiscreteZeroMeanDistribution::new(vec![-1.0, 1.0 / 3.0], vec![0.25, 0.75]).unwrap();
        let got = exact_bounded_sum_tail(&w, &[d], 1.0 / 3.0, false).unwrap();
        assert!((got - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn reduces_to_rademacher() {
        let w = WeightVector::new(vec![0.7, 0.2, 0.5, 0.1, 0.45]).unwrap();
        let dists = vec![DiscreteZeroMeanDistribution::rademacher(); 5];
        for x in [0.01, 0.3, 0.77, 1.2, 1.9] {
            for two_sided in [false, true] {
                let conv = exact_bounded_sum_tail(&w, &dists, x, two_sided).unwrap();
                let enumd = exact_rademacher_tail(&w, x, two_sided).unwrap();
                assert!((conv - enumd).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn mass_and_mean_preserved() {
        let w = WeightVector::new(vec![1.0, 2.0, 0.5]).unwrap();
        let d = DiscreteZeroMeanDistribution::new(vec![-0.5, 0.0, 1.0], vec![0.4, 0.4, 0.2]).unwrap();
        let sum = sum_distribution(&w, &[d.clone(), d.clone(), d]).unwrap();
        let mass: f64 = sum.atoms().iter().map(|a| a.1).sum();
        let mean: f64 = sum.atoms().iter().map(|a| a.0 * a.1).sum();
        assert!((mass - 1.0).abs() <= 1e-14);
        assert!(mean.abs() <= 1e-14);
        assert!(sum.atoms().windows(2).all(|p| p[1].0 - p[0].0 > MERGE_TOLERANCE));
        assert!(sum.tail(1e-9, false).unwrap() <= 1.0);
    }

    #[test]
    fn errors() {
        let w = WeightVector::uniform(2).unwrap();
        let r = DiscreteZeroMeanDistribution::rademacher();
        assert!(matches!(
            exact_bounded_sum_tail(&w, std::slice::from_ref(&r), 0.5, false),
            Err(Error::Construction(_))
        ));
        let wide = DiscreteZeroMeanDistribution::new(
            (0..11).map(|i| -1.0 + 0.2 * i as f64).collect(),
            vec![1.0 / 11.0; 11],
        )
        .unwrap();
        let w = WeightVector::uniform(7).unwrap();
        assert!(matches!(
            exact_bounded_sum_tail(&w, &vec![wide; 7], 0.5, false),
            Err(Error::Capacity(_))
        ));
    }
}
