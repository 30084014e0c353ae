#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use tailbound::oracle::{
    DifferenceRule, DiscreteZeroMeanDistribution, HilbertInstance, MartingaleSpec, TwoPointLaw,
    WeightVector,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid of `n` points spread evenly over `(0, hi]`.
pub fn open_grid(n: usize, hi: f64) -> Vec<f64> {
    (1..=n).map(|i| hi * i as f64 / n as f64).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Weights with a random spread of magnitudes, occasionally uniform.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> WeightVector {
    let raw: Vec<f64> = match rng.gen_range(0..4) {
        0 => vec![1.0; n],
        1 => (0..n).map(|_| rng.gen_range(0.01..1.0)).collect(),
        2 => (0..n).map(|_| rng.gen_range(0.0f64..1.0).powi(3) + 1e-3).collect(),
        _ => (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect(),
    };
    WeightVector::new(raw).unwrap()
}

pub fn random_two_point<R: Rng>(rng: &mut R) -> TwoPointLaw {
    let up = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(0.02..=1.0) };
    let down = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(0.02..=1.0) };
    TwoPointLaw::new(up, down).unwrap()
}

/// Zero-mean law on `[-1, 1]`: a mixture of up to three two-point laws and
/// possibly an atom at 0.
pub fn random_law<R: Rng>(rng: &mut R) -> DiscreteZeroMeanDistribution {
    let parts = rng.gen_range(1..=3);
    let zero = if rng.gen_bool(0.3) { rng.gen_range(0.05..0.5) } else { 0.0 };
    let mix: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = mix.iter().sum();
    let mut support = Vec::new();
    let mut probs = Vec::new();
    for m in mix {
        let law = random_two_point(rng);
        let w = (1.0 - zero) * m / total;
        support.push(law.up());
        probs.push(w * law.p_up());
        support.push(-law.down());
        probs.push(w * (1.0 - law.p_up()));
    }
    if zero > 0.0 {
        support.push(0.0);
        probs.push(zero);
    }
    DiscreteZeroMeanDistribution::new(support, probs).unwrap()
}

/// History-dependent martingale: a random table over the last few signs, or
/// a rule that reacts to the running count of upward steps.
pub fn random_martingale<R: Rng>(rng: &mut R, index: usize) -> MartingaleSpec {
    let n = rng.gen_range(2..=12);
    let weights = random_weights(rng, n);
    let rule = if index.is_multiple_of(2) {
        let depth = rng.gen_range(1..=3);
        let table = (0..1 << depth).map(|_| random_two_point(rng)).collect();
        DifferenceRule::LastSigns { depth, table }
    } else {
        let skew = rng.gen_range(0.05..0.9);
        DifferenceRule::Custom(Arc::new(move |step, history: &[bool]| {
            let ups = history.iter().filter(|&&u| u).count();
            if 2 * ups >= step {
                TwoPointLaw::new(skew, 1.0).unwrap()
            } else {
                TwoPointLaw::new(1.0, skew).unwrap()
            }
        }))
    };
    MartingaleSpec::new(weights, rule).unwrap()
}

pub fn random_hilbert<R: Rng>(rng: &mut R) -> HilbertInstance {
    let d = rng.gen_range(1..=8);
    let n = rng.gen_range(2..=10);
    let vectors = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let dists = (0..n).map(|_| random_law(rng)).collect();
    HilbertInstance::normalized(vectors, dists).unwrap()
}
