//! Seeded, thread-count independent Monte Carlo plumbing.
//!
//! Samples are cut into fixed-size chunks; chunk `c` draws from ChaCha8
//! seeded with the run seed on stream `c`. Chunk results are concatenated in
//! chunk order, so estimates depend only on `(seed, samples)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::threshold;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 10_000;

/// Confidence parameter of the one-sided Hoeffding margin.
pub const MARGIN_DELTA: f64 = 1e-6;

const CHUNK: usize = 1 << 14;

/// A tail probability with a one-sided allowance (0 for exact values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub value: f64,
    pub margin: f64,
}

impl TailEstimate {
    pub fn exact(value: f64) -> Self {
        TailEstimate { value, margin: 0.0 }
    }
}

/// `sqrt(ln(1/delta) / (2 samples))` at `delta = 1e-6`.
pub fn hoeffding_margin(samples: usize) -> f64 {
    ((1.0 / MARGIN_DELTA).ln() / (2.0 * samples as f64)).sqrt()
}

pub(crate) fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::Usage(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

/// Generator for chunk `stream` of a run seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `samples` values of `draw`, sorted ascending.
pub(crate) fn simulate<F>(samples: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let mut values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = substream(seed, c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect();
    values.par_sort_unstable_by(f64::total_cmp);
    values
}

/// Empirical frequencies of `value >= x - ATOM_TOLERANCE` over sorted draws.
pub(crate) fn frequencies(sorted: &[f64], xs: &[f64]) -> Result<Vec<TailEstimate>> {
    let margin = hoeffding_margin(sorted.len());
    xs.iter()
        .map(|&x| {
            let t = threshold(x)?;
            let hits = sorted.len() - sorted.partition_point(|&v| v < t);
            Ok(TailEstimate {
                value: hits as f64 / sorted.len() as f64,
                margin,
            })
        })
        .collect()
}
