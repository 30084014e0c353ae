//! Martingales `S_k = X_1 + ... + X_k` whose differences `X_i = a_i eta_i`
//! follow a two-point zero-mean law picked from the realized history, so that
//! `sum ess sup |X_i|^2 <= sum a_i^2 = 1`.

use std::fmt;
use std::sync::Arc;

use super::montecarlo::{check_samples, frequencies, simulate, TailEstimate};
use super::{TwoPointLaw, WeightVector};
use crate::error::{Error, Result};

/// Largest history window accepted by [`DifferenceRule::LastSigns`].
pub const MAX_HISTORY_DEPTH: usize = 16;

pub type CustomRule = Arc<dyn Fn(usize, &[bool]) -> TwoPointLaw + Send + Sync>;

/// How the law of step `i` depends on the realized signs `history[..i]`
/// (`true` for the upward value).
#[derive(Clone)]
pub enum DifferenceRule {
    /// One law per step, ignoring the past.
    Independent(Vec<TwoPointLaw>),
    /// Law chosen by the last `depth` signs. Bit `j` of the table index is
    /// set when the step `j + 1` places back went up; steps before the start
    /// read as down.
    LastSigns { depth: usize, table: Vec<TwoPointLaw> },
    Custom(CustomRule),
}

impl fmt::Debug for DifferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DifferenceRule::Independent(laws) => f.debug_tuple("Independent").field(laws).finish(),
            DifferenceRule::LastSigns { depth, table } => f
                .debug_struct("LastSigns")
                .field("depth", depth)
                .field("table", table)
                .finish(),
            DifferenceRule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MartingaleSpec {
    a: WeightVector,
    rule: DifferenceRule,
}

impl MartingaleSpec {
    pub fn new(a: WeightVector, rule: DifferenceRule) -> Result<Self> {
        match &rule {
            DifferenceRule::Independent(laws) if laws.len() != a.len() => {
                return Err(Error::Construction(format!(
                    "{} steps but {} independent laws",
                    a.len(),
                    laws.len()
                )));
            }
            DifferenceRule::LastSigns { depth, table } => {
                if *depth > MAX_HISTORY_DEPTH {
                    return Err(Error::Construction(format!(
                        "history depth {depth} exceeds {MAX_HISTORY_DEPTH}"
                    )));
                }
                if table.len() != 1 << depth {
                    return Err(Error::Construction(format!(
                        "depth {depth} needs {} laws, got {}",
                        1usize << depth,
                        table.len()
                    )));
                }
            }
            _ => {}
        }
        Ok(MartingaleSpec { a, rule })
    }

    pub fn steps(&self) -> usize {
        self.a.len()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.a
    }

    pub fn rule(&self) -> &DifferenceRule {
        &self.rule
    }

    /// Law of step `step` given the realized signs before it.
    pub fn law(&self, step: usize, history: &[bool]) -> TwoPointLaw {
        match &self.rule {
            DifferenceRule::Independent(laws) => laws[step],
            DifferenceRule::LastSigns { depth, table } => {
                let key = history
                    .iter()
                    .rev()
                    .take(*depth)
                    .enumerate()
                    .fold(0usize, |k, (j, &up)| k | (usize::from(up) << j));
                table[key]
            }
            DifferenceRule::Custom(rule) => rule(step, history),
        }
    }

    /// One path; returns `S_n`.
    pub fn sample_path<R: rand::Rng + ?Sized>(&self, rng: &mut R, history: &mut Vec<bool>) -> f64 {
        history.clear();
        let mut s = 0.0;
        for (i, &ai) in self.a.as_slice().iter().enumerate() {
            let (eta, up) = self.law(i, history).sample(rng);
            s += ai * eta;
            history.push(up);
        }
        s
    }
}

/// Monte Carlo estimates of `P(S_n >= x)` (or `P(|S_n| >= x)`) on `xs`,
/// sharing one batch of `samples` paths.
pub fn mc_martingale_tails(
    spec: &MartingaleSpec,
    xs: &[f64],
    samples: usize,
    seed: u64,
    two_sided: bool,
) -> Result<Vec<TailEstimate>> {
    check_samples(samples)?;
    let sorted = simulate(samples, seed, |rng| {
        let mut history = Vec::with_capacity(spec.steps());
        let s = spec.sample_path(rng, &mut history);
        if two_sided {
            s.abs()
        } else {
            s
        }
    });
    frequencies(&sorted, xs)
}

pub fn mc_martingale_tail(
    spec: &MartingaleSpec,
    x: f64,
    samples: usize,
    seed: u64,
    two_sided: bool,
) -> Result<TailEstimate> {
    Ok(mc_martingale_tails(spec, &[x], samples, seed, two_sided)?[0])
}
