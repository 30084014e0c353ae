//! Exact tails of Rademacher sums `a_1 e_1 + ... + a_n e_n`.
//!
//! The direct path walks all `2^n` sign patterns. The meet-in-the-middle
//! path splits the indices in two halves, sorts the `2^(n/2)` half-sums of
//! each, and counts qualifying pairs with two pointers. Both count outcomes
//! with `s >= x - ATOM_TOLERANCE`.

use rayon::prelude::*;

use super::{threshold, WeightVector};
use crate::error::{Error, Result};

pub const MAX_DIRECT_TERMS: usize = 25;
pub const MAX_MITM_TERMS: usize = 46;

const CHUNK: u64 = 1 << 14;

fn check_capacity(w: &WeightVector, limit: usize, path: &str) -> Result<()> {
    if w.len() > limit {
        let hint = if limit == MAX_DIRECT_TERMS {
            "; use the meet-in-the-middle enumeration"
        } else {
            ""
        };
        return Err(Error::Capacity(format!(
            "{path} enumeration supports at most {limit} terms, got {}{hint}",
            w.len()
        )));
    }
    Ok(())
}

fn pattern_sum(a: &[f64], mask: u64) -> f64 {
    let mut s = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        if mask >> i & 1 == 1 {
            s += ai;
        } else {
            s -= ai;
        }
    }
    s
}

/// `P(S >= x)` (or `P(|S| >= x)`) by walking every sign pattern.
pub fn exact_rademacher_tail(w: &WeightVector, x: f64, two_sided: bool) -> Result<f64> {
    Ok(exact_rademacher_tails(w, &[x], two_sided)?[0])
}

/// Direct enumeration answering every point of `xs` in one pass.
pub fn exact_rademacher_tails(w: &WeightVector, xs: &[f64], two_sided: bool) -> Result<Vec<f64>> {
    check_capacity(w, MAX_DIRECT_TERMS, "direct")?;
    let thresholds = xs.iter().map(|&x| threshold(x)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| thresholds[i].total_cmp(&thresholds[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| thresholds[i]).collect();

    let a = w.as_slice();
    let total = 1u64 << a.len();
    let chunks = total.div_ceil(CHUNK);
    // hits[k] counts outcomes clearing exactly the k smallest thresholds
    let hits = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; sorted.len() + 1];
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let s = pattern_sum(a, mask);
                let v = if two_sided { s.abs() } else { s };
                local[sorted.partition_point(|&t| t <= v)] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; sorted.len() + 1],
            |mut acc, local| {
                acc.iter_mut().zip(local).for_each(|(a, b)| *a += b);
                acc
            },
        );

    // outcomes clearing threshold k are those with index > k
    let mut out = vec![0.0; xs.len()];
    let mut above: u64 = hits.iter().sum();
    for (k, &orig) in order.iter().enumerate() {
        above -= hits[k];
        out[orig] = above as f64 / total as f64;
    }
    Ok(out)
}

/// All `2^m` signed sums of `a`, accumulated in index order.
fn half_sums(a: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0];
    for &ai in a {
        let mut next = Vec::with_capacity(sums.len() * 2);
        next.extend(sums.iter().map(|s| s - ai));
        next.extend(sums.iter().map(|s| s + ai));
        sums = next;
    }
    sums
}

/// Sorted half-sums, reusable across thresholds.
#[derive(Debug, Clone)]
pub struct SplitSums {
    left: Vec<f64>,
    right: Vec<f64>,
    terms: usize,
}

impl SplitSums {
    pub fn new(w: &WeightVector) -> Result<Self> {
        check_capacity(w, MAX_MITM_TERMS, "meet-in-the-middle")?;
        let a = w.as_slice();
        let (l, r) = a.split_at(a.len() / 2);
        let mut left = half_sums(l);
        let mut right = half_sums(r);
        left.par_sort_unstable_by(f64::total_cmp);
        right.par_sort_unstable_by(f64::total_cmp);
        Ok(SplitSums {
            left,
            right,
            terms: a.len(),
        })
    }

    /// Pairs with `l + r >= t`.
    fn count_at_least(&self, t: f64) -> u64 {
        let mut j = self.right.len();
        let mut count = 0u64;
        for &l in &self.left {
            while j > 0 && l + self.right[j - 1] >= t {
                j -= 1;
            }
            count += (self.right.len() - j) as u64;
        }
        count
    }

    /// Pairs with `l + r <= t`.
    fn count_at_most(&self, t: f64) -> u64 {
        let mut k = self.right.len();
        let mut count = 0u64;
        for &l in &self.left {
            while k > 0 && l + self.right[k - 1] > t {
                k -= 1;
            }
            count += k as u64;
        }
        count
    }

    pub fn tail(&self, x: f64, two_sided: bool) -> Result<f64> {
        let t = threshold(x)?;
        let total = (self.left.len() as u64) * (self.right.len() as u64);
        let count = if !two_sided {
            self.count_at_least(t)
        } else if t <= 0.0 {
            total
        } else {
            self.count_at_least(t) + self.count_at_most(-t)
        };
        Ok(count as f64 / (2.0_f64).powi(self.terms as i32))
    }
}

/// Same quantity as [`exact_rademacher_tail`], by meet-in-the-middle.
pub fn exact_rademacher_tail_mitm(w: &WeightVector, x: f64, two_sided: bool) -> Result<f64> {
    SplitSums::new(w)?.tail(x, two_sided)
}

pub fn exact_rademacher_tails_mitm(w: &WeightVector, xs: &[f64], two_sided: bool) -> Result<Vec<f64>> {
    let split = SplitSums::new(w)?;
    xs.iter().map(|&x| split.tail(x, two_sided)).collect()
}
