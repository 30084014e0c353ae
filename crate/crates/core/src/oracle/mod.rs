//! Exact and Monte Carlo tails of normalized bounded sums, used to check that
//! every bound dominates every achievable tail.
//!
//! Tail events are counted as `s >= x - ATOM_TOLERANCE` (or
//! `|s| >= x - ATOM_TOLERANCE`). The slack over-counts atoms sitting at the
//! threshold, so rounding can only make a reported tail larger.

mod convolve;
mod distribution;
mod enumerate;
mod hilbert;
mod martingale;
mod montecarlo;
mod verify;
mod weights;

use crate::error::{domain, Result};

pub use convolve::{exact_bounded_sum_tail, sum_distribution, SumDistribution, MAX_OUTCOMES, MERGE_TOLERANCE};
pub use distribution::{DiscreteZeroMeanDistribution, TwoPointLaw};
pub use enumerate::{
    exact_rademacher_tail, exact_rademacher_tail_mitm, exact_rademacher_tails,
    exact_rademacher_tails_mitm, SplitSums, MAX_DIRECT_TERMS, MAX_MITM_TERMS,
};
pub use hilbert::{mc_hilbert_tail, mc_hilbert_tails, HilbertInstance};
pub use martingale::{
    mc_martingale_tail, mc_martingale_tails, CustomRule, DifferenceRule, MartingaleSpec,
    MAX_HISTORY_DEPTH,
};
pub use montecarlo::{hoeffding_margin, substream, TailEstimate, MARGIN_DELTA, MIN_SAMPLES};
pub use verify::{
    verify_instance, verify_instance_with, BoundedSource, HilbertSource, MartingaleSource,
    RademacherSource, ReportRow, TailSource, VerificationReport, VIOLATION_SLACK,
};
pub use weights::WeightVector;

/// Slack subtracted from `x` when counting tail outcomes.
pub const ATOM_TOLERANCE: f64 = 1e-9;

pub(crate) fn threshold(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x - ATOM_TOLERANCE)
    } else {
        Err(domain(format!("tail threshold must be finite, got {x}")))
    }
}
