//! Shape classification of a sampled function.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on consecutive differences (log scale where positive).
pub const DIFF_TOLERANCE: f64 = 1e-12;

pub const MIN_GRID_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    Decreasing,
    Increasing,
    /// Increasing, then decreasing.
    UpDown,
    Other,
}

impl Pattern {
    pub fn symbol(self) -> &'static str {
        match self {
            Pattern::Decreasing => "↘",
            Pattern::Increasing => "↗",
            Pattern::UpDown => "↗↘",
            Pattern::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternReport {
    pub pattern: Pattern,
    /// Location of the maximum for an up-down shape.
    pub switch_point: Option<f64>,
    /// Largest difference running against the best-fitting up-down shape,
    /// whether or not it exceeds the tolerance.
    pub max_violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Sample points strictly inside an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    /// Interior grid of `(lo, hi)`; log-spaced when `lo > 0`.
    pub fn open(lo: f64, hi: f64, points: usize) -> Self {
        let spacing = if lo > 0.0 { Spacing::Log } else { Spacing::Linear };
        Grid { lo, hi, points, spacing }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.points;
        let step = |i: usize| (i + 1) as f64 / (n + 1) as f64;
        match self.spacing {
            Spacing::Linear => (0..n).map(|i| self.lo + (self.hi - self.lo) * step(i)).collect(),
            Spacing::Log => {
                let (a, b) = (self.lo.ln(), self.hi.ln());
                (0..n).map(|i| (a + (b - a) * step(i)).exp()).collect()
            }
        }
    }
}

fn difference(prev: f64, next: f64) -> f64 {
    if prev > 0.0 && next > 0.0 {
        let ratio = next / prev;
        if ratio.is_finite() && ratio > 0.0 {
            return ratio.ln();
        }
        return next.ln() - prev.ln();
    }
    next - prev
}

/// Evaluates `func` on `grid` in parallel, keeping grid order.
pub fn sample(func: &(dyn Fn(f64) -> f64 + Sync), grid: &Grid) -> Result<Vec<(f64, f64)>> {
    grid.points()
        .into_par_iter()
        .map(|x| {
            let v = func(x);
            if v.is_finite() {
                Ok((x, v))
            } else {
                Err(Error::Evaluation { x, value: v })
            }
        })
        .collect()
}

/// Classifies `func` on `grid` as decreasing, increasing, up-down or other.
pub fn check_pattern(func: &(dyn Fn(f64) -> f64 + Sync), grid: &Grid) -> Result<PatternReport> {
    if grid.points < MIN_GRID_SIZE {
        return Err(Error::Usage(format!(
            "pattern check needs at least {MIN_GRID_SIZE} grid points, got {}",
            grid.points
        )));
    }
    let samples = sample(func, grid)?;
    let mut peak = 0;
    for (i, &(_, v)) in samples.iter().enumerate() {
        if v > samples[peak].1 {
            peak = i;
        }
    }
    let (mut ups, mut downs) = (0usize, 0usize);
    let mut worst = 0.0_f64;
    let mut exceeded = false;
    for (i, pair) in samples.windows(2).enumerate() {
        let d = difference(pair[0].1, pair[1].1);
        let against = if i < peak { -d } else { d };
        worst = worst.max(against);
        if against > DIFF_TOLERANCE {
            exceeded = true;
        }
        if d > DIFF_TOLERANCE {
            ups += 1;
        } else if d < -DIFF_TOLERANCE {
            downs += 1;
        }
    }
    let pattern = if exceeded {
        Pattern::Other
    } else {
        match (ups > 0, downs > 0) {
            (false, true) => Pattern::Decreasing,
            (true, false) => Pattern::Increasing,
            (true, true) => Pattern::UpDown,
            (false, false) => Pattern::Other,
        }
    };
    let switch_point = (pattern == Pattern::UpDown).then(|| {
        let lo = samples[peak - 1].0;
        let hi = samples[(peak + 1).min(samples.len() - 1)].0;
        refine_maximum(func, lo, hi)
    });
    Ok(PatternReport {
        pattern,
        switch_point,
        max_violation: worst,
    })
}

/// Golden-section search for the maximiser of a unimodal function on `[lo, hi]`.
fn refine_maximum(func: &(dyn Fn(f64) -> f64 + Sync), mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (func(x1), func(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = func(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = func(x1);
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_is_decreasing() {
        let r = check_pattern(&|x: f64| (-x).exp(), &Grid::open(0.0, 5.0, 1000)).unwrap();
        assert_eq!(r.pattern, Pattern::Decreasing);
        assert!(r.switch_point.is_none());
        assert!(r.max_violation <= DIFF_TOLERANCE);
    }

    #[test]
    fn gamma_kernel_is_up_down() {
        let r = check_pattern(&|x: f64| x * (-x).exp(), &Grid::open(0.0, 5.0, 1000)).unwrap();
        assert_eq!(r.pattern, Pattern::UpDown);
        assert!((r.switch_point.unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn increasing_and_other() {
        let r = check_pattern(&|x: f64| x * x, &Grid::open(0.1, 3.0, 200)).unwrap();
        assert_eq!(r.pattern, Pattern::Increasing);
        let r = check_pattern(&|x: f64| (3.0 * x).sin(), &Grid::open(0.0, 6.0, 500)).unwrap();
        assert_eq!(r.pattern, Pattern::Other);
        assert!(r.max_violation > DIFF_TOLERANCE);
        let r = check_pattern(&|_| 2.0, &Grid::open(0.0, 1.0, 100)).unwrap();
        assert_eq!(r.pattern, Pattern::Other);
    }

    #[test]
    fn plateau_then_decrease_counts_as_decreasing() {
        let f = |x: f64| if x < 1.0 { 1.0 } else { 1.0 / (x * x) };
        let r = check_pattern(&f, &Grid::open(0.0, 4.0, 400)).unwrap();
        assert_eq!(r.pattern, Pattern::Decreasing);
    }

    #[test]
    fn rejects_small_grids_and_non_finite_values() {
        assert!(matches!(
            check_pattern(&|x: f64| x, &Grid::open(0.0, 1.0, 99)),
            Err(Error::Usage(_))
        ));
        let err = check_pattern(&|x: f64| 1.0 / (x - 0.5), &Grid::open(0.0, 1.0, 101)).unwrap_err();
        assert!(matches!(err, Error::Evaluation { x, .. } if x == 0.5));
    }

    #[test]
    fn grid_is_interior() {
        for g in [Grid::open(0.0, 2.0, 100), Grid::open(0.5, 2.0, 100)] {
            let pts = g.points();
            assert_eq!(pts.len(), 100);
            assert!(pts[0] > g.lo && pts[99] < g.hi);
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
