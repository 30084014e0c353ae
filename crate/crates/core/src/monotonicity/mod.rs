//! Numerical check of the l'Hospital-type rule for monotonicity.
//!
//! Let `f`, `g` be differentiable on `(a, b)` with `g`, `g'` nonvanishing and
//! `f(b-) = g(b-) = 0`. If `rho = f'/g'` is decreasing, so is `r = f/g`; if
//! `rho` is up-down, then `r` is decreasing or up-down.
//!
//! This module samples both sides of that implication on dense grids for the
//! four ratios that fix the piecewise shapes of V, W and W~. It is a
//! consistency oracle over grids, not a proof: `b = inf` is truncated, and
//! nonvanishing of `g` and `rho` is only checked at the sample points.

mod pattern;
mod ratios;

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{Bounds, CrossingPoints};
use crate::digits::agrees_with_printed;
use crate::error::{Error, Result};
use crate::normal::{exp_neg_half_square, q, two_sided};

pub use pattern::{check_pattern, sample, Grid, Pattern, PatternReport, Spacing, DIFF_TOLERANCE};
pub use ratios::{
    rho_lemma_less, rho_lemma_v, rho_lemma_w, rho_prime_lemma_less, rho_prime_lemma_w,
    rho_prime_w_tilde, rho_w_tilde, Ratios, MIN_ARGUMENT,
};

/// Default grid density.
pub const DEFAULT_GRID_SIZE: usize = 10_000;

/// Stand-in for `b = inf` when checking `f(b-) = g(b-) = 0`.
pub const TRUNCATION_POINT: f64 = 38.0;

/// Upper end of the pattern grids. Past this point the case functions are
/// subnormal and their ratios are dominated by rounding.
pub const GRID_UPPER: f64 = 36.0;

/// Both `|f|` and `|g|` must be below this at the truncation point.
pub const VANISHING_TOLERANCE: f64 = 1e-15;

/// Relative agreement required between closed-form `rho` and `f'/g'`.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;

/// Allowed distance between a detected `rho` switch and its analytic value.
pub const SWITCH_TOLERANCE: f64 = 1e-6;

const DIFF_STEP: f64 = 1e-6;

pub type CaseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// What a boundary value of `r` is expected to be.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Expected {
    /// Within `tol` (relative) of `value`.
    Value { value: f64, tol: f64 },
    /// Truncated decimal expansion, e.g. `"1.13"`.
    Printed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCheck {
    pub label: String,
    pub x: f64,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryResult {
    pub label: String,
    pub x: f64,
    pub value: f64,
    pub expected: Expected,
    pub pass: bool,
}

/// One application of the rule: `f`, `g`, the closed form of `f'/g'`, and the
/// shapes the argument predicts.
#[derive(Clone)]
pub struct RatioCase {
    pub name: String,
    pub f: CaseFn,
    pub g: CaseFn,
    pub rho: CaseFn,
    /// The open interval `(a, b)`; `b` may be infinite.
    pub domain: (f64, f64),
    /// Interval sampled by the pattern grids.
    pub window: (f64, f64),
    /// Point standing in for `b-`.
    pub limit_probe: f64,
    pub expected_rho: Pattern,
    pub expected_rho_switch: Option<f64>,
    /// Shape of `r` claimed beyond the rule's conclusion, if any.
    pub expected_r: Option<Pattern>,
    /// Interval `(lo, hi]` on which `r > 1` is claimed.
    pub r_above_one: Option<(f64, f64)>,
    pub boundary: Vec<BoundaryCheck>,
    /// Interval for the finite-difference check of `rho`.
    pub derivative_window: (f64, f64),
}

impl std::fmt::Debug for RatioCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RatioCase")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("window", &self.window)
            .field("expected_rho", &self.expected_rho)
            .field("expected_r", &self.expected_r)
            .finish_non_exhaustive()
    }
}

impl RatioCase {
    pub fn r(&self, x: f64) -> f64 {
        (self.f)(x) / (self.g)(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhopitalReport {
    pub case: String,
    pub rho: PatternReport,
    pub r: PatternReport,
    pub premise_ok: bool,
    pub premise_failures: Vec<String>,
    /// `None` when the premise failed and the conclusion was not examined.
    pub conclusion_ok: Option<bool>,
    pub rho_matches: bool,
    pub r_matches: bool,
    /// Smallest `r` over the claimed `r > 1` region.
    pub r_min_above_one: Option<f64>,
    pub boundary: Vec<BoundaryResult>,
    pub derivative_max_rel_error: f64,
}

impl LhopitalReport {
    pub fn passed(&self) -> bool {
        self.premise_ok
            && self.conclusion_ok == Some(true)
            && self.rho_matches
            && self.r_matches
            && self.r_min_above_one.is_none_or(|m| m > 1.0)
            && self.boundary.iter().all(|b| b.pass)
            && self.derivative_max_rel_error <= DERIVATIVE_TOLERANCE
    }
}

/// Largest relative gap between closed-form `rho` and central-difference
/// `f'/g'` (step `1e-6`) over `points` log-spaced points of the case's
/// derivative window.
pub fn derivative_agreement(case: &RatioCase, points: usize) -> Result<f64> {
    let (lo, hi) = case.derivative_window;
    let grid = Grid::open(lo, hi, points);
    let mut worst = 0.0_f64;
    for x in grid.points() {
        let h = DIFF_STEP * x.max(1.0);
        let df = ((case.f)(x + h) - (case.f)(x - h)) / (2.0 * h);
        let dg = ((case.g)(x + h) - (case.g)(x - h)) / (2.0 * h);
        let numeric = df / dg;
        let closed = (case.rho)(x);
        if !(numeric.is_finite() && closed.is_finite()) {
            return Err(Error::Evaluation { x, value: numeric });
        }
        worst = worst.max(((numeric - closed) / closed).abs());
    }
    Ok(worst)
}

fn check_boundary(case: &RatioCase, check: &BoundaryCheck) -> BoundaryResult {
    let value = case.r(check.x);
    let pass = match &check.expected {
        Expected::Value { value: want, tol } => (value - want).abs() <= tol * want.abs(),
        Expected::Printed(digits) => agrees_with_printed(value, digits),
    };
    BoundaryResult {
        label: check.label.clone(),
        x: check.x,
        value,
        expected: check.expected.clone(),
        pass,
    }
}

/// Samples the premise (`rho` shape, vanishing limits, nonvanishing `g` and
/// `rho`) and the conclusion (`r` decreasing or up-down) of the rule.
pub fn verify_lhopital_case(case: &RatioCase, grid_size: usize) -> Result<LhopitalReport> {
    let grid = Grid::open(case.window.0, case.window.1, grid_size);
    let rho_report = check_pattern(case.rho.as_ref(), &grid)?;
    let r_fn = |x: f64| case.r(x);
    let r_report = check_pattern(&r_fn, &grid)?;

    let mut premise_failures = Vec::new();
    if !matches!(rho_report.pattern, Pattern::Decreasing | Pattern::UpDown) {
        premise_failures.push(format!("rho is {:?}, not decreasing or up-down", rho_report.pattern));
    }
    let probe = case.limit_probe;
    let (f_end, g_end) = ((case.f)(probe), (case.g)(probe));
    if !(f_end.abs() <= VANISHING_TOLERANCE && g_end.abs() <= VANISHING_TOLERANCE) {
        premise_failures.push(format!("f({probe}) = {f_end:e}, g({probe}) = {g_end:e} do not vanish"));
    }
    for x in grid.points() {
        if (case.g)(x) == 0.0 || (case.rho)(x) == 0.0 {
            premise_failures.push(format!("g or rho vanishes at x = {x}"));
            break;
        }
    }
    let premise_ok = premise_failures.is_empty();
    let conclusion_ok =
        premise_ok.then_some(matches!(r_report.pattern, Pattern::Decreasing | Pattern::UpDown));

    let switch_ok = match (case.expected_rho_switch, rho_report.switch_point) {
        (None, _) => true,
        (Some(want), Some(got)) => (want - got).abs() <= SWITCH_TOLERANCE,
        (Some(_), None) => false,
    };
    let rho_matches = rho_report.pattern == case.expected_rho && switch_ok;
    let r_matches = case.expected_r.is_none_or(|p| p == r_report.pattern);

    let r_min_above_one = case.r_above_one.map(|(lo, hi)| {
        grid.points()
            .into_iter()
            .filter(|&x| x > lo && x <= hi)
            .map(|x| case.r(x))
            .fold(f64::INFINITY, f64::min)
    });

    let boundary = case.boundary.iter().map(|b| check_boundary(case, b)).collect();
    let derivative_max_rel_error = derivative_agreement(case, 200)?;

    Ok(LhopitalReport {
        case: case.name.clone(),
        rho: rho_report,
        r: r_report,
        premise_ok,
        premise_failures,
        conclusion_ok,
        rho_matches,
        r_matches,
        r_min_above_one,
        boundary,
        derivative_max_rel_error,
    })
}

fn wrap(f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> CaseFn {
    Arc::new(move |x| f(x).unwrap_or(f64::NAN))
}

/// The four ratio cases behind the piecewise forms, under `bounds`'
/// constants. `crossings` supplies `z_V` for the `r > 1` claim.
pub fn standard_cases(bounds: &Bounds, crossings: &CrossingPoints) -> Vec<RatioCase> {
    let c = bounds.constants();
    let (lam, e_lam) = (c.lambda, c.exp_lambda);
    let ratios = Ratios::new(c);
    let gauss_g: CaseFn = Arc::new(exp_neg_half_square);

    let lemma_v = RatioCase {
        name: "lemma_v".into(),
        f: Arc::new(move |x| e_lam * q(x)),
        g: gauss_g.clone(),
        rho: wrap(move |x| ratios.rho_lemma_v(x)),
        domain: (0.0, f64::INFINITY),
        window: (MIN_ARGUMENT, GRID_UPPER),
        limit_probe: TRUNCATION_POINT,
        expected_rho: Pattern::Decreasing,
        expected_rho_switch: None,
        expected_r: Some(Pattern::Decreasing),
        r_above_one: None,
        boundary: vec![BoundaryCheck {
            label: "r(0) = e^lambda/2".into(),
            x: 0.0,
            expected: Expected::Value { value: e_lam / 2.0, tol: 1e-15 },
        }],
        derivative_window: (0.2, 8.0),
    };

    let lemma_w = RatioCase {
        name: "lemma_w".into(),
        f: Arc::new(move |x| q(x - lam / x)),
        g: gauss_g,
        rho: wrap(move |x| ratios.rho_lemma_w(x)),
        domain: (0.0, f64::INFINITY),
        window: (MIN_ARGUMENT, GRID_UPPER),
        limit_probe: TRUNCATION_POINT,
        expected_rho: Pattern::UpDown,
        expected_rho_switch: Some(ratios.lemma_w_switch()),
        expected_r: Some(Pattern::UpDown),
        r_above_one: None,
        boundary: vec![
            BoundaryCheck {
                label: "r(0+) = 1".into(),
                x: 1e-8,
                expected: Expected::Value { value: 1.0, tol: 1e-12 },
            },
            BoundaryCheck {
                label: "r(1) = 1.13...".into(),
                x: 1.0,
                expected: Expected::Printed("1.13".into()),
            },
        ],
        derivative_window: (0.5, 8.0),
    };

    let lemma_less = RatioCase {
        name: "lemma_less".into(),
        f: Arc::new(move |x| q(x - lam / x)),
        g: Arc::new(move |x| e_lam * q(x)),
        rho: wrap(move |x| ratios.rho_lemma_less(x)),
        domain: (0.0, f64::INFINITY),
        window: (MIN_ARGUMENT, GRID_UPPER),
        limit_probe: TRUNCATION_POINT,
        expected_rho: Pattern::UpDown,
        expected_rho_switch: Some(ratios.lemma_less_switch()),
        expected_r: None,
        r_above_one: Some((crossings.z_v, 12.0)),
        boundary: vec![BoundaryCheck {
            label: "r(z_V) = 1.020...".into(),
            x: crossings.z_v,
            expected: Expected::Printed("1.020".into()),
        }],
        derivative_window: (0.5, 8.0),
    };

    // g = 1/x^2 decays only algebraically, so b- is probed far out.
    let root = lam.sqrt();
    let w_tilde = RatioCase {
        name: "w_tilde".into(),
        f: Arc::new(move |x| two_sided(x - lam / x)),
        g: Arc::new(|x| 1.0 / (x * x)),
        rho: wrap(move |x| ratios.rho_w_tilde(x)),
        domain: (root, f64::INFINITY),
        window: (root, GRID_UPPER),
        limit_probe: 1e8,
        expected_rho: Pattern::UpDown,
        expected_rho_switch: Some(ratios.w_tilde_switch()),
        expected_r: None,
        r_above_one: None,
        boundary: vec![BoundaryCheck {
            label: "r(sqrt(lambda)) = lambda".into(),
            x: root,
            expected: Expected::Value { value: lam, tol: 1e-12 },
        }],
        derivative_window: (1.3, 8.0),
    };

    vec![lemma_v, lemma_w, lemma_less, w_tilde]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cases() -> Vec<RatioCase> {
        let b = Bounds::default();
        let c = b.solve_crossings().unwrap();
        standard_cases(&b, &c)
    }

    #[test]
    fn all_standard_cases_pass() {
        for case in cases() {
            let report = verify_lhopital_case(&case, 2_000).unwrap();
            assert!(report.passed(), "{report:#?}");
        }
    }

    #[test]
    fn rho_w_switch_detected() {
        let grid = Grid::open(0.05, 10.0, DEFAULT_GRID_SIZE);
        let r = check_pattern(&|x| rho_lemma_w(x).unwrap(), &grid).unwrap();
        assert_eq!(r.pattern, Pattern::UpDown);
        assert!((r.switch_point.unwrap() - 1.011_352_954_504_159_9).abs() <= 1e-6);
    }

    #[test]
    fn boundary_values() {
        let cases = cases();
        let r1 = cases[1].r(1.0);
        assert!((r1 - 1.137_659_704_251_933_4).abs() <= 1e-13);
        let z_v = Bounds::default().solve_crossings().unwrap().z_v;
        assert!((cases[2].r(z_v) - 1.020_919_333_725_080_5).abs() <= 1e-13);
    }

    #[test]
    fn broken_premise_skips_conclusion() {
        let mut case = cases().remove(0);
        // g no longer vanishes at the right end
        case.g = Arc::new(|x: f64| 1.0 + (-x).exp());
        let report = verify_lhopital_case(&case, 500).unwrap();
        assert!(!report.premise_ok);
        assert_eq!(report.conclusion_ok, None);
        assert!(!report.passed());
    }

    #[test]
    fn wrong_closed_form_is_caught() {
        let mut case = cases().remove(0);
        case.rho = Arc::new(|x: f64| 1.0 / (x * x));
        let report = verify_lhopital_case(&case, 500).unwrap();
        assert!(report.derivative_max_rel_error > DERIVATIVE_TOLERANCE);
        assert!(!report.passed());
    }
}
