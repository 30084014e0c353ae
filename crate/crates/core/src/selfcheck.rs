//! Self-check of the numerical facts the bounds rest on: the constant, the
//! crossing points, the four ratio-monotonicity cases with their boundary
//! values, and the W/V asymptotics.

use std::fmt;

use serde::Serialize;

use crate::bounds::{Bounds, Constants};
use crate::digits::agrees_with_printed;
use crate::error::Result;
use crate::monotonicity::{standard_cases, verify_lhopital_case, Expected};

/// Largest accepted residual of a crossing equation.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Points at which `W/V - 1` must shrink.
pub const ASYMPTOTIC_POINTS: [f64; 4] = [4.0, 6.0, 8.0, 10.0];

/// Largest accepted `|W(10)/V(10) - 1|`.
pub const ASYMPTOTIC_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub value: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, pass: bool, value: Option<f64>, detail: String) -> Self {
        CheckResult { name: name.into(), pass, value, detail }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs every check with the given constants and a monotonicity grid of
/// `grid_size` points. Crossing points are solved under `constants` but their
/// residuals are measured against the standard equations, so a perturbed
/// constant shows up as a failed residual check.
pub fn run_selfcheck(constants: Constants, grid_size: usize) -> Result<SelfCheckReport> {
    let bounds = Bounds::new(constants);
    let reference = Bounds::default();
    let mut checks = Vec::new();

    let lam = constants.lambda;
    checks.push(CheckResult::new(
        "lambda",
        agrees_with_printed(lam, "1.495"),
        Some(lam),
        format!("lambda = {lam:.17} (printed 1.495...)"),
    ));
    let target = 2.0 * 3.0_f64.exp() / 9.0;
    let ulp = f64::EPSILON * target;
    let gap = (constants.exp_lambda - target).abs();
    checks.push(CheckResult::new(
        "exp_lambda",
        gap <= ulp,
        Some(constants.exp_lambda),
        format!("e^lambda = {:.17}, 2e^3/9 = {target:.17}", constants.exp_lambda),
    ));

    let crossings = bounds.solve_crossings()?;
    let residuals = crossings.residuals(&reference);
    let named = [
        ("z_v", crossings.z_v, "1.312", residuals[0]),
        ("z_w", crossings.z_w, "1.365", residuals[1]),
        ("z_wtilde", crossings.z_wtilde, "1.865", residuals[2]),
    ];
    for (name, z, printed, _) in named {
        checks.push(CheckResult::new(
            format!("{name}_digits"),
            agrees_with_printed(z, printed),
            Some(z),
            format!("{name} = {z:.17} (printed {printed}...)"),
        ));
    }
    for (name, _, _, res) in named {
        checks.push(CheckResult::new(
            format!("{name}_residual"),
            res <= RESIDUAL_TOLERANCE,
            Some(res),
            format!("|residual| = {res:e} (tolerance {RESIDUAL_TOLERANCE:e})"),
        ));
    }

    for case in standard_cases(&bounds, &crossings) {
        let report = verify_lhopital_case(&case, grid_size)?;
        let switch = |s: Option<f64>| s.map_or(String::new(), |s| format!(" switch {s:.9}"));
        let mut detail = format!(
            "rho {}{}, r {}{}, premise {}, f'/g' rel err {:.1e}",
            report.rho.pattern.symbol(),
            switch(report.rho.switch_point),
            report.r.pattern.symbol(),
            switch(report.r.switch_point),
            if report.premise_ok { "ok" } else { "violated" },
            report.derivative_max_rel_error,
        );
        if let Some(m) = report.r_min_above_one {
            detail.push_str(&format!(", min r on claimed range {m:.6}"));
        }
        for failure in &report.premise_failures {
            detail.push_str(&format!(", {failure}"));
        }
        checks.push(CheckResult::new(
            format!("monotonicity_{}", case.name),
            report.passed(),
            report.rho.switch_point,
            detail,
        ));
        for b in &report.boundary {
            let expected = match &b.expected {
                Expected::Value { value, tol } => format!("{value:.17} +/- {tol:e}"),
                Expected::Printed(p) => format!("{p}..."),
            };
            checks.push(CheckResult::new(
                format!("boundary {}", b.label),
                b.pass,
                Some(b.value),
                format!("r({:.17}) = {:.17}, expected {expected}", b.x, b.value),
            ));
        }
    }

    let deviations: Vec<f64> = ASYMPTOTIC_POINTS
        .iter()
        .map(|&x| bounds.w(x) / bounds.v(x) - 1.0)
        .collect();
    let shrinking = deviations.windows(2).all(|p| p[1].abs() < p[0].abs());
    let last = deviations[deviations.len() - 1];
    let listing: Vec<String> = ASYMPTOTIC_POINTS
        .iter()
        .zip(&deviations)
        .map(|(x, d)| format!("W/V({x}) - 1 = {d:.6e}"))
        .collect();
    checks.push(CheckResult::new(
        "w_over_v_asymptotic",
        shrinking && last.abs() <= ASYMPTOTIC_TOLERANCE,
        Some(last),
        listing.join(", "),
    ));

    Ok(SelfCheckReport { checks })
}
