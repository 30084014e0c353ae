//! Tail bounds for `S = a_1 eta_1 + a_2 eta_2 + ...` with `sum a_i^2 = 1`,
//! `|eta_i| <= 1` and `E eta_i = 0`.
//!
//! One-sided bounds on `P(S >= x)`:
//!
//! * Hoeffding: `exp(-x^2/2)`
//! * `V(x) = min(exp(-x^2/2), e^lambda P(Z >= x))`
//! * `W(x) = min(exp(-x^2/2), P(Z >= x - lambda/x))`
//! * Edelman's original shift: `P(Z >= x - 1.5/x)`
//!
//! Two-sided bounds on `P(|S| >= x)`:
//!
//! * Markov (second moment): `min(1, 1/x^2)`
//! * `W~(x) = min(1/x^2, P(|Z| >= x - lambda/x))`
//!
//! with `lambda = ln(2 e^3 / 9)`. Every bound is 1 for `x <= 0` unless the
//! strict evaluator is used.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::normal::{density, exp_neg_half_square, q, two_sided};

/// Shift constant of Edelman's original inequality.
pub const EDELMAN_SHIFT: f64 = 1.5;

/// The shift constant `lambda` and `e^lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub lambda: f64,
    pub exp_lambda: f64,
}

impl Constants {
    /// `lambda = 3 - ln 4.5` and `e^lambda = 2 e^3 / 9`.
    pub fn new() -> Self {
        Constants {
            lambda: 3.0 - 4.5_f64.ln(),
            exp_lambda: 2.0 * 3.0_f64.exp() / 9.0,
        }
    }

    /// Constants with an arbitrary shift. Only meant for sensitivity checks.
    pub fn with_lambda(lambda: f64) -> Self {
        Constants {
            lambda,
            exp_lambda: lambda.exp(),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

/// The bound families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Hoeffding,
    V,
    W,
    Wtilde,
    Edelman15,
    Markov2,
}

impl BoundKind {
    /// Canonical column order.
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Hoeffding,
        BoundKind::V,
        BoundKind::W,
        BoundKind::Wtilde,
        BoundKind::Edelman15,
        BoundKind::Markov2,
    ];

    pub const ONE_SIDED: [BoundKind; 4] = [
        BoundKind::Hoeffding,
        BoundKind::V,
        BoundKind::W,
        BoundKind::Edelman15,
    ];

    pub const TWO_SIDED: [BoundKind; 2] = [BoundKind::Wtilde, BoundKind::Markov2];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Hoeffding => "hoeffding",
            BoundKind::V => "v",
            BoundKind::W => "w",
            BoundKind::Wtilde => "wtilde",
            BoundKind::Edelman15 => "edelman15",
            BoundKind::Markov2 => "markov2",
        }
    }

    /// Whether the bound controls `P(|S| >= x)` rather than `P(S >= x)`.
    pub fn is_two_sided(self) -> bool {
        matches!(self, BoundKind::Wtilde | BoundKind::Markov2)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Usage(format!("unknown bound kind `{s}`")))
    }
}

/// Points where the branches of V, W and W~ exchange roles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoints {
    pub z_v: f64,
    pub z_w: f64,
    pub z_wtilde: f64,
}

impl CrossingPoints {
    /// Absolute residuals of the three defining equations under `bounds`.
    pub fn residuals(&self, bounds: &Bounds) -> [f64; 3] {
        [
            bounds.v_crossing_residual(self.z_v).abs(),
            bounds.w_crossing_residual(self.z_w).abs(),
            bounds.wtilde_crossing_residual(self.z_wtilde).abs(),
        ]
    }
}

/// Bound evaluator over a fixed set of constants.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bounds {
    constants: Constants,
}

fn clamp_unit(p: f64) -> f64 {
    if p.is_nan() {
        p
    } else {
        p.clamp(0.0, 1.0)
    }
}

impl Bounds {
    pub fn new(constants: Constants) -> Self {
        Bounds { constants }
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    pub fn lambda(&self) -> f64 {
        self.constants.lambda
    }

    pub fn hoeffding(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit(exp_neg_half_square(x))
    }

    pub fn markov_two_sided(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit((1.0 / (x * x)).min(1.0))
    }

    /// `e^lambda P(Z >= x)`, the Gaussian branch of V.
    pub fn v_gaussian_branch(&self, x: f64) -> f64 {
        self.constants.exp_lambda * q(x)
    }

    /// `P(Z >= x - lambda/x)`, the Gaussian branch of W.
    pub fn w_gaussian_branch(&self, x: f64) -> f64 {
        q(x - self.constants.lambda / x)
    }

    /// `P(|Z| >= x - lambda/x)`, the Gaussian branch of W~.
    pub fn wtilde_gaussian_branch(&self, x: f64) -> f64 {
        two_sided(x - self.constants.lambda / x)
    }

    pub fn v(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit(exp_neg_half_square(x).min(self.v_gaussian_branch(x)))
    }

    pub fn w(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit(exp_neg_half_square(x).min(self.w_gaussian_branch(x)))
    }

    pub fn w_tilde(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit((1.0 / (x * x)).min(self.wtilde_gaussian_branch(x)).min(1.0))
    }

    pub fn edelman(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        clamp_unit(q(x - EDELMAN_SHIFT / x))
    }

    pub fn eval(&self, kind: BoundKind, x: f64) -> f64 {
        match kind {
            BoundKind::Hoeffding => self.hoeffding(x),
            BoundKind::V => self.v(x),
            BoundKind::W => self.w(x),
            BoundKind::Wtilde => self.w_tilde(x),
            BoundKind::Edelman15 => self.edelman(x),
            BoundKind::Markov2 => self.markov_two_sided(x),
        }
    }

    /// Like [`Bounds::eval`] but rejects the trivial region `x <= 0` and
    /// non-finite input.
    pub fn eval_strict(&self, kind: BoundKind, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(domain(format!("{kind} bound requires a finite x, got {x}")));
        }
        if x <= 0.0 {
            return Err(domain(format!(
                "{kind} bound is trivially 1 at x = {x}; strict mode requires x > 0"
            )));
        }
        Ok(self.eval(kind, x))
    }

    pub(crate) fn v_crossing_residual(&self, z: f64) -> f64 {
        exp_neg_half_square(z) - self.v_gaussian_branch(z)
    }

    pub(crate) fn w_crossing_residual(&self, z: f64) -> f64 {
        exp_neg_half_square(z) - self.w_gaussian_branch(z)
    }

    pub(crate) fn wtilde_crossing_residual(&self, z: f64) -> f64 {
        1.0 / (z * z) - self.wtilde_gaussian_branch(z)
    }

    /// Solves the three crossing equations by bisection to width `1e-13`
    /// followed by one guarded Newton step.
    pub fn solve_crossings(&self) -> Result<CrossingPoints> {
        let lam = self.constants.lambda;
        let e_lam = self.constants.exp_lambda;
        let shift_slope = move |z: f64| 1.0 + lam / (z * z);

        let z_v = solve_bracketed(
            "z_v",
            |z| self.v_crossing_residual(z),
            |z| -z * exp_neg_half_square(z) + e_lam * density(z),
            1.0,
            2.0,
        )?;
        let z_w = solve_bracketed(
            "z_w",
            |z| self.w_crossing_residual(z),
            |z| -z * exp_neg_half_square(z) + density(z - lam / z) * shift_slope(z),
            1.0,
            2.0,
        )?;
        let z_wtilde = solve_bracketed(
            "z_wtilde",
            |z| self.wtilde_crossing_residual(z),
            |z| -2.0 / (z * z * z) + 2.0 * density(z - lam / z) * shift_slope(z),
            lam.sqrt(),
            3.0,
        )?;
        Ok(CrossingPoints { z_v, z_w, z_wtilde })
    }

    /// Evaluates V, W or W~ through their piecewise forms, choosing the
    /// branch from the crossing points rather than taking a minimum.
    pub fn piecewise(&self, kind: BoundKind, x: f64, crossings: &CrossingPoints) -> Result<f64> {
        if x <= 0.0 {
            return Ok(1.0);
        }
        let value = match kind {
            BoundKind::V => {
                if x <= crossings.z_v {
                    exp_neg_half_square(x)
                } else {
                    self.v_gaussian_branch(x)
                }
            }
            BoundKind::W => {
                if x <= crossings.z_w {
                    exp_neg_half_square(x)
                } else {
                    self.w_gaussian_branch(x)
                }
            }
            BoundKind::Wtilde => {
                if x <= 1.0 {
                    1.0
                } else if x <= crossings.z_wtilde {
                    1.0 / (x * x)
                } else {
                    self.wtilde_gaussian_branch(x)
                }
            }
            other => {
                return Err(Error::Usage(format!("{other} has no piecewise form")));
            }
        };
        Ok(clamp_unit(value))
    }

    /// Smallest `x > 0` with `bound(kind, x) <= alpha`, to absolute
    /// tolerance `1e-10`.
    ///
    /// W~ and the Markov bound are flat at 1 on `(0, 1]`; their inverse is
    /// taken over `x >= 1`.
    pub fn invert(&self, kind: BoundKind, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("invert_bound requires alpha in (0, 1), got {alpha}")));
        }
        let closed = match kind {
            BoundKind::Hoeffding => Some((-2.0 * alpha.ln()).sqrt()),
            BoundKind::Markov2 => Some(1.0 / alpha.sqrt()),
            _ => None,
        };
        if let Some(mut x) = closed {
            // step past rounding so that bound(x) <= alpha holds exactly
            while self.eval(kind, x) > alpha {
                x = x.next_up();
            }
            return Ok(x);
        }
        let mut lo: f64 = if kind == BoundKind::Wtilde { 1.0 } else { 0.0 };
        let mut hi = lo.max(1.0);
        let mut doublings = 0;
        while self.eval(kind, hi) > alpha {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 64 {
                return Err(domain(format!("{kind} bound never falls below alpha = {alpha:e}")));
            }
        }
        while hi - lo > 1e-13 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(kind, mid) <= alpha {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

fn solve_bracketed(
    name: &str,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::Internal(format!(
            "{name}: no sign change on [{lo}, {hi}] (values {f_lo:e}, {f_hi:e})"
        )));
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let fz = f(z);
    let slope = df(z);
    if slope != 0.0 && slope.is_finite() {
        let polished = z - fz / slope;
        if polished >= lo - 1e-13 && polished <= hi + 1e-13 && f(polished).abs() <= fz.abs() {
            return Ok(polished);
        }
    }
    Ok(z)
}

pub fn hoeffding_bound(x: f64) -> f64 {
    Bounds::default().hoeffding(x)
}

pub fn v_bound(x: f64) -> f64 {
    Bounds::default().v(x)
}

pub fn w_bound(x: f64) -> f64 {
    Bounds::default().w(x)
}

pub fn w_tilde_bound(x: f64) -> f64 {
    Bounds::default().w_tilde(x)
}

pub fn edelman_bound(x: f64) -> f64 {
    Bounds::default().edelman(x)
}

pub fn markov_two_sided(x: f64) -> f64 {
    Bounds::default().markov_two_sided(x)
}

pub fn solve_crossings() -> Result<CrossingPoints> {
    Bounds::default().solve_crossings()
}

pub fn piecewise_bound(kind: BoundKind, x: f64, crossings: &CrossingPoints) -> Result<f64> {
    Bounds::default().piecewise(kind, x, crossings)
}

pub fn invert_bound(kind: BoundKind, alpha: f64) -> Result<f64> {
    Bounds::default().invert(kind, alpha)
}
