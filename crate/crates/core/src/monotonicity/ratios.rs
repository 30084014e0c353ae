//! Closed-form ratios `rho = f'/g'` for the four comparisons behind the
//! piecewise forms of V, W and W~, and their derivatives.

use crate::bounds::Constants;
use crate::error::{domain, Result};
use crate::normal::{density, FRAC_1_SQRT_2PI};

/// Smallest argument accepted by the ratios carrying `exp(lambda^2 / 2x^2)`.
pub const MIN_ARGUMENT: f64 = 0.05;

fn require_positive(x: f64, name: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} requires x > 0, got {x}")))
    }
}

fn require_min(x: f64, name: &str) -> Result<()> {
    if x.is_finite() && x >= MIN_ARGUMENT {
        Ok(())
    } else {
        Err(domain(format!("{name} requires x >= {MIN_ARGUMENT}, got {x}")))
    }
}

/// Ratio functions evaluated for a given shift constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    lambda: f64,
    exp_lambda: f64,
}

impl Default for Ratios {
    fn default() -> Self {
        Ratios::new(Constants::new())
    }
}

impl Ratios {
    pub fn new(c: Constants) -> Self {
        Ratios {
            lambda: c.lambda,
            exp_lambda: c.exp_lambda,
        }
    }

    /// `e^lambda P(Z >= x)` against `exp(-x^2/2)`: `e^lambda / (x sqrt(2 pi))`.
    pub fn rho_lemma_v(&self, x: f64) -> Result<f64> {
        require_positive(x, "rho_lemma_v")?;
        Ok(self.exp_lambda * FRAC_1_SQRT_2PI / x)
    }

    /// `P(Z >= x - lambda/x)` against `exp(-x^2/2)`.
    pub fn rho_lemma_w(&self, x: f64) -> Result<f64> {
        require_min(x, "rho_lemma_w")?;
        let l = self.lambda;
        let scale = (l * l / (2.0 * x * x) - l).exp();
        Ok(FRAC_1_SQRT_2PI * (l + x * x) / (x.powi(3) * scale))
    }

    pub fn rho_prime_lemma_w(&self, x: f64) -> Result<f64> {
        require_min(x, "rho_prime_lemma_w")?;
        let l = self.lambda;
        let x2 = x * x;
        let scale = (l * l / (2.0 * x2) - l).exp();
        let numerator = l.powi(3) - (3.0 - l) * l * x2 - x2 * x2;
        Ok(FRAC_1_SQRT_2PI * numerator / (x.powi(6) * scale))
    }

    /// `P(Z >= x - lambda/x)` against `e^lambda P(Z >= x)`.
    pub fn rho_lemma_less(&self, x: f64) -> Result<f64> {
        require_min(x, "rho_lemma_less")?;
        let l = self.lambda;
        let x2 = x * x;
        Ok((-l * l / (2.0 * x2)).exp() * (1.0 + l / x2))
    }

    pub fn rho_prime_lemma_less(&self, x: f64) -> Result<f64> {
        require_min(x, "rho_prime_lemma_less")?;
        let l = self.lambda;
        let x2 = x * x;
        Ok((l * l - (2.0 - l) * x2) * l * x.powi(-5) * (-l * l / (2.0 * x2)).exp())
    }

    /// `P(|Z| >= x - lambda/x)` against `1/x^2` on `x > sqrt(lambda)`:
    /// `phi(x - lambda/x) (x^3 + lambda x)`.
    pub fn rho_w_tilde(&self, x: f64) -> Result<f64> {
        self.require_above_root(x, "rho_w_tilde")?;
        let l = self.lambda;
        Ok(density(x - l / x) * (x.powi(3) + l * x))
    }

    pub fn rho_prime_w_tilde(&self, x: f64) -> Result<f64> {
        self.require_above_root(x, "rho_prime_w_tilde")?;
        let l = self.lambda;
        let u = 1.0 / (x * x);
        let bracket = l.powi(3) * u.powi(3) + (l + 1.0) * l * u * u + (3.0 - l) * u - 1.0;
        Ok(bracket * x.powi(4) * density(x - l / x))
    }

    fn require_above_root(&self, x: f64, name: &str) -> Result<()> {
        if x.is_finite() && x > self.lambda.sqrt() {
            Ok(())
        } else {
            Err(domain(format!("{name} requires x > sqrt(lambda), got {x}")))
        }
    }

    /// Where `rho_lemma_w` peaks: the positive root of
    /// `lambda^3 - (3 - lambda) lambda t - t^2` in `t = x^2`.
    pub fn lemma_w_switch(&self) -> f64 {
        let l = self.lambda;
        let b = (3.0 - l) * l;
        ((-b + (b * b + 4.0 * l.powi(3)).sqrt()) / 2.0).sqrt()
    }

    /// Where `rho_w_tilde` peaks: `1 / sqrt(u)` for the positive root `u` of
    /// `lambda^3 u^3 + (lambda + 1) lambda u^2 + (3 - lambda) u - 1`.
    pub fn w_tilde_switch(&self) -> f64 {
        let l = self.lambda;
        let cubic = |u: f64| ((l.powi(3) * u + (l + 1.0) * l) * u + (3.0 - l)) * u - 1.0;
        // cubic(0) = -1 and the cubic is increasing on u > 0
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while cubic(hi) < 0.0 {
            hi *= 2.0;
        }
        while hi - lo > 1e-16 * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cubic(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        1.0 / (0.5 * (lo + hi)).sqrt()
    }

    /// Where `rho_lemma_less` peaks: `lambda / sqrt(2 - lambda)`.
    pub fn lemma_less_switch(&self) -> f64 {
        self.lambda / (2.0 - self.lambda).sqrt()
    }
}

pub fn rho_lemma_v(x: f64) -> Result<f64> {
    Ratios::default().rho_lemma_v(x)
}

pub fn rho_lemma_w(x: f64) -> Result<f64> {
    Ratios::default().rho_lemma_w(x)
}

pub fn rho_prime_lemma_w(x: f64) -> Result<f64> {
    Ratios::default().rho_prime_lemma_w(x)
}

pub fn rho_lemma_less(x: f64) -> Result<f64> {
    Ratios::default().rho_lemma_less(x)
}

pub fn rho_prime_lemma_less(x: f64) -> Result<f64> {
    Ratios::default().rho_prime_lemma_less(x)
}

pub fn rho_w_tilde(x: f64) -> Result<f64> {
    Ratios::default().rho_w_tilde(x)
}

pub fn rho_prime_w_tilde(x: f64) -> Result<f64> {
    Ratios::default().rho_prime_w_tilde(x)
}
