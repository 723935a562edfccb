//! Each link of the upper-bound argument as a standalone, checkable inequality.
//!
//! Tolerances are relative to the magnitude of the right-hand side, floored
//! at an absolute value near zero so degenerate inputs (all-zero sequences)
//! compare exactly.

use serde::{Deserialize, Serialize};

use crate::accumulator::{Convention, DesignAccumulator};
use crate::bounds::{epl_upper_bound, run_sequence, validate_power, validate_ridge, BoundRegime};
use crate::error::{Error, Result};

pub const JENSEN_TOLERANCE: f64 = 1e-12;
pub const INTEGRAL_TOLERANCE: f64 = 1e-10;
pub const SUBSTITUTION_TOLERANCE: f64 = 1e-9;
pub const CHAIN_TOLERANCE: f64 = 1e-9;

/// Outcome of one inequality `lhs ≤ rhs` (within a per-step tolerance).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStepReport {
    pub step: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative only when the inequality fails or sits inside the tolerance.
    pub slack: f64,
    pub pass: bool,
}

impl ProofStepReport {
    /// `pass` iff `lhs ≤ rhs + tolerance`.
    pub fn inequality(step: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            step: step.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            pass: lhs <= rhs + tolerance,
        }
    }

    /// `pass` iff `|lhs − rhs| ≤ tolerance`.
    pub fn identity(step: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            step: step.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            pass: (lhs - rhs).abs() <= tolerance,
        }
    }
}

fn check_non_negative(values: &[f64]) -> Result<()> {
    match values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        Some((index, &value)) => Err(Error::NegativeEntry { index, value }),
        None => Ok(()),
    }
}

/// `Σ a_i ≤ √(T Σ a_i²)` for non-negative `a`.
pub fn jensen_step_check(a: &[f64]) -> Result<ProofStepReport> {
    check_non_negative(a)?;
    let lhs: f64 = a.iter().sum();
    let rhs = (a.len() as f64 * a.iter().map(|x| x * x).sum::<f64>()).sqrt();
    Ok(ProofStepReport::inequality(
        "jensen_step",
        lhs,
        rhs,
        JENSEN_TOLERANCE * rhs.max(1.0),
    ))
}

/// The decreasing function `x ↦ x^{-p}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFamily {
    pub p: f64,
}

impl PowerFamily {
    pub fn new(p: f64) -> Result<Self> {
        validate_power(p)?;
        Ok(Self { p })
    }

    pub fn eval(&self, x: f64) -> f64 {
        x.powf(-self.p)
    }

    /// `∫_a^b x^{-p} dx` for `0 < a ≤ b`, evaluated without cancellation.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let growth = ((b - a) / a).ln_1p();
        match BoundRegime::of(self.p) {
            BoundRegime::One => growth,
            _ => {
                let q = 1.0 - self.p;
                a.powf(q) * (q * growth).exp_m1() / q
            }
        }
    }
}

/// `Σ_t ε̃_t f(λ + Σ_{u≤t} ε̃_u) ≤ ∫_λ^{λ+Σε̃} f(x) dx` for decreasing `f = x^{-p}`.
pub fn integral_comparison_check(
    increments: &[f64],
    ridge: f64,
    family: PowerFamily,
) -> Result<ProofStepReport> {
    check_non_negative(increments)?;
    validate_ridge(ridge)?;
    let mut level = ridge;
    let mut lhs = 0.0;
    for &e in increments {
        level += e;
        lhs += e * family.eval(level);
    }
    let rhs = family.integral(ridge, level);
    Ok(ProofStepReport::inequality(
        "integral_comparison",
        lhs,
        rhs,
        INTEGRAL_TOLERANCE * rhs.abs().max(f64::MIN_POSITIVE),
    ))
}

/// `λ_i(t+1) = λ + Σ_{u≤t} ε²_{i,u}`; `t = 0` is the `λ_i(1) = λ` boundary.
///
/// `i` is zero-based, `t` ranges over `0..=observations`.
pub fn substitution_identity_check(
    acc: &DesignAccumulator,
    i: usize,
    t: usize,
) -> Result<ProofStepReport> {
    if i >= acc.dim() {
        return Err(Error::OutOfRange {
            what: "eigenvalue index",
            index: i,
            valid: format!("0..{}", acc.dim()),
        });
    }
    let lambda = acc.eigenvalues(t + 1)?[i];
    let mut telescoped = acc.ridge();
    for u in 1..=t {
        telescoped += acc.raw_increments(u)?[i];
    }
    Ok(ProofStepReport::identity(
        "substitution_identity",
        lambda,
        telescoped,
        SUBSTITUTION_TOLERANCE * lambda.abs().max(1.0),
    ))
}

/// Names of the links emitted by [`proof_chain_report`], in order.
pub const CHAIN_LINKS: [&str; 5] = [
    "increment_bound",
    "jensen_aggregation",
    "integral_comparison",
    "regime_integral",
    "trace_bound",
];

/// Runs `sequence` and emits the five links from `Σ‖u_t‖_{V_{t+1}^{-p}}` up to
/// the closed-form bound. Each link's `lhs` is the previous link's `rhs`.
pub fn proof_chain_report(
    sequence: &[Vec<f64>],
    ridge: f64,
    p: f64,
) -> Result<Vec<ProofStepReport>> {
    validate_power(p)?;
    let acc = run_sequence(sequence, ridge, p)?;
    chain_from(&acc, p)
}

pub(crate) fn chain_from(acc: &DesignAccumulator, p: f64) -> Result<Vec<ProofStepReport>> {
    let horizon = acc.observations().len();
    let t = horizon as f64;
    let d = acc.dim();
    let ridge = acc.ridge();
    let tol = |rhs: f64| CHAIN_TOLERANCE * rhs.abs().max(1.0);

    let mut norm_sum = 0.0;
    let mut sqrt_sum = 0.0;
    let mut squared_sum = 0.0;
    for step in 1..=horizon {
        norm_sum += acc.norm(step, p, Convention::Next)?;
        let after = acc.eigenvalues(step + 1)?;
        let per_step: f64 = acc
            .raw_increments(step)?
            .iter()
            .zip(after)
            .map(|(e, l)| e / l.powf(p))
            .sum::<f64>()
            .max(0.0);
        sqrt_sum += per_step.sqrt();
        squared_sum += per_step;
    }

    let family = PowerFamily::new(p)?;
    let last = acc.eigenvalues(horizon + 1)?;
    let jensen = (t * squared_sum).sqrt();
    let integral = (t * last.iter().map(|&l| family.integral(ridge, l)).sum::<f64>()).sqrt();
    let regime = match BoundRegime::of(p) {
        BoundRegime::GreaterThanOne => (t * d as f64 * ridge.powf(1.0 - p) / (p - 1.0)).sqrt(),
        BoundRegime::One => (t * last.iter().map(|l| (l / ridge).ln()).sum::<f64>()).sqrt(),
        BoundRegime::LessThanOne => {
            (t * last.iter().map(|l| l.powf(1.0 - p)).sum::<f64>() / (1.0 - p)).sqrt()
        }
    };
    let bound = epl_upper_bound(horizon.max(1), d, ridge, p)?;

    let values = [norm_sum, sqrt_sum, jensen, integral, regime, bound];
    Ok(CHAIN_LINKS
        .iter()
        .zip(values.windows(2))
        .map(|(name, w)| ProofStepReport::inequality(*name, w[0], w[1], tol(w[1])))
        .collect())
}
