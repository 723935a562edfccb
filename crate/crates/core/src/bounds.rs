//! Closed-form potential-sum bounds, their empirical counterparts, and the
//! constant-sequence lower-bound construction.

use crate::accumulator::{Convention, DesignAccumulator};
use crate::error::{Error, Result};

/// `|p − 1| ≤ REGIME_TOLERANCE` selects the logarithmic regime.
pub const REGIME_TOLERANCE: f64 = 1e-12;
pub const SANDWICH_TOLERANCE: f64 = 1e-9;
pub const INCREMENT_BOUND_TOLERANCE: f64 = 1e-9;

/// Which of the three closed forms applies to an exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundRegime {
    GreaterThanOne,
    One,
    LessThanOne,
}

impl BoundRegime {
    pub fn of(p: f64) -> Self {
        if (p - 1.0).abs() <= REGIME_TOLERANCE {
            Self::One
        } else if p > 1.0 {
            Self::GreaterThanOne
        } else {
            Self::LessThanOne
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::GreaterThanOne => "p>1",
            Self::One => "p=1",
            Self::LessThanOne => "p<1",
        }
    }
}

pub(crate) fn validate_power(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent must be a positive real, got {p}")))
    }
}

pub(crate) fn validate_ridge(ridge: f64) -> Result<()> {
    if ridge > 0.0 && ridge.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("ridge must be a positive real, got {ridge}")))
    }
}

/// Upper bound on `Σ_{t≤T} ‖u_t‖_{V_{t+1}^{-p}}` for unit-bounded `u_t`:
///
/// * `p > 1`: `√(Td / (λ^{p−1}(p−1)))`
/// * `p = 1`: `√(Td·log((T+dλ)/(dλ)))`
/// * `p < 1`: `√(d^p/(1−p) · T · (T+dλ)^{1−p})`
pub fn epl_upper_bound(horizon: usize, dim: usize, ridge: f64, p: f64) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    validate_ridge(ridge)?;
    validate_power(p)?;
    let t = horizon as f64;
    let d = dim as f64;
    let value = match BoundRegime::of(p) {
        BoundRegime::GreaterThanOne => t * d / (ridge.powf(p - 1.0) * (p - 1.0)),
        BoundRegime::One => t * d * (t / (d * ridge)).ln_1p(),
        BoundRegime::LessThanOne => d.powf(p) / (1.0 - p) * t * (t + d * ridge).powf(1.0 - p),
    };
    Ok(value.sqrt())
}

/// Feeds `sequence` through a fresh accumulator with exponent `p`.
pub fn run_sequence(sequence: &[Vec<f64>], ridge: f64, p: f64) -> Result<DesignAccumulator> {
    let dim = sequence
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidParameter("sequence must be non-empty".into()))?;
    let mut acc = DesignAccumulator::new(dim, ridge)?.with_power(p)?;
    for u in sequence {
        acc.observe(u)?;
    }
    Ok(acc)
}

/// `Σ_t ‖u_t‖_{V_t^{-p}}` or `Σ_t ‖u_t‖_{V_{t+1}^{-p}}`.
pub fn epl_empirical_sum(
    sequence: &[Vec<f64>],
    ridge: f64,
    p: f64,
    convention: Convention,
) -> Result<f64> {
    let acc = run_sequence(sequence, ridge, p)?;
    Ok(acc
        .norms()
        .iter()
        .map(|n| match convention {
            Convention::Current => n.before,
            Convention::Next => n.after,
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichOutcome {
    pub sum_next: f64,
    pub sum_current: f64,
    pub holds: bool,
}

impl SandwichOutcome {
    pub fn evaluate(sum_next: f64, sum_current: f64, p: f64) -> Self {
        let upper = 2f64.powf(p / 2.0) * sum_next;
        let holds = sum_next <= sum_current + SANDWICH_TOLERANCE * sum_current
            && sum_current <= upper + SANDWICH_TOLERANCE * upper;
        Self {
            sum_next,
            sum_current,
            holds,
        }
    }
}

/// `Σ‖u_t‖_{V_{t+1}^{-p}} ≤ Σ‖u_t‖_{V_t^{-p}} ≤ 2^{p/2} Σ‖u_t‖_{V_{t+1}^{-p}}`, valid for `λ ≥ 1`.
pub fn sandwich_check(sequence: &[Vec<f64>], ridge: f64, p: f64) -> Result<SandwichOutcome> {
    if !(ridge >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sandwich relation requires ridge >= 1, got {ridge}"
        )));
    }
    let acc = run_sequence(sequence, ridge, p)?;
    Ok(sandwich_from(&acc, p))
}

pub(crate) fn sandwich_from(acc: &DesignAccumulator, p: f64) -> SandwichOutcome {
    let (next, current) = acc.norms().iter().fold((0.0, 0.0), |(n, c), pair| {
        (n + pair.after, c + pair.before)
    });
    if p == acc.power() {
        SandwichOutcome::evaluate(next, current, p)
    } else {
        let next = acc.norm_sum(p, Convention::Next).expect("valid history");
        let current = acc.norm_sum(p, Convention::Current).expect("valid history");
        SandwichOutcome::evaluate(next, current, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementOutcome {
    /// `‖u_t‖²_{V_{t+1}^{-p}}`
    pub lhs: f64,
    /// `Σ_i (λ_i(t+1) − λ_i(t)) / λ_i(t+1)^p`
    pub rhs: f64,
    pub holds: bool,
}

/// Per-step eigenvalue-increment bound at observation `t` of `acc`.
pub fn increment_bound_check(acc: &DesignAccumulator, t: usize, p: f64) -> Result<IncrementOutcome> {
    validate_power(p)?;
    let lhs = acc.squared_norm(t, p, Convention::Next)?;
    let increments = acc.raw_increments(t)?;
    let after = acc.eigenvalues(t + 1)?;
    let rhs: f64 = increments
        .iter()
        .zip(after)
        .map(|(e, l)| e / l.powf(p))
        .sum();
    let holds = lhs <= rhs + INCREMENT_BOUND_TOLERANCE * rhs.max(1.0);
    Ok(IncrementOutcome { lhs, rhs, holds })
}

/// `u_t = √(1/T)` for every `t ≤ T`.
pub fn lower_bound_sequence(horizon: usize) -> Vec<f64> {
    assert!(horizon >= 1, "lower_bound_sequence needs horizon >= 1");
    vec![(1.0 / horizon as f64).sqrt(); horizon]
}

/// `√T (λ + 1)^{−p/2}`, the floor reached by [`lower_bound_sequence`] when `d = 1`, `p > 1`.
pub fn lower_bound_value(horizon: usize, ridge: f64, p: f64) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    validate_ridge(ridge)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("lower bound needs p > 1, got {p}")));
    }
    Ok((horizon as f64).sqrt() * (ridge + 1.0).powf(-p / 2.0))
}
