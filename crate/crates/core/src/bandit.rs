//! Linear stochastic bandit with a LinUCB-style policy whose exploration
//! bonus is the generalized potential `β_t ‖a‖_{V_t^{-p}}`.

use std::io::{self, Write};

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::accumulator::{DesignAccumulator, NORM_SLACK};
use crate::bounds::epl_upper_bound;
use crate::error::{check_dim, Error, Result};
use crate::format::fmt6;
use crate::linalg::{dot, norm2};
use crate::rng::{self, SeededRng};

pub const TRAJECTORY_CSV_HEADER: &str = "t,arm_index,reward,instant_regret,bonus,cum_regret";

/// Rewards are `aᵀθ* + σ·N(0, 1)`.
#[derive(Clone, Debug)]
pub struct LinearBanditEnv {
    theta: Vec<f64>,
    arms: Vec<Vec<f64>>,
    noise: f64,
    rng: SeededRng,
}

impl LinearBanditEnv {
    pub fn new(theta: Vec<f64>, arms: Vec<Vec<f64>>, noise: f64, seed: u64) -> Result<Self> {
        let dim = theta.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("parameter dimension must be >= 1".into()));
        }
        if arms.is_empty() {
            return Err(Error::InvalidParameter("arm set must be non-empty".into()));
        }
        if norm2(&theta) > 1.0 + NORM_SLACK {
            return Err(Error::InvalidParameter("‖θ*‖₂ must be at most 1".into()));
        }
        for (k, a) in arms.iter().enumerate() {
            check_dim(dim, a.len())?;
            let n = norm2(a);
            if n > 1.0 + NORM_SLACK {
                return Err(Error::NormViolation { index: k, norm: n });
            }
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise scale must be >= 0, got {noise}")));
        }
        Ok(Self {
            theta,
            arms,
            noise,
            rng: rng::seeded(seed),
        })
    }

    /// Unit-norm `θ*` and `n_arms` unit-norm arms, all drawn from `seed`.
    pub fn random(dim: usize, n_arms: usize, noise: f64, seed: u64) -> Result<Self> {
        let mut draw = rng::seeded(rng::derive_seed(seed, 0));
        let theta = rng::random_unit_vector(&mut draw, dim);
        let arms = (0..n_arms).map(|_| rng::random_unit_vector(&mut draw, dim)).collect();
        Self::new(theta, arms, noise, rng::derive_seed(seed, 1))
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn arms(&self) -> &[Vec<f64>] {
        &self.arms
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn mean(&self, arm: usize) -> f64 {
        dot(&self.arms[arm], &self.theta)
    }

    pub fn best_mean(&self) -> f64 {
        (0..self.arms.len()).map(|k| self.mean(k)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn gap(&self, arm: usize) -> f64 {
        (self.best_mean() - self.mean(arm)).max(0.0)
    }

    pub fn pull(&mut self, arm: usize) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        self.mean(arm) + self.noise * z
    }
}

/// Confidence width `β_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "scale")]
pub enum ConfidenceSchedule {
    Constant(f64),
    /// `scale · √(log(1 + t))`
    SqrtLog(f64),
}

impl ConfidenceSchedule {
    pub fn width(&self, t: usize) -> f64 {
        match *self {
            Self::Constant(b) => b,
            Self::SqrtLog(scale) => scale * (t as f64).ln_1p().sqrt(),
        }
    }

    /// `max_{t≤T} β_t`; both shapes are non-decreasing in `t`.
    pub fn max_width(&self, horizon: usize) -> f64 {
        self.width(horizon.max(1))
    }

    fn validate(&self) -> Result<()> {
        let v = match *self {
            Self::Constant(b) | Self::SqrtLog(b) => b,
        };
        if v >= 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("confidence width must be >= 0, got {v}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection {
    pub arm: usize,
    /// `‖a‖_{V_t^{-p}}`
    pub norm: f64,
    /// `β_t ‖a‖_{V_t^{-p}}`
    pub bonus: f64,
}

/// Ridge least squares plus a `V_t^{-p}` exploration bonus.
#[derive(Clone, Debug)]
pub struct GeneralizedLinUcb {
    schedule: ConfidenceSchedule,
    acc: DesignAccumulator,
    /// `Σ r_s a_s`
    response: Vec<f64>,
}

impl GeneralizedLinUcb {
    pub fn new(dim: usize, ridge: f64, power: f64, schedule: ConfidenceSchedule) -> Result<Self> {
        schedule.validate()?;
        Ok(Self {
            schedule,
            acc: DesignAccumulator::new(dim, ridge)?.with_power(power)?,
            response: vec![0.0; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.acc.dim()
    }

    pub fn accumulator(&self) -> &DesignAccumulator {
        &self.acc
    }

    pub fn schedule(&self) -> ConfidenceSchedule {
        self.schedule
    }

    /// `θ̂ = V_t^{-1} Σ r_s a_s`, solved in the eigenbasis of `V_t`.
    pub fn estimate(&self) -> Vec<f64> {
        let eig = self.acc.current();
        let rotated = eig.to_eigenbasis(&self.response).expect("response matches dimension");
        let scaled: Vec<f64> = rotated
            .iter()
            .zip(eig.eigenvalues())
            .map(|(c, l)| c / l)
            .collect();
        eig.basis().matvec(&scaled).expect("basis matches dimension")
    }

    /// `(θ̂ᵀa, ‖a‖_{V_t^{-p}})` for each arm.
    pub fn score_parts(&self, arms: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
        let theta = self.estimate();
        let potential = self.acc.potential();
        arms.iter()
            .map(|a| {
                check_dim(self.dim(), a.len())?;
                Ok((dot(&theta, a), potential.weighted_norm(a)?))
            })
            .collect()
    }

    /// Arm maximizing `θ̂ᵀa + β_t ‖a‖_{V_t^{-p}}`; ties go to the lowest index.
    pub fn select(&self, arms: &[Vec<f64>], t: usize) -> Result<Selection> {
        let beta = self.schedule.width(t);
        let parts = self.score_parts(arms)?;
        let arm = argmax_first(parts.iter().map(|(mean, norm)| mean + beta * norm))
            .ok_or_else(|| Error::InvalidParameter("arm set must be non-empty".into()))?;
        let norm = parts[arm].1;
        Ok(Selection {
            arm,
            norm,
            bonus: beta * norm,
        })
    }

    pub fn update(&mut self, action: &[f64], reward: f64) -> Result<()> {
        self.acc.observe(action)?;
        for (r, a) in self.response.iter_mut().zip(action) {
            *r += reward * a;
        }
        Ok(())
    }
}

/// Index of the first maximal element.
pub fn argmax_first(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if !(v > b) => {}
            _ => best = Some((k, v)),
        }
    }
    best.map(|(k, _)| k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BanditStep {
    pub t: usize,
    pub arm: usize,
    pub reward: f64,
    pub instant_regret: f64,
    pub norm: f64,
    pub bonus: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<BanditStep>,
    pub dim: usize,
    pub ridge: f64,
    pub power: f64,
    pub beta_max: f64,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    /// `Σ_t ‖a_t‖_{V_t^{-p}}`
    pub fn potential_sum(&self) -> f64 {
        self.steps.iter().map(|s| s.norm).sum()
    }

    /// `Σ_t β_t ‖a_t‖_{V_t^{-p}}`
    pub fn bonus_sum(&self) -> f64 {
        self.steps.iter().map(|s| s.bonus).sum()
    }

    pub fn cumulative_regret(&self) -> f64 {
        self.steps.iter().map(|s| s.instant_regret).sum()
    }

    /// `2^{p/2} · epl_upper_bound(T, d, λ, p)`; bounds [`potential_sum`](Self::potential_sum) when `λ ≥ 1`.
    pub fn potential_ceiling(&self) -> Result<f64> {
        Ok(2f64.powf(self.power / 2.0)
            * epl_upper_bound(self.horizon(), self.dim, self.ridge, self.power)?)
    }

    /// `β_max · 2^{p/2} · epl_upper_bound(T, d, λ, p)`
    pub fn bonus_ceiling(&self) -> Result<f64> {
        Ok(self.beta_max * self.potential_ceiling()?)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
        let mut cum = 0.0;
        for s in &self.steps {
            cum += s.instant_regret;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.t,
                s.arm,
                fmt6(s.reward),
                fmt6(s.instant_regret),
                fmt6(s.bonus),
                fmt6(cum)
            )?;
        }
        Ok(())
    }
}

/// Plays `horizon` rounds. Strictly sequential: each choice depends on all
/// previous feedback.
pub fn run_episode(
    env: &mut LinearBanditEnv,
    policy: &mut GeneralizedLinUcb,
    horizon: usize,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    check_dim(env.dim(), policy.dim())?;
    let mut steps = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        let choice = policy.select(env.arms(), t)?;
        let reward = env.pull(choice.arm);
        let action = env.arms()[choice.arm].clone();
        policy.update(&action, reward)?;
        steps.push(BanditStep {
            t,
            arm: choice.arm,
            reward,
            instant_regret: env.gap(choice.arm),
            norm: choice.norm,
            bonus: choice.bonus,
        });
    }
    let acc = policy.accumulator();
    Ok(Trajectory {
        steps,
        dim: acc.dim(),
        ridge: acc.ridge(),
        power: acc.power(),
        beta_max: policy.schedule().max_width(horizon),
    })
}

/// `(t, Σ_{s≤t} regret_s)` for every step.
pub fn regret_curve(trajectory: &Trajectory) -> Vec<(usize, f64)> {
    let mut cum = 0.0;
    trajectory
        .steps
        .iter()
        .map(|s| {
            cum += s.instant_regret;
            (s.t, cum)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_arm_env(noise: f64) -> LinearBanditEnv {
        LinearBanditEnv::new(
            vec![1.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            noise,
            0,
        )
        .unwrap()
    }

    #[test]
    fn noiseless_greedy_sticks_with_best_arm() {
        let mut env = two_arm_env(0.0);
        let mut policy = GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(0.0)).unwrap();
        let traj = run_episode(&mut env, &mut policy, 50).unwrap();
        assert!(traj.steps.iter().all(|s| s.arm == 0));
        assert_eq!(traj.cumulative_regret(), 0.0);
    }

    #[test]
    fn zero_parameter_means_zero_regret() {
        let mut env = LinearBanditEnv::new(
            vec![0.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]],
            0.5,
            3,
        )
        .unwrap();
        let mut policy = GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(1.0)).unwrap();
        let traj = run_episode(&mut env, &mut policy, 100).unwrap();
        assert!(regret_curve(&traj).iter().all(|&(_, r)| r == 0.0));
    }

    #[test]
    fn estimate_matches_normal_equations() {
        let mut policy = GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(0.0)).unwrap();
        policy.update(&[1.0, 0.0], 2.0).unwrap();
        policy.update(&[0.0, 1.0], -1.0).unwrap();
        policy.update(&[1.0, 0.0], 2.0).unwrap();
        // V = diag(3, 2), b = (4, -1)
        let theta = policy.estimate();
        assert!((theta[0] - 4.0 / 3.0).abs() < 1e-14);
        assert!((theta[1] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn ties_break_to_lowest_index() {
        assert_eq!(argmax_first([1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax_first([0.0, 0.0]), Some(0));
        assert_eq!(argmax_first(std::iter::empty()), None);
    }

    #[test]
    fn schedules() {
        assert_eq!(ConfidenceSchedule::Constant(0.7).width(100), 0.7);
        let s = ConfidenceSchedule::SqrtLog(2.0);
        assert!((s.width(1) - 2.0 * 2f64.ln().sqrt()).abs() < 1e-15);
        assert_eq!(s.max_width(10), s.width(10));
        assert!(GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(-1.0)).is_err());
    }

    #[test]
    fn env_validation() {
        assert!(LinearBanditEnv::new(vec![2.0], vec![vec![1.0]], 0.0, 0).is_err());
        assert!(LinearBanditEnv::new(vec![1.0], vec![vec![1.5]], 0.0, 0).is_err());
        assert!(LinearBanditEnv::new(vec![1.0], vec![], 0.0, 0).is_err());
        assert!(LinearBanditEnv::new(vec![1.0, 0.0], vec![vec![1.0]], 0.0, 0).is_err());
    }

    #[test]
    fn dimension_mismatch_between_env_and_policy() {
        let mut env = two_arm_env(0.0);
        let mut policy = GeneralizedLinUcb::new(3, 1.0, 1.0, ConfidenceSchedule::Constant(0.0)).unwrap();
        assert!(matches!(
            run_episode(&mut env, &mut policy, 5),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
