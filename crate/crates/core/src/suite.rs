//! Randomized falsification suite over every checkable inequality.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::accumulator::Convention;
use crate::bounds::{epl_upper_bound, increment_bound_check, run_sequence, sandwich_from};
use crate::error::Result;
use crate::linalg::{random_orthogonal, sym_eig, trace_rotation_check, weyl_check, WEYL_TOLERANCE};
use crate::parallel::map_trials;
use crate::rng;
use crate::sequences::{generate, SequenceKind};
use crate::verifiers::{
    chain_from, integral_comparison_check, jensen_step_check, substitution_identity_check,
    PowerFamily, ProofStepReport,
};

pub const CHECK_NAMES: [&str; 9] = [
    "weyl_check",
    "trace_rotation_check",
    "jensen_step",
    "integral_comparison",
    "increment_bound",
    "substitution_identity",
    "sandwich",
    "upper_bound",
    "proof_chain",
];

pub const UPPER_BOUND_SLACK: f64 = 1e-9;

const POWERS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
const SWEEP_POWERS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Base trial count; sequence-level checks run a fixed fraction of it.
    pub trials: usize,
    pub seed: u64,
    /// Name of a check whose verdicts are negated (harness self-test).
    #[serde(default)]
    pub inject_fault: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 20_000,
            seed: 0,
            inject_fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckCount {
    pub step: String,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub failures: usize,
    /// Tightest (or first failing) instance of each check.
    pub reports: Vec<ProofStepReport>,
    pub checks: Vec<CheckCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct TrialOutcome {
    seed: u64,
    reports: Vec<ProofStepReport>,
}

fn normalized_slack(r: &ProofStepReport) -> f64 {
    r.slack / r.rhs.abs().max(1.0)
}

fn summarize(name: &str, outcomes: Vec<TrialOutcome>, flip: bool) -> (ProofStepReport, CheckCount, Option<String>) {
    let mut trials = 0;
    let mut failures = 0;
    let mut worst: Option<ProofStepReport> = None;
    let mut first_failure = None;
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        for (k, mut r) in outcome.reports.into_iter().enumerate() {
            if flip {
                r.pass = !r.pass;
            }
            trials += 1;
            if !r.pass {
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(format!(
                        "{name}: trial {trial} (seed {}) step {k}: lhs {} > rhs {}",
                        outcome.seed, r.lhs, r.rhs
                    ));
                }
            }
            let replace = match &worst {
                None => true,
                Some(w) if w.pass && !r.pass => true,
                Some(w) if w.pass == r.pass => normalized_slack(&r) < normalized_slack(w),
                _ => false,
            };
            if replace {
                worst = Some(r);
            }
        }
    }
    let mut worst = worst.unwrap_or_else(|| ProofStepReport::inequality(name, 0.0, 0.0, 0.0));
    worst.step = name.to_owned();
    (
        worst,
        CheckCount {
            step: name.to_owned(),
            trials,
            failures,
        },
        first_failure,
    )
}

fn trials_for(name: &str, base: usize) -> usize {
    let n = match name {
        "increment_bound" | "substitution_identity" => base / 20,
        "sandwich" | "upper_bound" => base / 10,
        "proof_chain" => base / 40,
        _ => base,
    };
    n.max(1)
}

fn run_check(name: &str, seed: u64) -> Result<Vec<ProofStepReport>> {
    let mut draw = rng::seeded(seed);
    match name {
        "weyl_check" => {
            let d = draw.random_range(1..=8);
            let m = if draw.random_bool(0.5) {
                rng::random_spd(&mut draw, d)
            } else {
                rng::random_symmetric(&mut draw, d)
            };
            let u = rng::random_subunit_vector(&mut draw, d);
            let before = sym_eig(&m)?;
            let mut next = m.clone();
            next.add_outer(&u)?;
            let after = sym_eig(&next)?;
            let outcome = weyl_check(&before, &after);
            let worst = outcome
                .margins
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let mut r = ProofStepReport::inequality(
                "weyl_check",
                before.eigenvalues()[worst],
                after.eigenvalues()[worst],
                WEYL_TOLERANCE * after.largest().max(1.0),
            );
            r.pass = outcome.holds;
            Ok(vec![r])
        }
        "trace_rotation_check" => {
            let d = draw.random_range(1..=6);
            let sorted = |rng: &mut rng::SeededRng| {
                let mut v: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..10.0)).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                v
            };
            let s = sorted(&mut draw);
            let sp = sorted(&mut draw);
            let q = random_orthogonal(d, draw.random());
            let r = random_orthogonal(d, draw.random());
            let out = trace_rotation_check(&s, &sp, &q, &r)?;
            let (lhs, rhs) = if out.middle - out.lower < out.upper - out.middle {
                (out.lower, out.middle)
            } else {
                (out.middle, out.upper)
            };
            let mut rep = ProofStepReport::inequality("trace_rotation_check", lhs, rhs, 0.0);
            rep.pass = out.holds;
            Ok(vec![rep])
        }
        "jensen_step" => {
            let len = draw.random_range(1..=50);
            let a: Vec<f64> = if draw.random_bool(0.1) {
                vec![draw.random_range(0.0..5.0); len]
            } else {
                (0..len).map(|_| draw.random_range(0.0..5.0)).collect()
            };
            Ok(vec![jensen_step_check(&a)?])
        }
        "integral_comparison" => {
            let len = draw.random_range(1..=100);
            let ridge = [0.5, 1.0, 2.0][draw.random_range(0..3)];
            let p = [0.5, 1.0, 1.5, 2.0, 2.5, 5.0][draw.random_range(0..6)];
            let eps: Vec<f64> = (0..len).map(|_| draw.random_range(0.0..1.0)).collect();
            Ok(vec![integral_comparison_check(&eps, ridge, PowerFamily::new(p)?)?])
        }
        "increment_bound" | "substitution_identity" => {
            let d = draw.random_range(1..=8);
            let p = POWERS[draw.random_range(0..POWERS.len())];
            let ridge = [0.5, 1.0, 2.0][draw.random_range(0..3)];
            let seq = generate(&SequenceKind::RandomSubunit, d, 20, draw.random())?;
            let acc = run_sequence(&seq, ridge, p)?;
            if name == "increment_bound" {
                (1..=seq.len())
                    .map(|t| {
                        let o = increment_bound_check(&acc, t, p)?;
                        let mut r = ProofStepReport::inequality(name, o.lhs, o.rhs, 0.0);
                        r.pass = o.holds;
                        Ok(r)
                    })
                    .collect()
            } else {
                let mut out = Vec::new();
                for t in 0..=seq.len() {
                    for i in 0..d {
                        out.push(substitution_identity_check(&acc, i, t)?);
                    }
                }
                Ok(out)
            }
        }
        "sandwich" => {
            let d = draw.random_range(1..=5);
            let p = POWERS[draw.random_range(0..POWERS.len())];
            let ridge = [1.0, 2.0][draw.random_range(0..2)];
            let horizon = draw.random_range(1..=50);
            let seq = generate(&SequenceKind::RandomUnit, d, horizon, draw.random())?;
            let acc = run_sequence(&seq, ridge, p)?;
            let o = sandwich_from(&acc, p);
            let upper = 2f64.powf(p / 2.0) * o.sum_next;
            let mut r = ProofStepReport::inequality(name, o.sum_current, upper, 0.0);
            r.pass = o.holds;
            Ok(vec![r])
        }
        "upper_bound" => {
            let d = draw.random_range(1..=8);
            let horizon = draw.random_range(1..=100);
            let ridge = [1.0, 2.0][draw.random_range(0..2)];
            let kind = [
                SequenceKind::RandomUnit,
                SequenceKind::RandomSubunit,
                SequenceKind::Axis,
                SequenceKind::Repeated,
            ][draw.random_range(0..4)]
            .clone();
            let seq = generate(&kind, d, horizon, draw.random())?;
            let acc = run_sequence(&seq, ridge, 1.0)?;
            SWEEP_POWERS
                .iter()
                .map(|&p| {
                    let sum = acc.norm_sum(p, Convention::Next)?;
                    let bound = epl_upper_bound(horizon, d, ridge, p)?;
                    Ok(ProofStepReport::inequality(name, sum, bound, UPPER_BOUND_SLACK))
                })
                .collect()
        }
        "proof_chain" => {
            let d = draw.random_range(1..=5);
            let p = [0.5, 1.0, 2.0, 2.5][draw.random_range(0..4)];
            let ridge = [0.5, 1.0, 2.0][draw.random_range(0..3)];
            let horizon = draw.random_range(1..=50);
            let seq = generate(&SequenceKind::RandomUnit, d, horizon, draw.random())?;
            chain_from(&run_sequence(&seq, ridge, p)?, p)
        }
        other => unreachable!("unknown check {other}"),
    }
}

/// Runs every check in [`CHECK_NAMES`]; trials fan out through
/// [`map_trials`] with per-trial seeds derived from `config.seed`.
pub fn run_verify(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    let mut first_failure = None;
    for (c, name) in CHECK_NAMES.iter().enumerate() {
        let base = rng::derive_seed(config.seed, c as u64);
        let n = trials_for(name, config.trials);
        let outcomes = map_trials(n, |k| {
            let seed = rng::derive_seed(base, k as u64);
            run_check(name, seed).map(|reports| TrialOutcome { seed, reports })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let flip = config.inject_fault.as_deref() == Some(*name);
        let (worst, count, failure) = summarize(name, outcomes, flip);
        if first_failure.is_none() {
            first_failure = failure;
        }
        reports.push(worst);
        checks.push(count);
    }
    Ok(SuiteReport {
        suite: "verify".to_owned(),
        trials: checks.iter().map(|c| c.trials).sum(),
        failures: checks.iter().map(|c| c.failures).sum(),
        reports,
        checks,
        first_failure,
    })
}
