use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use epl_core::bandit::{run_episode, ConfidenceSchedule, GeneralizedLinUcb, LinearBanditEnv};
use epl_core::bounds::{epl_upper_bound, lower_bound_value, run_sequence, BoundRegime};
use epl_core::format::fmt6;
use epl_core::sequences::{generate, parse_sequence_text, SequenceKind};
use epl_core::suite::{run_verify, SuiteReport, VerifyConfig, UPPER_BOUND_SLACK};
use epl_core::{Convention, Error};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be a positive real, got {v}")))
    }
}

fn at_least_one(name: &str, v: usize) -> Result<usize, CliError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be >= 1")))
    }
}

/// Writes `bytes` to `path`, or to stdout when no path is configured.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("cannot write stdout: {e}"))),
    }
}

/// Summaries go to stdout unless stdout already carries the data.
fn summary(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

/// Rounds every float in a JSON tree to six decimals.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let rounded: f64 = fmt6(x).parse().unwrap_or(x);
            if let Some(num) = serde_json::Number::from_f64(rounded) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn verify_json(report: &SuiteReport) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    round_floats(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let defaults = VerifyConfig::default();
    let config = VerifyConfig {
        trials: at_least_one("trials", cfg.trials.unwrap_or(defaults.trials))?,
        seed: cfg.seed.unwrap_or(defaults.seed),
        inject_fault: cfg.inject_fault.clone(),
    };
    let report = run_verify(&config).map_err(|e| CliError::Violation(e.to_string()))?;
    emit(cfg.out.as_deref(), verify_json(&report).as_bytes())?;
    eprintln!(
        "verify: {} trials, {} failures",
        report.trials, report.failures
    );
    match report.first_failure {
        Some(first) => Err(CliError::Violation(first)),
        None => Ok(()),
    }
}

pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let horizon = at_least_one("horizon", cfg.horizon.unwrap_or(100))?;
    let dim = at_least_one("dim", cfg.dim.unwrap_or(2))?;
    let ridge = positive("ridge", cfg.ridge.unwrap_or(1.0))?;
    let powers = cfg.powers_or(&[0.5, 1.0, 2.0]);

    let mut csv = String::from("p,regime,bound\n");
    for &p in &powers {
        positive("power", p)?;
        let bound = epl_upper_bound(horizon, dim, ridge, p).map_err(usage)?;
        let regime = BoundRegime::of(p).label();
        println!("p={p}, regime {regime}, bound {}", fmt6(bound));
        csv.push_str(&format!("{p},{regime},{}\n", fmt6(bound)));
    }
    if let Some(out) = &cfg.out {
        emit(Some(out), csv.as_bytes())?;
    }
    Ok(())
}

/// `out` with `.p<power>` inserted before the extension.
fn per_power_path(out: &Path, p: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.p{p}.{}", ext.to_string_lossy()),
        None => format!("{stem}.p{p}"),
    };
    out.with_file_name(name)
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let horizon = at_least_one("horizon", cfg.horizon.unwrap_or(100))?;
    let ridge = positive("ridge", cfg.ridge.unwrap_or(1.0))?;
    let seed = cfg.seed.unwrap_or(0);
    let powers = cfg.powers_or(&[1.0]);
    for &p in &powers {
        positive("power", p)?;
    }
    let kind: SequenceKind = cfg
        .sequence
        .as_deref()
        .unwrap_or("random-unit")
        .parse()
        .map_err(usage)?;

    let sequence = match &kind {
        SequenceKind::FromFile(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            let mut seq = parse_sequence_text(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if let Some(d) = cfg.dim {
                if d != seq[0].len() {
                    return Err(CliError::Usage(format!(
                        "{} has dimension {}, --dim is {d}",
                        path.display(),
                        seq[0].len()
                    )));
                }
            }
            if cfg.horizon.is_some() {
                seq.truncate(horizon);
            }
            seq
        }
        other => {
            let dim = at_least_one("dim", cfg.dim.unwrap_or(if *other == SequenceKind::ConstantLowerBound { 1 } else { 2 }))?;
            generate(other, dim, horizon, seed).map_err(usage)?
        }
    };
    let dim = sequence[0].len();
    let horizon = sequence.len();

    let mut violated = Vec::new();
    for &p in &powers {
        let acc = run_sequence(&sequence, ridge, p).map_err(|e| match e {
            Error::NormViolation { .. } | Error::DimensionMismatch { .. } => usage(e),
            other => CliError::Violation(other.to_string()),
        })?;
        let mut csv = Vec::new();
        acc.write_csv(&mut csv)
            .map_err(|e| CliError::Violation(e.to_string()))?;
        let path = match (&cfg.out, powers.len()) {
            (Some(out), 1) => Some(out.clone()),
            (Some(out), _) => Some(per_power_path(out, p)),
            (None, _) => None,
        };
        emit(path.as_deref(), &csv)?;

        let sum = acc.norm_sum(p, Convention::Next).map_err(|e| CliError::Violation(e.to_string()))?;
        let bound = epl_upper_bound(horizon, dim, ridge, p).map_err(usage)?;
        let mut line = format!(
            "p={p} T={horizon} d={dim} lambda={ridge} sum_next={} upper_bound={} slack={}",
            fmt6(sum),
            fmt6(bound),
            fmt6(bound - sum)
        );
        if sum > bound + UPPER_BOUND_SLACK {
            violated.push(format!("p={p}: sum {sum} exceeds upper bound {bound}"));
        }
        if kind == SequenceKind::ConstantLowerBound && dim == 1 && p > 1.0 {
            let floor = lower_bound_value(horizon, ridge, p).map_err(usage)?;
            line.push_str(&format!(" lower_floor={}", fmt6(floor)));
            if sum < floor {
                violated.push(format!("p={p}: sum {sum} below lower floor {floor}"));
            }
        }
        summary(path.is_some(), &line);
    }
    match violated.is_empty() {
        true => Ok(()),
        false => Err(CliError::Violation(violated.join("; "))),
    }
}

fn schedule(cfg: &ExperimentConfig) -> Result<ConfidenceSchedule, CliError> {
    let beta = cfg.beta.unwrap_or(1.0);
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(CliError::Usage(format!("beta must be >= 0, got {beta}")));
    }
    match cfg.beta_schedule.as_deref().unwrap_or("constant") {
        "constant" => Ok(ConfidenceSchedule::Constant(beta)),
        "sqrt-log" => Ok(ConfidenceSchedule::SqrtLog(beta)),
        other => Err(CliError::Usage(format!(
            "unknown beta schedule `{other}` (expected constant or sqrt-log)"
        ))),
    }
}

pub fn cmd_bandit(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let horizon = at_least_one("horizon", cfg.horizon.unwrap_or(2000))?;
    let ridge = positive("ridge", cfg.ridge.unwrap_or(1.0))?;
    let seed = cfg.seed.unwrap_or(37);
    let noise = cfg.noise.unwrap_or(0.1);
    let powers = cfg.powers_or(&[1.0]);
    if powers.len() != 1 {
        return Err(CliError::Usage("bandit takes exactly one --power".into()));
    }
    let p = positive("power", powers[0])?;

    let mut env = match (&cfg.arm_set, &cfg.theta) {
        (Some(arms), Some(theta)) => LinearBanditEnv::new(theta.clone(), arms.clone(), noise, seed),
        (None, None) => LinearBanditEnv::random(
            at_least_one("dim", cfg.dim.unwrap_or(2))?,
            at_least_one("arms", cfg.arms.unwrap_or(5))?,
            noise,
            seed,
        ),
        _ => return Err(CliError::Usage("arm_set and theta must be given together".into())),
    }
    .map_err(usage)?;
    let dim = env.dim();
    if let Some(d) = cfg.dim {
        if d != dim {
            return Err(CliError::Usage(format!("arm set has dimension {dim}, --dim is {d}")));
        }
    }

    let mut policy = GeneralizedLinUcb::new(dim, ridge, p, schedule(cfg)?).map_err(usage)?;
    let traj = run_episode(&mut env, &mut policy, horizon).map_err(usage)?;

    let mut csv = Vec::new();
    traj.write_csv(&mut csv)
        .map_err(|e| CliError::Io(e.to_string()))?;
    emit(cfg.out.as_deref(), &csv)?;

    let potential = traj.potential_sum();
    let ceiling = traj.potential_ceiling().map_err(usage)?;
    summary(
        cfg.out.is_some(),
        &format!(
            "T={horizon} d={dim} K={} p={p} lambda={ridge} cumulative_regret={} potential_sum={} potential_ceiling={} bonus_sum={} bonus_ceiling={}",
            env.arms().len(),
            fmt6(traj.cumulative_regret()),
            fmt6(potential),
            fmt6(ceiling),
            fmt6(traj.bonus_sum()),
            fmt6(traj.bonus_ceiling().map_err(usage)?)
        ),
    );
    if ridge >= 1.0 && potential > ceiling + UPPER_BOUND_SLACK {
        return Err(CliError::Violation(format!(
            "potential sum {potential} exceeds 2^(p/2)·bound {ceiling}"
        )));
    }
    Ok(())
}
