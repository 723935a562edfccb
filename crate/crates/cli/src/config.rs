use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::CliError;

/// Parameters shared by every command. Any field may come from the JSON
/// config file; flags override the file.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// JSON experiment descriptor; flags take precedence over its fields
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Dimension d
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Horizon T
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Ridge λ
    #[arg(long, global = true)]
    pub ridge: Option<f64>,
    /// Exponent p (repeatable)
    #[arg(long = "power", global = true, allow_negative_numbers = true)]
    pub powers: Vec<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// random-unit, random-subunit, axis, constant-lower-bound, repeated or from-file:PATH
    #[arg(long, global = true)]
    pub sequence: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Number of random arms (bandit)
    #[arg(long, global = true)]
    pub arms: Option<usize>,
    /// Reward noise scale σ (bandit)
    #[arg(long, global = true)]
    pub noise: Option<f64>,
    /// Confidence width scale β (bandit)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// constant or sqrt-log (bandit)
    #[arg(long = "beta-schedule", global = true)]
    pub beta_schedule: Option<String>,
    #[arg(long = "inject-fault", global = true, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: Option<usize>,
    pub horizon: Option<usize>,
    pub ridge: Option<f64>,
    #[serde(default)]
    pub powers: Vec<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub sequence: Option<String>,
    pub out: Option<PathBuf>,
    pub arms: Option<usize>,
    pub noise: Option<f64>,
    pub beta: Option<f64>,
    pub beta_schedule: Option<String>,
    /// Explicit arm set; requires `theta`.
    pub arm_set: Option<Vec<Vec<f64>>>,
    pub theta: Option<Vec<f64>>,
    pub inject_fault: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))
    }

    /// Loads `--config` if given and applies the flag overrides on top.
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { cfg.$field = flags.$field.clone(); })*
            };
        }
        take!(dim, horizon, ridge, seed, trials, sequence, out, arms, noise, beta, beta_schedule, inject_fault);
        if !flags.powers.is_empty() {
            cfg.powers = flags.powers.clone();
        }
        Ok(cfg)
    }

    pub fn powers_or(&self, default: &[f64]) -> Vec<f64> {
        if self.powers.is_empty() {
            default.to_vec()
        } else {
            self.powers.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_win_over_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"dim": 3, "horizon": 50, "powers": [0.5, 2]}}"#).unwrap();
        let flags = Overrides {
            config: Some(file.path().to_path_buf()),
            horizon: Some(10),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.dim, Some(3));
        assert_eq!(cfg.horizon, Some(10));
        assert_eq!(cfg.powers, vec![0.5, 2.0]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"dimension": 3}}"#).unwrap();
        let flags = Overrides {
            config: Some(file.path().to_path_buf()),
            ..Default::default()
        };
        assert!(matches!(ExperimentConfig::resolve(&flags), Err(CliError::Usage(_))));
    }
}
