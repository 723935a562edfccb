//! Observation sequences used by experiments and property sweeps.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::bounds::lower_bound_sequence;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Uniform directions on the unit sphere.
    RandomUnit,
    /// Uniform directions with a uniform radius in `[0, 1)`.
    RandomSubunit,
    /// `e_1, e_2, …, e_d, e_1, …`
    Axis,
    /// `√(1/T)·e_1` at every step.
    ConstantLowerBound,
    /// One random unit vector repeated `T` times.
    Repeated,
    /// Vectors read from a text file, one per line.
    FromFile(PathBuf),
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random-unit" => Self::RandomUnit,
            "random-subunit" => Self::RandomSubunit,
            "axis" => Self::Axis,
            "constant-lower-bound" => Self::ConstantLowerBound,
            "repeated" => Self::Repeated,
            other => match other.strip_prefix("from-file:") {
                Some(path) if !path.is_empty() => Self::FromFile(PathBuf::from(path)),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown sequence kind `{other}` (expected random-unit, random-subunit, \
                         axis, constant-lower-bound, repeated or from-file:PATH)"
                    )))
                }
            },
        })
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RandomUnit => f.write_str("random-unit"),
            Self::RandomSubunit => f.write_str("random-subunit"),
            Self::Axis => f.write_str("axis"),
            Self::ConstantLowerBound => f.write_str("constant-lower-bound"),
            Self::Repeated => f.write_str("repeated"),
            Self::FromFile(p) => write!(f, "from-file:{}", p.display()),
        }
    }
}

/// Generates `horizon` vectors of dimension `dim`. File-backed kinds are
/// resolved by the caller through [`parse_sequence_text`].
pub fn generate(kind: &SequenceKind, dim: usize, horizon: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if dim == 0 || horizon == 0 {
        return Err(Error::InvalidParameter("dimension and horizon must be >= 1".into()));
    }
    let mut draw = rng::seeded(seed);
    Ok(match kind {
        SequenceKind::RandomUnit => (0..horizon)
            .map(|_| rng::random_unit_vector(&mut draw, dim))
            .collect(),
        SequenceKind::RandomSubunit => (0..horizon)
            .map(|_| rng::random_subunit_vector(&mut draw, dim))
            .collect(),
        SequenceKind::Axis => (0..horizon)
            .map(|t| {
                let mut e = vec![0.0; dim];
                e[t % dim] = 1.0;
                e
            })
            .collect(),
        SequenceKind::ConstantLowerBound => lower_bound_sequence(horizon)
            .into_iter()
            .map(|x| {
                let mut e = vec![0.0; dim];
                e[0] = x;
                e
            })
            .collect(),
        SequenceKind::Repeated => vec![rng::random_unit_vector(&mut draw, dim); horizon],
        SequenceKind::FromFile(path) => {
            return Err(Error::InvalidParameter(format!(
                "sequence file {} must be read by the caller",
                path.display()
            )))
        }
    })
}

/// One vector per line, components separated by commas and/or whitespace.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_sequence_text(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("line {}: cannot parse `{s}`", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = out.first() {
            if first.len() != row.len() {
                return Err(Error::InvalidParameter(format!(
                    "line {}: expected {} components, found {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("sequence file contains no vectors".into()));
    }
    Ok(out)
}
