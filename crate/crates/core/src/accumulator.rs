//! Running design matrix `V_t = λI + Σ_{s<t} u_s u_sᵀ`.

use std::io::{self, Write};

use crate::error::{check_dim, Error, Result};
use crate::format::fmt6;
use crate::linalg::{norm2, sym_eig, SymEig, SymMatrix};
use crate::potential::PotentialSpec;

/// Observations must satisfy `‖u‖₂ ≤ 1 + NORM_SLACK`.
pub const NORM_SLACK: f64 = 1e-12;
/// Increments above `-INCREMENT_TOLERANCE·λ₁(t+1)` count as roundoff.
pub const INCREMENT_TOLERANCE: f64 = 1e-10;

pub const CSV_HEADER: &str = "t,i,lambda_i,eps_sq_i,norm_before,norm_after";

/// Which design matrix the summand `‖u_t‖_{V^{-p}}` is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `V_t`, before `u_t` is added.
    Current,
    /// `V_{t+1}`, after `u_t` is added.
    Next,
}

/// `‖u_t‖_{V_t^{-p}}` and `‖u_t‖_{V_{t+1}^{-p}}` for one observation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormPair {
    pub before: f64,
    pub after: f64,
}

/// Single-owner accumulator. Keeps the decomposition of every `V_s` so any
/// exponent can be evaluated against the history after the fact.
#[derive(Clone, Debug)]
pub struct DesignAccumulator {
    ridge: f64,
    power: f64,
    matrix: SymMatrix,
    /// `history[s - 1]` decomposes `V_s`.
    history: Vec<SymEig>,
    observations: Vec<Vec<f64>>,
    norms: Vec<NormPair>,
}

impl DesignAccumulator {
    /// Starts at `t = 1` with `V_1 = λI` and exponent `p = 1`.
    pub fn new(dim: usize, ridge: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(ridge > 0.0 && ridge.is_finite()) {
            return Err(Error::Domain(format!("ridge must be positive, got {ridge}")));
        }
        let matrix = SymMatrix::scaled_identity(dim, ridge);
        let eig = sym_eig(&matrix)?;
        Ok(Self {
            ridge,
            power: 1.0,
            matrix,
            history: vec![eig],
            observations: Vec::new(),
            norms: Vec::new(),
        })
    }

    /// Sets the exponent used by [`observe`](Self::observe).
    pub fn with_power(mut self, power: f64) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponent must be a positive real, got {power}"
            )));
        }
        self.power = power;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Current step `t`; `V_t` has absorbed `t − 1` observations.
    pub fn step(&self) -> usize {
        self.history.len()
    }

    pub fn design_matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn current(&self) -> &SymEig {
        self.history.last().expect("history starts with V_1")
    }

    /// Potential with the configured exponent on the current `V_t`.
    pub fn potential(&self) -> PotentialSpec<'_> {
        PotentialSpec::new(self.current(), self.power).expect("V_t is positive definite")
    }

    pub fn observations(&self) -> &[Vec<f64>] {
        &self.observations
    }

    pub fn norms(&self) -> &[NormPair] {
        &self.norms
    }

    /// Adds `u` and returns both summands for the configured exponent.
    ///
    /// Rejects `‖u‖₂ > 1 + 1e-12` and leaves the state untouched on error.
    pub fn observe(&mut self, u: &[f64]) -> Result<NormPair> {
        check_dim(self.dim(), u.len())?;
        let norm = norm2(u);
        if !(norm <= 1.0 + NORM_SLACK) {
            return Err(Error::NormViolation {
                index: self.step(),
                norm,
            });
        }
        let before = self.potential().weighted_norm(u)?;

        let mut next = self.matrix.clone();
        next.add_outer(u)?;
        let eig = sym_eig(&next)?;
        let after = PotentialSpec::new(&eig, self.power)?.weighted_norm(u)?;

        self.matrix = next;
        self.history.push(eig);
        self.observations.push(u.to_vec());
        let pair = NormPair { before, after };
        self.norms.push(pair);
        Ok(pair)
    }

    /// Decomposition of `V_t`, `1 ≤ t ≤ step`.
    pub fn decomposition(&self, t: usize) -> Result<&SymEig> {
        if t == 0 || t > self.history.len() {
            return Err(Error::OutOfRange {
                what: "design step",
                index: t,
                valid: format!("1..={}", self.history.len()),
            });
        }
        Ok(&self.history[t - 1])
    }

    /// `λ_1(t) ≥ … ≥ λ_d(t)`.
    pub fn eigenvalues(&self, t: usize) -> Result<&[f64]> {
        Ok(self.decomposition(t)?.eigenvalues())
    }

    /// Copy of every `λ(s)` for `s = 1..=step`.
    pub fn eigenvalue_history(&self) -> Vec<Vec<f64>> {
        self.history.iter().map(|e| e.eigenvalues().to_vec()).collect()
    }

    /// `u_t`, `1 ≤ t < step`.
    pub fn observation(&self, t: usize) -> Result<&[f64]> {
        self.check_observed(t)?;
        Ok(&self.observations[t - 1])
    }

    fn check_observed(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.observations.len() {
            return Err(Error::OutOfRange {
                what: "observation step",
                index: t,
                valid: format!("1..={}", self.observations.len()),
            });
        }
        Ok(())
    }

    /// `λ_i(t+1) − λ_i(t)` as computed, roundoff negatives included.
    pub fn raw_increments(&self, t: usize) -> Result<Vec<f64>> {
        self.check_observed(t)?;
        let before = self.history[t - 1].eigenvalues();
        let after = self.history[t].eigenvalues();
        Ok(after.iter().zip(before).map(|(a, b)| a - b).collect())
    }

    /// `ε²_{i,t} = λ_i(t+1) − λ_i(t)`, clamped at zero.
    ///
    /// A decrease beyond `1e-10·λ₁(t+1)` contradicts Weyl's inequality and is
    /// reported as a domain error.
    pub fn eigenvalue_increments(&self, t: usize) -> Result<Vec<f64>> {
        let raw = self.raw_increments(t)?;
        let tol = INCREMENT_TOLERANCE * self.history[t].largest();
        raw.into_iter()
            .enumerate()
            .map(|(i, e)| {
                if e >= 0.0 {
                    Ok(e)
                } else if e >= -tol {
                    Ok(0.0)
                } else {
                    Err(Error::Domain(format!(
                        "eigenvalue {i} decreased by {} at step {t}",
                        -e
                    )))
                }
            })
            .collect()
    }

    /// `‖u_t‖²` against `V_t^{-p}` or `V_{t+1}^{-p}` for any `p > 0`.
    pub fn squared_norm(&self, t: usize, power: f64, convention: Convention) -> Result<f64> {
        self.check_observed(t)?;
        let eig = match convention {
            Convention::Current => &self.history[t - 1],
            Convention::Next => &self.history[t],
        };
        PotentialSpec::new(eig, power)?.squared_weighted_norm(&self.observations[t - 1])
    }

    pub fn norm(&self, t: usize, power: f64, convention: Convention) -> Result<f64> {
        self.squared_norm(t, power, convention).map(f64::sqrt)
    }

    /// `Σ_t ‖u_t‖_{V^{-p}}` over every observation.
    pub fn norm_sum(&self, power: f64, convention: Convention) -> Result<f64> {
        (1..=self.observations.len())
            .map(|t| self.norm(t, power, convention))
            .sum()
    }

    /// `λI + Σ u_s u_sᵀ` recomputed from the observation log.
    pub fn rebuild(&self) -> SymMatrix {
        let mut m = SymMatrix::scaled_identity(self.dim(), self.ridge);
        for u in &self.observations {
            m.add_outer(u).expect("logged observations match dimension");
        }
        m
    }

    /// One row per `(t, i)`: `λ_i(t+1)`, `ε²_{i,t}` and the step's two norms.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for t in 1..=self.observations.len() {
            let lambdas = self.history[t].eigenvalues();
            let eps = self
                .eigenvalue_increments(t)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            let NormPair { before, after } = self.norms[t - 1];
            for i in 0..self.dim() {
                writeln!(
                    w,
                    "{t},{},{},{},{},{}",
                    i + 1,
                    fmt6(lambdas[i]),
                    fmt6(eps[i]),
                    fmt6(before),
                    fmt6(after)
                )?;
            }
        }
        Ok(())
    }
}
