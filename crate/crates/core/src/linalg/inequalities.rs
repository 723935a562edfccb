//! Weyl monotonicity and the Von Neumann trace corollary as predicates.

use crate::error::{check_dim, Error, Result};

use super::eig::SymEig;
use super::matrix::SquareMatrix;
use super::orthogonal::OrthogonalMatrix;

pub const WEYL_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WeylOutcome {
    pub holds: bool,
    /// `λ_i(after) − λ_i(before)` per index.
    pub margins: Vec<f64>,
}

impl WeylOutcome {
    pub fn worst_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Checks `λ_i(after) ≥ λ_i(before)` for every `i` when `after` came from
/// `before` plus a positive semidefinite perturbation.
pub fn weyl_check(before: &SymEig, after: &SymEig) -> WeylOutcome {
    assert_eq!(before.dim(), after.dim(), "weyl_check on mismatched dimensions");
    let margins: Vec<f64> = after
        .eigenvalues()
        .iter()
        .zip(before.eigenvalues())
        .map(|(a, b)| a - b)
        .collect();
    let tol = WEYL_TOLERANCE * after.largest().max(1.0);
    let holds = margins.iter().all(|&m| m >= -tol);
    WeylOutcome { holds, margins }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceOutcome {
    /// `Tr(Σ⁻¹ Σ')`
    pub lower: f64,
    /// `Tr(Q Σ⁻¹ Qᵀ R Σ' Rᵀ)`
    pub middle: f64,
    /// `Tr(Σ⁻¹ Σ'')` with `Σ''` the reversed `Σ'`
    pub upper: f64,
    pub holds: bool,
}

/// Evaluates `Tr(Σ⁻¹Σ') ≤ Tr(QΣ⁻¹QᵀRΣ'Rᵀ) ≤ Tr(Σ⁻¹Σ'')`.
///
/// `sigma` and `sigma_prime` are the positive diagonals, both non-increasing.
pub fn trace_rotation_check(
    sigma: &[f64],
    sigma_prime: &[f64],
    q: &OrthogonalMatrix,
    r: &OrthogonalMatrix,
) -> Result<TraceOutcome> {
    let d = sigma.len();
    check_dim(d, sigma_prime.len())?;
    check_dim(d, q.dim())?;
    check_dim(d, r.dim())?;
    for diag in [sigma, sigma_prime] {
        if let Some((i, &v)) = diag.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Domain(format!("diagonal entry {i} is not positive ({v})")));
        }
        if diag.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain("diagonal entries must be non-increasing".into()));
        }
    }

    let inv: Vec<f64> = sigma.iter().map(|s| 1.0 / s).collect();
    let lower: f64 = inv.iter().zip(sigma_prime).map(|(a, b)| a * b).sum();
    let upper: f64 = inv.iter().zip(sigma_prime.iter().rev()).map(|(a, b)| a * b).sum();

    let a = conjugate(q.as_matrix(), &inv);
    let b = conjugate(r.as_matrix(), sigma_prime);
    // Tr(AB) for symmetric A, B is the entrywise inner product
    let middle: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum();

    let tol = TRACE_TOLERANCE * upper.abs().max(f64::MIN_POSITIVE);
    let holds = lower <= middle + tol && middle <= upper + tol;
    Ok(TraceOutcome {
        lower,
        middle,
        upper,
        holds,
    })
}

/// `Q diag(values) Qᵀ`
fn conjugate(q: &SquareMatrix, values: &[f64]) -> SquareMatrix {
    let d = q.dim();
    SquareMatrix::from_fn(d, |i, j| (0..d).map(|k| q[(i, k)] * values[k] * q[(j, k)]).sum())
}
