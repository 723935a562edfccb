//! Cyclic Jacobi eigensolver for dense symmetric matrices and spectral
//! matrix functions built on top of it.

use crate::error::{check_dim, Error, Result};

use super::matrix::{SquareMatrix, SymMatrix};

/// Sweeps stop once every off-diagonal entry is below this fraction of `‖M‖_F`.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
/// Rotation budget is `ROTATION_CAP_FACTOR · d²`.
pub const ROTATION_CAP_FACTOR: usize = 50;
/// Eigenvalues in `[-CLAMP_FRACTION·λ₁, 0]` are treated as roundoff.
pub const CLAMP_FRACTION: f64 = 1e-12;

/// Eigendecomposition `M = P diag(λ) Pᵀ` with eigenvalues non-increasing
/// and the columns of `P` ordered to match.
#[derive(Clone, Debug, PartialEq)]
pub struct SymEig {
    eigenvalues: Vec<f64>,
    basis: SquareMatrix,
}

impl SymEig {
    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &SquareMatrix {
        &self.basis
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// Coordinates of `u` in the eigenbasis, `Pᵀ u`.
    pub fn to_eigenbasis(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.basis.transpose_matvec(u)
    }

    /// `P diag(values) Pᵀ`.
    pub fn compose(&self, values: &[f64]) -> Result<SymMatrix> {
        check_dim(self.dim(), values.len())?;
        let d = self.dim();
        let p = &self.basis;
        let m = SquareMatrix::from_fn(d, |i, j| {
            (0..d).map(|k| p[(i, k)] * values[k] * p[(j, k)]).sum()
        });
        Ok(SymMatrix::symmetrize(m))
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.compose(&self.eigenvalues)
            .expect("eigenvalue count matches basis")
    }

    /// `λ_i^p` for every eigenvalue.
    ///
    /// Non-negative integer exponents accept any spectrum. Any other exponent
    /// needs a positive spectrum; values in `[-1e-12·λ₁, 0]` are clamped to
    /// `1e-12·λ₁` first and anything smaller is a domain error.
    pub fn spectral_powers(&self, p: f64) -> Result<Vec<f64>> {
        if !p.is_finite() {
            return Err(Error::Domain(format!("exponent must be finite, got {p}")));
        }
        if p >= 0.0 && p.fract() == 0.0 && p <= i32::MAX as f64 {
            let k = p as i32;
            return Ok(self.eigenvalues.iter().map(|l| l.powi(k)).collect());
        }
        let floor = CLAMP_FRACTION * self.largest();
        if floor <= 0.0 {
            return Err(Error::Domain(format!(
                "fractional or negative power {p} of a matrix with largest eigenvalue {}",
                self.largest()
            )));
        }
        self.eigenvalues
            .iter()
            .map(|&l| {
                if l > 0.0 {
                    Ok(l.powf(p))
                } else if l >= -floor {
                    Ok(floor.powf(p))
                } else {
                    Err(Error::Domain(format!(
                        "eigenvalue {l} is not positive; power {p} undefined"
                    )))
                }
            })
            .collect()
    }
}

/// Decomposes a symmetric matrix with cyclic Jacobi rotations.
///
/// Deterministic for a fixed input. Ties are ordered by their position on
/// the converged diagonal.
pub fn sym_eig(m: &SymMatrix) -> Result<SymEig> {
    let d = m.dim();
    if d == 0 {
        return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
    }
    let mut a = m.as_matrix().clone();
    let mut v = SquareMatrix::identity(d);

    let tol = OFF_DIAGONAL_TOLERANCE * a.frobenius_norm();
    let cap = ROTATION_CAP_FACTOR * d * d;
    let mut rotations = 0usize;

    loop {
        let off = max_off_diagonal(&a);
        if off <= tol {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                if apq.abs() <= tol {
                    continue;
                }
                if rotations >= cap {
                    return Err(Error::NotConverged {
                        rotations,
                        off_diagonal: max_off_diagonal(&a),
                    });
                }
                rotate(&mut a, &mut v, p, q);
                rotations += 1;
            }
        }
    }

    let diag: Vec<f64> = (0..d).map(|i| a[(i, i)]).collect();
    let mut order: Vec<usize> = (0..d).collect();
    // stable: equal eigenvalues keep their diagonal order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let basis = SquareMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(SymEig { eigenvalues, basis })
}

/// `M^p = P diag(λ_i^p) Pᵀ`, computed spectrally for any real `p`.
pub fn mat_power(eig: &SymEig, p: f64) -> Result<SymMatrix> {
    eig.compose(&eig.spectral_powers(p)?)
}

fn max_off_diagonal(a: &SquareMatrix) -> f64 {
    let d = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            worst = worst.max(a[(i, j)].abs());
        }
    }
    worst
}

/// Applies the rotation that annihilates `a[p][q]`, accumulating it into `v`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize) {
    let d = a.dim();
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
