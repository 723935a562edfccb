use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

use super::matrix::{dot, SquareMatrix};

pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

/// A real orthogonal matrix, `‖QᵀQ − I‖_max ≤ 1e-10`. Determinant may be ±1.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix(SquareMatrix);

impl OrthogonalMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        let defect = m.orthogonality_defect();
        if defect > ORTHOGONALITY_TOLERANCE {
            return Err(Error::Domain(format!(
                "matrix is not orthogonal (‖QᵀQ − I‖_max = {defect:e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(SquareMatrix::identity(dim))
    }

    /// Planar rotation by `angle` radians.
    pub fn rotation_2d(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(SquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => c,
            (0, 1) => -s,
            _ => s,
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// Samples an orthogonal matrix by Gram-Schmidt on a seeded Gaussian matrix.
///
/// Each column is orthogonalized twice, which keeps `‖QᵀQ − I‖` at roundoff
/// level. Taking the positive-diagonal QR factor makes the law Haar.
pub fn random_orthogonal(dim: usize, seed: u64) -> OrthogonalMatrix {
    assert!(dim >= 1, "random_orthogonal needs dim >= 1");
    let mut rng = rng::seeded(seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut c: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = dot(q, &c);
                for (ci, qi) in c.iter_mut().zip(q) {
                    *ci -= proj * qi;
                }
            }
        }
        let norm = dot(&c, &c).sqrt();
        // a rank-deficient draw has probability zero; resample if it happens
        if norm < 1e-8 {
            continue;
        }
        c.iter_mut().for_each(|x| *x /= norm);
        cols.push(c);
    }
    OrthogonalMatrix(SquareMatrix::from_fn(dim, |i, j| cols[j][i]))
}
