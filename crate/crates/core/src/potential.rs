//! Elliptical potentials `φ_{M,p}(u) = ½ uᵀ M^p u` and the weighted norms
//! `‖u‖_{M^{-p}}` they induce.
//!
//! Everything is evaluated in the eigenbasis of `M`: `u` is rotated once into
//! `ũ = Pᵀu` and the quadratic form becomes `Σ ũ_i² λ_i^{±p}`, so `M^p` is
//! never formed explicitly.

use crate::error::{check_dim, Error, Result};
use crate::linalg::SymEig;

/// A decomposed positive definite matrix together with an exponent `p > 0`.
#[derive(Clone, Copy, Debug)]
pub struct PotentialSpec<'a> {
    source: &'a SymEig,
    power: f64,
}

impl<'a> PotentialSpec<'a> {
    pub fn new(source: &'a SymEig, power: f64) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "potential exponent must be a positive real, got {power}"
            )));
        }
        if !(source.smallest() > 0.0) {
            return Err(Error::Domain(format!(
                "potential source must be positive definite (smallest eigenvalue {})",
                source.smallest()
            )));
        }
        Ok(Self { source, power })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn source(&self) -> &'a SymEig {
        self.source
    }

    /// `Σ_i ũ_i² · λ_i^exponent`.
    fn spectral_form(&self, u: &[f64], exponent: f64) -> Result<f64> {
        check_dim(self.source.dim(), u.len())?;
        let rotated = self.source.to_eigenbasis(u)?;
        Ok(rotated
            .iter()
            .zip(self.source.eigenvalues())
            .map(|(c, l)| c * c * l.powf(exponent))
            .sum())
    }

    /// `½ uᵀ M^p u`
    pub fn phi(&self, u: &[f64]) -> Result<f64> {
        Ok(0.5 * self.spectral_form(u, self.power)?)
    }

    /// `‖u‖²_{M^{-p}} = uᵀ M^{-p} u`
    pub fn squared_weighted_norm(&self, u: &[f64]) -> Result<f64> {
        self.spectral_form(u, -self.power)
    }

    /// `‖u‖_{M^{-p}} = √(uᵀ M^{-p} u)`
    pub fn weighted_norm(&self, u: &[f64]) -> Result<f64> {
        self.squared_weighted_norm(u).map(f64::sqrt)
    }

    /// `½ ‖u‖_{M^{-p}}`, the dual potential in its square-root form.
    pub fn dual_phi(&self, u: &[f64]) -> Result<f64> {
        Ok(0.5 * self.weighted_norm(u)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sym_eig, SymMatrix};

    fn eig(diag: &[f64]) -> SymEig {
        sym_eig(&SymMatrix::diagonal(diag)).unwrap()
    }

    #[test]
    fn phi_identity() {
        let e = eig(&[1.0, 1.0]);
        let s = PotentialSpec::new(&e, 1.0).unwrap();
        assert_eq!(s.phi(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(s.phi(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn phi_diagonal_square() {
        let e = eig(&[4.0, 1.0]);
        let s = PotentialSpec::new(&e, 2.0).unwrap();
        assert_eq!(s.phi(&[1.0, 1.0]).unwrap(), 8.5);
    }

    #[test]
    fn weighted_norm_diagonal() {
        let e = eig(&[4.0, 1.0]);
        let s = PotentialSpec::new(&e, 1.0).unwrap();
        assert_eq!(s.weighted_norm(&[1.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn weighted_norm_identity_is_euclidean() {
        let e = eig(&[1.0, 1.0, 1.0]);
        for p in [0.3, 1.0, 4.0] {
            let s = PotentialSpec::new(&e, p).unwrap();
            assert!((s.weighted_norm(&[1.0, 2.0, 2.0]).unwrap() - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dual_phi_examples() {
        let e = eig(&[1.0, 1.0]);
        let s = PotentialSpec::new(&e, 1.0).unwrap();
        assert_eq!(s.dual_phi(&[3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(s.dual_phi(&[0.0, 0.0]).unwrap(), 0.0);
        let e = eig(&[4.0, 1.0]);
        let s = PotentialSpec::new(&e, 1.0).unwrap();
        assert_eq!(s.dual_phi(&[1.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = eig(&[1.0, 1.0]);
        assert!(PotentialSpec::new(&e, 0.0).is_err());
        assert!(PotentialSpec::new(&e, -1.0).is_err());
        let singular = eig(&[1.0, 0.0]);
        assert!(PotentialSpec::new(&singular, 1.0).is_err());
        let s = PotentialSpec::new(&e, 1.0).unwrap();
        assert!(matches!(
            s.weighted_norm(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }
}
