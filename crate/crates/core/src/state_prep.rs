//! Superposing a chosen state onto a rotated input with the extended
//! operator on the system space plus one auxiliary axis.
//!
//! In block form, with `D` the system dimension and `|aux>` the extra axis:
//!
//! ```text
//! U = [ a·R   b|x'><aux| ]
//!     [ 0     |aux><aux| ]
//! ```
//!
//! Acting on `|x> + |aux>` this yields `a R|x> + b|x'>` on the system block
//! and leaves the auxiliary amplitude at 1. When `R|x>` is orthogonal to
//! `|x'>` and `|a|² + |b|² = 1` the system part has unit norm. `U` itself is
//! not unitary on the full `D + 1` space; only that restricted use is.

use num_complex::Complex64;

use crate::amplitudes::{inner, AmplitudeVector};
use crate::error::{Error, Result};
use crate::operator::{Identity, Operator};

const COEFF_TOL: f64 = 1e-12;
const INPUT_NORM_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ExtendedOperator<R = Identity> {
    rotation: R,
    a: Complex64,
    b: Complex64,
    x_prime: AmplitudeVector,
}

impl ExtendedOperator<Identity> {
    pub fn with_identity(a: Complex64, b: Complex64, x_prime: AmplitudeVector) -> Result<Self> {
        let dim = x_prime.dim();
        Self::new(Identity::new(dim), a, b, x_prime)
    }
}

impl<R: Operator> ExtendedOperator<R> {
    pub fn new(rotation: R, a: Complex64, b: Complex64, x_prime: AmplitudeVector) -> Result<Self> {
        let residual = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if residual > COEFF_TOL {
            return Err(Error::NotNormalized { residual });
        }
        let residual = (x_prime.norm() - 1.0).abs();
        if residual > COEFF_TOL {
            return Err(Error::NotNormalized { residual });
        }
        rotation.check_dim(x_prime.dim())?;
        Ok(Self {
            rotation,
            a,
            b,
            x_prime,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_prime.dim()
    }

    /// Zero-based position of the auxiliary axis in an augmented vector.
    pub fn aux_index(&self) -> usize {
        self.dim()
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn rotation(&self) -> &R {
        &self.rotation
    }

    pub fn x_prime(&self) -> &AmplitudeVector {
        &self.x_prime
    }

    /// Applies the full `(D+1) x (D+1)` block operator to an augmented vector.
    pub fn apply_extended(&self, augmented: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dim();
        if augmented.len() != dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: augmented.len(),
            });
        }
        let aux = augmented[dim];
        let mut out = augmented[..dim].to_vec();
        self.rotation.apply_slice(&mut out);
        for (o, xp) in out.iter_mut().zip(self.x_prime.as_slice()) {
            *o = self.a * *o + self.b * aux * xp;
        }
        out.push(aux);
        Ok(out)
    }

    /// Largest column residual of `R^† R - I`, checked on every basis vector.
    pub fn unitarity_residual(&self) -> f64 {
        let dim = self.dim();
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        let mut worst = 0.0f64;
        for j in 0..dim {
            col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.rotation.apply_slice(&mut col);
            self.rotation.apply_adjoint_slice(&mut col);
            col[j] -= 1.0;
            worst = worst.max(col.iter().map(|c| c.norm()).fold(0.0, f64::max));
        }
        worst
    }
}

pub fn make_extended_operator<R: Operator>(
    rotation: R,
    a: Complex64,
    b: Complex64,
    x_prime: AmplitudeVector,
) -> Result<ExtendedOperator<R>> {
    ExtendedOperator::new(rotation, a, b, x_prime)
}

/// `|<x'| R |x>|`.
pub fn check_orthogonality<R: Operator>(
    rotation: &R,
    x: &AmplitudeVector,
    x_prime: &AmplitudeVector,
) -> Result<f64> {
    x.check_same_dim(x_prime)?;
    let mut rx = x.clone();
    rotation.apply(&mut rx)?;
    Ok(inner(x_prime.as_slice(), rx.as_slice()).norm())
}

/// Returns `a R|x> + b|x'>`, routed through the augmented space with the
/// auxiliary amplitude set to 1 and dropped afterwards.
pub fn superpose<R: Operator>(
    op: &ExtendedOperator<R>,
    x: &AmplitudeVector,
) -> Result<AmplitudeVector> {
    op.rotation.check_dim(x.dim())?;
    let residual = (x.norm() - 1.0).abs();
    if residual > INPUT_NORM_TOL {
        return Err(Error::NotNormalized { residual });
    }
    let overlap = check_orthogonality(&op.rotation, x, &op.x_prime)?;
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let mut augmented = x.as_slice().to_vec();
    augmented.push(Complex64::new(1.0, 0.0));
    let mut out = op.apply_extended(&augmented)?;
    out.truncate(op.dim());
    AmplitudeVector::from_amplitudes(out)
}
