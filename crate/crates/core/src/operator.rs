//! Linear operators on the system space that are not nearest-neighbour
//! gates: identities, explicit matrices and plane rotations.

use num_complex::Complex64;

use crate::amplitudes::{inner, AmplitudeVector};
use crate::error::{Error, Result};

/// A linear map acting in place on a dense amplitude slice.
pub trait Operator {
    fn dim(&self) -> usize;

    fn apply_slice(&self, amps: &mut [Complex64]);

    fn apply_adjoint_slice(&self, amps: &mut [Complex64]);

    fn apply(&self, psi: &mut AmplitudeVector) -> Result<()> {
        self.check_dim(psi.dim())?;
        self.apply_slice(psi.as_mut_slice());
        Ok(())
    }

    fn apply_adjoint(&self, psi: &mut AmplitudeVector) -> Result<()> {
        self.check_dim(psi.dim())?;
        self.apply_adjoint_slice(psi.as_mut_slice());
        Ok(())
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

impl<T: Operator + ?Sized> Operator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply_slice(&self, amps: &mut [Complex64]) {
        (**self).apply_slice(amps)
    }
    fn apply_adjoint_slice(&self, amps: &mut [Complex64]) {
        (**self).apply_adjoint_slice(amps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity {
    dim: usize,
}

impl Identity {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Operator for Identity {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply_slice(&self, _: &mut [Complex64]) {}
    fn apply_adjoint_slice(&self, _: &mut [Complex64]) {}
}

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * rhs.dim;
        let mut out = DenseMatrix::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        out.set(i * rhs.dim + k, j * rhs.dim + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(m, x)| m * x)
                    .sum()
            })
            .collect()
    }

    /// Largest entry of `|M^† M - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

impl Operator for DenseMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_slice(&self, amps: &mut [Complex64]) {
        let out = self.mul_vec(amps);
        amps.copy_from_slice(&out);
    }

    fn apply_adjoint_slice(&self, amps: &mut [Complex64]) {
        let n = self.dim;
        let out: Vec<Complex64> = (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j).conj() * amps[i]).sum())
            .collect();
        amps.copy_from_slice(&out);
    }
}

/// Rotates each consecutive pair `(u, v)` of orthonormal vectors by a fixed
/// angle within its 2-plane (`u -> cos u + sin v`, `v -> -sin u + cos v`)
/// and leaves the orthogonal complement untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRotations {
    dim: usize,
    planes: Vec<(Vec<Complex64>, Vec<Complex64>)>,
    angle: f64,
}

impl PlaneRotations {
    /// `states` must be pairwise orthonormal within `tol` and of even count.
    pub fn new(states: &[AmplitudeVector], angle: f64, tol: f64) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Empty("rotation states"));
        }
        if !states.len().is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "plane rotations need an even number of states, got {}",
                states.len()
            )));
        }
        let dim = states[0].dim();
        for (i, s) in states.iter().enumerate() {
            states[0].check_same_dim(s)?;
            for (j, t) in states.iter().enumerate().skip(i) {
                let g = inner(s.as_slice(), t.as_slice());
                if i == j {
                    let residual = (g.re - 1.0).abs();
                    if residual > tol {
                        return Err(Error::NotNormalized { residual });
                    }
                } else if g.norm() > tol {
                    return Err(Error::NotOrthogonal { overlap: g.norm() });
                }
            }
        }
        let planes = states
            .chunks_exact(2)
            .map(|p| (p[0].as_slice().to_vec(), p[1].as_slice().to_vec()))
            .collect();
        Ok(Self { dim, planes, angle })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    fn rotate(&self, amps: &mut [Complex64], angle: f64) {
        let (s, c) = angle.sin_cos();
        for (u, v) in &self.planes {
            let cu = inner(u, amps);
            let cv = inner(v, amps);
            let du = cu * (c - 1.0) - cv * s;
            let dv = cu * s + cv * (c - 1.0);
            for ((a, x), y) in amps.iter_mut().zip(u).zip(v) {
                *a += du * x + dv * y;
            }
        }
    }
}

impl Operator for PlaneRotations {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply_slice(&self, amps: &mut [Complex64]) {
        self.rotate(amps, self.angle)
    }
    fn apply_adjoint_slice(&self, amps: &mut [Complex64]) {
        self.rotate(amps, -self.angle)
    }
}
