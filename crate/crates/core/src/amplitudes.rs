//! Dense amplitude storage over the `2^N` product basis.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{check_qubits, BasisIndex};

/// Dense vector of `2^N` complex amplitudes indexed by [`BasisIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl AmplitudeVector {
    /// All-zero vector (not a valid state until something is written).
    pub fn zeros(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        Ok(Self {
            num_qubits,
            amps: vec![Complex64::new(0.0, 0.0); 1 << num_qubits],
        })
    }

    /// Pure product state with `a_I = 1`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let idx = BasisIndex::new(index, num_qubits)?;
        let mut v = Self::zeros(num_qubits)?;
        v.amps[idx.value()] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Equal superposition of every basis state.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            num_qubits,
            amps: vec![a; dim],
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    /// Builds a vector from sparse `(index, amplitude)` pairs. Repeated
    /// indices accumulate.
    pub fn from_pairs<I>(num_qubits: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let mut v = Self::zeros(num_qubits)?;
        for (i, a) in pairs {
            let idx = BasisIndex::new(i, num_qubits)?;
            v.amps[idx.value()] += a;
        }
        Ok(v)
    }

    /// Haar-like random state drawn from independent Gaussian components.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        let mut v = Self::zeros(num_qubits)?;
        for a in v.amps.iter_mut() {
            *a = Complex64::new(gaussian(rng), gaussian(rng));
        }
        v.normalize()?;
        Ok(v)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm and returns the norm it had before.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / norm;
        for a in self.amps.iter_mut() {
            *a *= inv;
        }
        Ok(norm)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Indices with non-zero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl Index<usize> for AmplitudeVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

impl IndexMut<usize> for AmplitudeVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.amps[i]
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

// Box-Muller; keeps the core free of a distributions dependency.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
