//! Periodic square lattice geometry and bitmask basis labels.
//!
//! Qubits are linearized row-major, `(i, j) -> i * n + j`, with qubit 0 at the
//! top-left corner. A basis state of the whole lattice is the integer whose
//! bit `q` is the excitation of qubit `q`, so reading one qubit is a single
//! shift-and-mask.

use std::fmt;

use crate::error::{Error, Result};
use crate::MAX_QUBITS;

/// An `n x n` lattice with periodic boundary conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTopology {
    side: usize,
    adjacency: Vec<[usize; 4]>,
}

impl LatticeTopology {
    pub fn new(side: usize) -> Result<Self> {
        if side < 2 || side * side > MAX_QUBITS {
            return Err(Error::UnsupportedLattice(side));
        }
        let adjacency = (0..side * side)
            .map(|q| {
                let (i, j) = (q / side, q % side);
                [
                    i * side + (j + 1) % side,
                    i * side + (j + side - 1) % side,
                    ((i + 1) % side) * side + j,
                    ((i + side - 1) % side) * side + j,
                ]
            })
            .collect();
        Ok(Self { side, adjacency })
    }

    /// Side length `n`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Qubit count `N = n^2`.
    pub fn num_qubits(&self) -> usize {
        self.side * self.side
    }

    /// State-space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.num_qubits()
    }

    pub fn linearize(&self, row: usize, col: usize) -> Result<usize> {
        for (what, value) in [("row", row), ("column", col)] {
            if value >= self.side {
                return Err(Error::OutOfRange {
                    what,
                    value,
                    bound: self.side,
                });
            }
        }
        Ok(row * self.side + col)
    }

    /// Right, left, down and up neighbours of `q`, wrapping at the edges.
    ///
    /// On a 2x2 lattice left and right (and up and down) coincide; the
    /// duplicates are kept so every qubit still has four entries.
    pub fn neighbors(&self, q: usize) -> Result<[usize; 4]> {
        self.adjacency.get(q).copied().ok_or(Error::OutOfRange {
            what: "qubit",
            value: q,
            bound: self.num_qubits(),
        })
    }

    pub fn adjacency(&self) -> &[[usize; 4]] {
        &self.adjacency
    }
}

/// Label of a product basis state: bit `q` set means qubit `q` is `|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(usize);

impl BasisIndex {
    pub fn new(value: usize, num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        if value >> num_qubits != 0 {
            return Err(Error::OutOfRange {
                what: "basis index",
                value,
                bound: 1 << num_qubits,
            });
        }
        Ok(Self(value))
    }

    /// Builds the label by summing `2^q` over the excited qubits.
    pub fn from_excited<I>(excited: I, num_qubits: usize) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        check_qubits(num_qubits)?;
        let mut value = 0usize;
        for q in excited {
            if q >= num_qubits {
                return Err(Error::OutOfRange {
                    what: "qubit",
                    value: q,
                    bound: num_qubits,
                });
            }
            value |= 1 << q;
        }
        Ok(Self(value))
    }

    pub(crate) fn from_raw(value: usize) -> Self {
        Self(value)
    }

    pub fn value(self) -> usize {
        self.0
    }

    /// Excitation (0 or 1) of qubit `q`.
    pub fn qubit_state(self, q: usize, num_qubits: usize) -> Result<u8> {
        if q >= num_qubits {
            return Err(Error::OutOfRange {
                what: "qubit",
                value: q,
                bound: num_qubits,
            });
        }
        Ok(((self.0 >> q) & 1) as u8)
    }

    /// Excited qubits in ascending order.
    pub fn excited(self) -> impl Iterator<Item = usize> {
        let v = self.0;
        (0..usize::BITS as usize).filter(move |q| (v >> q) & 1 == 1)
    }
}

impl From<BasisIndex> for usize {
    fn from(i: BasisIndex) -> usize {
        i.0
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.0)
    }
}

pub(crate) fn check_qubits(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        Err(Error::TooManyQubits(num_qubits))
    } else {
        Ok(())
    }
}
