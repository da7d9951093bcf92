//! Controlled two-qubit gates and the in-place kernel that applies them.
//!
//! Every gate here is a 2x2 block acting on the `(target = 0, target = 1)`
//! amplitude pair inside the `control = 1` subspace; the `control = 0`
//! subspace is left alone. Applying a gate therefore touches only the pairs
//! `(I, I | 1 << target)` where `I` has the control bit set and the target
//! bit clear.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::operator::DenseMatrix;

/// Largest qubit count for which [`dense_matrix_of`] builds a matrix.
pub const DENSE_MATRIX_MAX_QUBITS: usize = 10;

/// Dimension from which the kernel splits work across threads.
const PARALLEL_MIN_DIM: usize = 1 << 14;

/// Amplitudes handled per parallel task at minimum.
const PARALLEL_GRAIN: usize = 1 << 12;

pub type Block = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Textbook c-NOT, block `σ₁`.
    DiscreteCnot,
    /// First-order `exp(iθσ₁)`: block `[[1, iθ], [iθ, 1]]`.
    ContinuousCnot,
    /// First-order c′-NOT: block `[[1, θ], [-θ, 1]]`. Unitary only to O(θ²).
    CprimeFirstOrder,
    /// Exact c′-NOT rotation `[[cos θ, sin θ], [-sin θ, cos θ]]`.
    CprimeExact,
    /// Real symmetric `[[1, θ], [θ, 1]]`, the continuous c-NOT with an
    /// imaginary rate.
    NonunitaryCont,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::DiscreteCnot,
        GateKind::ContinuousCnot,
        GateKind::CprimeFirstOrder,
        GateKind::CprimeExact,
        GateKind::NonunitaryCont,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::DiscreteCnot => "discrete_cnot",
            GateKind::ContinuousCnot => "continuous_cnot",
            GateKind::CprimeFirstOrder => "cprime_first_order",
            GateKind::CprimeExact => "cprime_exact",
            GateKind::NonunitaryCont => "nonunitary_cont",
        }
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, GateKind::DiscreteCnot | GateKind::CprimeExact)
    }

    fn is_first_order(self) -> bool {
        matches!(
            self,
            GateKind::ContinuousCnot | GateKind::CprimeFirstOrder | GateKind::NonunitaryCont
        )
    }

    /// Whether sweeps renormalize by default: first-order and nonunitary
    /// kinds drift in norm, exact kinds do not.
    pub fn renormalize_by_default(self) -> bool {
        !self.is_unitary()
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown gate kind `{s}`")))
    }
}

/// A gate kind together with its angle `θ = ε·dt` and resulting block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    theta: f64,
    block: Block,
}

impl GateSpec {
    /// Builds the block for `kind`. `theta` is ignored (stored as 0) for
    /// [`GateKind::DiscreteCnot`].
    pub fn new(kind: GateKind, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        if kind.is_first_order() && theta.abs() >= 1.0 {
            return Err(Error::AngleOutsidePerturbative(theta));
        }
        let r = |x: f64| Complex64::new(x, 0.0);
        let (theta, block) = match kind {
            GateKind::DiscreteCnot => (0.0, [[r(0.0), r(1.0)], [r(1.0), r(0.0)]]),
            GateKind::ContinuousCnot => {
                let i = Complex64::new(0.0, theta);
                (theta, [[r(1.0), i], [i, r(1.0)]])
            }
            GateKind::CprimeFirstOrder => (theta, [[r(1.0), r(theta)], [r(-theta), r(1.0)]]),
            GateKind::CprimeExact => {
                let (s, c) = theta.sin_cos();
                (theta, [[r(c), r(s)], [r(-s), r(c)]])
            }
            GateKind::NonunitaryCont => (theta, [[r(1.0), r(theta)], [r(theta), r(1.0)]]),
        };
        Ok(Self { kind, theta, block })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn block(&self) -> &Block {
        &self.block
    }

    /// Exact inverse, available only for the unitary kinds.
    pub fn inverse(&self) -> Result<Self> {
        match self.kind {
            GateKind::DiscreteCnot => Ok(*self),
            GateKind::CprimeExact => GateSpec::new(self.kind, -self.theta),
            kind => Err(Error::NotInvertible { kind }),
        }
    }
}

/// `make_gate` under its descriptive name.
pub fn make_gate(kind: GateKind, theta: f64) -> Result<GateSpec> {
    GateSpec::new(kind, theta)
}

/// Applies `gate` with `control` acting on `target`, in place.
pub fn apply_two_qubit_gate(
    psi: &mut AmplitudeVector,
    gate: &GateSpec,
    control: usize,
    target: usize,
) -> Result<()> {
    check_pair(psi.num_qubits(), control, target)?;
    let parallel = psi.dim() >= PARALLEL_MIN_DIM;
    apply_block(psi.as_mut_slice(), &gate.block, control, target, parallel);
    Ok(())
}

pub(crate) fn check_pair(num_qubits: usize, control: usize, target: usize) -> Result<()> {
    if control == target {
        return Err(Error::SameQubit(control));
    }
    for q in [control, target] {
        if q >= num_qubits {
            return Err(Error::OutOfRange {
                what: "qubit",
                value: q,
                bound: num_qubits,
            });
        }
    }
    Ok(())
}

/// Walks the vector in blocks of `2^(target+1)`: the lower half of each block
/// has the target bit clear, the upper half the same indices with it set.
/// Blocks are disjoint, so the parallel split gives bit-identical results.
pub(crate) fn apply_block(
    amps: &mut [Complex64],
    block: &Block,
    control: usize,
    target: usize,
    parallel: bool,
) {
    let half = 1usize << target;
    let cmask = 1usize << control;
    let [[b00, b01], [b10, b11]] = *block;
    let mix = |(k, chunk): (usize, &mut [Complex64])| {
        let base = k * 2 * half;
        let (lo, hi) = chunk.split_at_mut(half);
        if control > target && base & cmask == 0 {
            return;
        }
        for (off, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if (base + off) & cmask == 0 {
                continue;
            }
            let (a, b) = (*x, *y);
            *x = b00 * a + b01 * b;
            *y = b10 * a + b11 * b;
        }
    };
    if parallel {
        let min_blocks = (PARALLEL_GRAIN / (2 * half)).max(1);
        amps.par_chunks_mut(2 * half)
            .enumerate()
            .with_min_len(min_blocks)
            .for_each(mix);
    } else {
        amps.chunks_mut(2 * half).enumerate().for_each(mix);
    }
}

/// Explicit `2^N x 2^N` matrix of the gate, assembled as
/// `|0><0|_c ⊗ 1 + |1><1|_c ⊗ B_t` from per-qubit Kronecker factors.
/// Qubit `N-1` is the leftmost factor so that bit `q` of the row index is
/// qubit `q`.
pub fn dense_matrix_of(
    gate: &GateSpec,
    control: usize,
    target: usize,
    num_qubits: usize,
) -> Result<DenseMatrix> {
    if num_qubits > DENSE_MATRIX_MAX_QUBITS {
        return Err(Error::DenseTooLarge(num_qubits));
    }
    check_pair(num_qubits, control, target)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let proj0 = DenseMatrix::from_rows(2, vec![one, zero, zero, zero])?;
    let proj1 = DenseMatrix::from_rows(2, vec![zero, zero, zero, one])?;
    let [[b00, b01], [b10, b11]] = gate.block;
    let blk = DenseMatrix::from_rows(2, vec![b00, b01, b10, b11])?;
    let id = DenseMatrix::identity(2);

    let mut idle = DenseMatrix::identity(1);
    let mut active = DenseMatrix::identity(1);
    for q in (0..num_qubits).rev() {
        let (f_idle, f_active) = if q == control {
            (&proj0, &proj1)
        } else if q == target {
            (&id, &blk)
        } else {
            (&id, &id)
        };
        idle = idle.kron(f_idle);
        active = active.kron(f_active);
    }
    Ok(idle.add(&active))
}
