//! Dense-statevector simulation of fully entangled `n x n` qubit lattices
//! with periodic boundaries, evolved by nearest-neighbour controlled gates.
//!
//! The crate covers:
//!
//! * lattice geometry and bitmask basis labels ([`lattice`]),
//! * the controlled-gate family and its in-place kernel ([`gates`]),
//! * whole-lattice sweeps, reversal and injected periodic orbits
//!   ([`evolution`]),
//! * dominance, back-projection, fidelity and recurrence analysis
//!   ([`analysis`]),
//! * superposed input preparation ([`state_prep`]),
//! * Grover detection of arbitrary target states ([`detection`]),
//! * run configuration and snapshot files ([`config`], [`snapshot`]).
//!
//! ```
//! use qlattice::{evolve, make_gate, AmplitudeVector, EvolutionConfig, GateKind, LatticeTopology};
//!
//! let topo = LatticeTopology::new(3).unwrap();
//! let cfg = EvolutionConfig::new(topo, make_gate(GateKind::CprimeExact, 0.01).unwrap())
//!     .with_steps(10);
//! let traj = evolve(&AmplitudeVector::basis(9, 495).unwrap(), &cfg).unwrap();
//! assert!((traj.final_state().norm() - 1.0).abs() < 1e-12);
//! ```

pub mod amplitudes;
pub mod analysis;
pub mod config;
pub mod detection;
pub mod error;
pub mod evolution;
pub mod gates;
pub mod lattice;
pub mod operator;
pub mod snapshot;
pub mod state_prep;

/// Largest supported qubit count (dense `2^24` amplitudes).
pub const MAX_QUBITS: usize = 24;

pub use amplitudes::AmplitudeVector;
pub use analysis::{
    back_project, detect_period, dominant_components, dominant_set, fidelity, uniformity_deviation,
    DominanceReport, DominantEntry, PeriodReport, DOMINANT_RATIO,
};
pub use config::{parse_config, Driver, ParseError, RunConfig, StateSpec};
pub use detection::{
    amplify, apply_diffusion, apply_oracle, detect, expected_success, grover_iterate,
    optimal_iterations, rotate_basis_to_target, success_probability, BasisRotation, Iterations,
    SearchSpec,
};
pub use error::{Error, Result};
pub use evolution::{
    evolve, evolve_operator, inject_periodic_orbit, reverse_evolve, sweep, EvolutionConfig,
    Snapshot, SweepDirection, Trajectory,
};
pub use gates::{apply_two_qubit_gate, dense_matrix_of, make_gate, GateKind, GateSpec};
pub use lattice::{BasisIndex, LatticeTopology};
pub use num_complex::Complex64;
pub use operator::{DenseMatrix, Identity, Operator, PlaneRotations};
pub use snapshot::{SnapshotError, SnapshotFile};
pub use state_prep::{check_orthogonality, make_extended_operator, superpose, ExtendedOperator};
