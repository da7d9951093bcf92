//! Fixtures shared by the benchmarks.

use qlattice::{evolve, make_gate, AmplitudeVector, EvolutionConfig, GateKind, LatticeTopology};

/// Sweep configuration on an `n x n` lattice.
pub fn lattice(n: usize, kind: GateKind, theta: f64) -> EvolutionConfig {
    EvolutionConfig::new(
        LatticeTopology::new(n).unwrap(),
        make_gate(kind, theta).unwrap(),
    )
}

/// Dense state obtained by evolving the excited periphery for a few sweeps,
/// so that no amplitude is trivially zero along the benchmarked pairs.
pub fn spread_state(n: usize) -> AmplitudeVector {
    let cfg = lattice(n, GateKind::CprimeExact, 0.3).with_steps(3);
    let nq = n * n;
    let periphery = (0..nq).filter(|&q| {
        let (r, c) = (q / n, q % n);
        r == 0 || c == 0 || r == n - 1 || c == n - 1
    });
    let idx = periphery.fold(0usize, |acc, q| acc | 1 << q);
    let start = AmplitudeVector::basis(nq, idx).unwrap();
    evolve(&start, &cfg).unwrap().final_state().clone()
}
