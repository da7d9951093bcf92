//! Whole-lattice sweeps, multi-step evolution and exact reversal.
//!
//! One sweep visits every target qubit in ascending index and lets each of
//! its four neighbours (right, left, down, up) act on it as controller, in
//! place: each gate sees the amplitudes left by the previous one.

use std::f64::consts::TAU;

use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::gates::{apply_block, check_pair, GateSpec};
use crate::lattice::LatticeTopology;
use crate::operator::{Operator, PlaneRotations};

const PARALLEL_MIN_DIM: usize = 1 << 14;

/// Which side of each lattice bond acts as controller during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepDirection {
    /// The neighbours of the visited node control it.
    #[default]
    NeighborsOnNode,
    /// The visited node controls each of its neighbours.
    NodeOnNeighbors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub topology: LatticeTopology,
    pub gate: GateSpec,
    pub steps: usize,
    pub renormalize: bool,
    /// Record every `k`-th sweep; 0 keeps only the final state.
    pub snapshot_every: usize,
    pub direction: SweepDirection,
}

impl EvolutionConfig {
    /// 1000 sweeps, final snapshot only, renormalization per gate kind.
    pub fn new(topology: LatticeTopology, gate: GateSpec) -> Self {
        Self {
            topology,
            renormalize: gate.kind().renormalize_by_default(),
            gate,
            steps: 1000,
            snapshot_every: 0,
            direction: SweepDirection::default(),
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_renormalize(mut self, renormalize: bool) -> Self {
        self.renormalize = renormalize;
        self
    }

    pub fn with_snapshot_every(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn with_direction(mut self, direction: SweepDirection) -> Self {
        self.direction = direction;
        self
    }

    /// The `4N` `(control, target)` pairs of one sweep, in application order.
    pub fn schedule(&self) -> Vec<(usize, usize)> {
        let topo = &self.topology;
        topo.adjacency()
            .iter()
            .enumerate()
            .flat_map(|(node, nbrs)| {
                nbrs.iter().map(move |&nb| match self.direction {
                    SweepDirection::NeighborsOnNode => (nb, node),
                    SweepDirection::NodeOnNeighbors => (node, nb),
                })
            })
            .collect()
    }

    fn check_state(&self, psi: &AmplitudeVector) -> Result<()> {
        if psi.dim() != self.topology.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.topology.dim(),
                found: psi.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub sweep: usize,
    pub state: AmplitudeVector,
}

/// Initial state plus recorded snapshots in increasing sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: AmplitudeVector,
    pub snapshots: Vec<Snapshot>,
    /// The sweep configuration, or `None` when driven by a global operator.
    pub config: Option<EvolutionConfig>,
}

impl Trajectory {
    pub fn final_state(&self) -> &AmplitudeVector {
        self.snapshots
            .last()
            .map(|s| &s.state)
            .unwrap_or(&self.initial)
    }

    /// Sweep count of the last recorded state.
    pub fn steps_completed(&self) -> usize {
        self.snapshots.last().map_or(0, |s| s.sweep)
    }
}

/// One full-lattice sweep, in place.
pub fn sweep(psi: &mut AmplitudeVector, cfg: &EvolutionConfig) -> Result<()> {
    cfg.check_state(psi)?;
    let schedule = cfg.schedule();
    run_sweep(psi, cfg, &schedule)
}

fn run_sweep(
    psi: &mut AmplitudeVector,
    cfg: &EvolutionConfig,
    schedule: &[(usize, usize)],
) -> Result<()> {
    let parallel = psi.dim() >= PARALLEL_MIN_DIM;
    let block = cfg.gate.block();
    for &(control, target) in schedule {
        apply_block(psi.as_mut_slice(), block, control, target, parallel);
    }
    if cfg.renormalize {
        psi.normalize()?;
    }
    Ok(())
}

/// Runs `cfg.steps` sweeps from `initial`, recording snapshots per cadence.
/// The final sweep is always recorded when `steps > 0`.
pub fn evolve(initial: &AmplitudeVector, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.check_state(initial)?;
    let nq = cfg.topology.num_qubits();
    let schedule = cfg.schedule();
    for &(c, t) in &schedule {
        check_pair(nq, c, t)?;
    }
    let mut psi = initial.clone();
    let mut snapshots = Vec::new();
    for step in 1..=cfg.steps {
        run_sweep(&mut psi, cfg, &schedule)?;
        if records(step, cfg.steps, cfg.snapshot_every) {
            snapshots.push(Snapshot {
                sweep: step,
                state: psi.clone(),
            });
        }
    }
    Ok(Trajectory {
        initial: initial.clone(),
        snapshots,
        config: Some(cfg.clone()),
    })
}

fn records(step: usize, steps: usize, every: usize) -> bool {
    step == steps || (every > 0 && step.is_multiple_of(every))
}

/// Undoes a recorded sweep evolution: from the final state, applies the
/// inverse gate over the reversed schedule once per completed sweep.
pub fn reverse_evolve(traj: &Trajectory) -> Result<AmplitudeVector> {
    let cfg = traj
        .config
        .as_ref()
        .ok_or_else(|| Error::Invalid("trajectory was not produced by a lattice sweep".into()))?;
    let inverse = cfg.gate.inverse()?;
    if cfg.renormalize {
        return Err(Error::Invalid(
            "renormalized evolution cannot be reversed exactly".into(),
        ));
    }
    let mut schedule = cfg.schedule();
    schedule.reverse();
    let parallel = traj.initial.dim() >= PARALLEL_MIN_DIM;
    let mut psi = traj.final_state().clone();
    for _ in 0..traj.steps_completed() {
        for &(control, target) in &schedule {
            apply_block(
                psi.as_mut_slice(),
                inverse.block(),
                control,
                target,
                parallel,
            );
        }
    }
    Ok(psi)
}

/// Global operator that rotates each consecutive pair of `states` by
/// `2π / period` in its plane and fixes the orthogonal complement, so
/// `period` applications return every vector to itself.
pub fn inject_periodic_orbit(states: &[AmplitudeVector], period: usize) -> Result<PlaneRotations> {
    if period < 2 {
        return Err(Error::Invalid(format!(
            "orbit period must be at least 2, got {period}"
        )));
    }
    PlaneRotations::new(states, TAU / period as f64, 1e-10)
}

/// Repeatedly applies a global operator, recording like [`evolve`].
pub fn evolve_operator<O: Operator>(
    initial: &AmplitudeVector,
    op: &O,
    steps: usize,
    snapshot_every: usize,
) -> Result<Trajectory> {
    op.check_dim(initial.dim())?;
    let mut psi = initial.clone();
    let mut snapshots = Vec::new();
    for step in 1..=steps {
        op.apply(&mut psi)?;
        if records(step, steps, snapshot_every) {
            snapshots.push(Snapshot {
                sweep: step,
                state: psi.clone(),
            });
        }
    }
    Ok(Trajectory {
        initial: initial.clone(),
        snapshots,
        config: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::fidelity;
    use crate::gates::{dense_matrix_of, make_gate, GateKind};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(kind: GateKind, theta: f64) -> EvolutionConfig {
        EvolutionConfig::new(
            LatticeTopology::new(3).unwrap(),
            make_gate(kind, theta).unwrap(),
        )
    }

    #[test]
    fn schedule_order() {
        let c = cfg(GateKind::DiscreteCnot, 0.0);
        let s = c.schedule();
        assert_eq!(s.len(), 36);
        assert_eq!(&s[..4], &[(1, 0), (2, 0), (3, 0), (6, 0)]);
        assert_eq!(&s[16..20], &[(5, 4), (3, 4), (7, 4), (1, 4)]);
        let flipped = c.with_direction(SweepDirection::NodeOnNeighbors).schedule();
        assert_eq!(&flipped[..4], &[(0, 1), (0, 2), (0, 3), (0, 6)]);
    }

    #[test]
    fn ground_state_survives_sweep() {
        for k in GateKind::ALL {
            let mut psi = AmplitudeVector::basis(9, 0).unwrap();
            sweep(&mut psi, &cfg(k, 0.2)).unwrap();
            assert_eq!(psi, AmplitudeVector::basis(9, 0).unwrap());
        }
    }

    #[test]
    fn sweep_rejects_wrong_dimension() {
        let mut psi = AmplitudeVector::basis(4, 0).unwrap();
        assert!(matches!(
            sweep(&mut psi, &cfg(GateKind::CprimeExact, 0.1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sweep_matches_dense_composition() {
        let c = cfg(GateKind::CprimeExact, 0.01);
        let mut want = AmplitudeVector::basis(9, 495).unwrap().into_inner();
        for (ctl, tgt) in c.schedule() {
            want = dense_matrix_of(&c.gate, ctl, tgt, 9)
                .unwrap()
                .mul_vec(&want);
        }
        let mut got = AmplitudeVector::basis(9, 495).unwrap();
        sweep(&mut got, &c).unwrap();
        for (a, b) in got.as_slice().iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
        // every single-bit flip of 495 has been populated
        let support = got.support();
        for q in 0..9 {
            assert!(
                support.contains(&(495 ^ (1 << q))),
                "missing flip of qubit {q}"
            );
        }
    }

    /// Classical c-NOT composition: flip target when control bit is set.
    fn classical_sweep(mut bits: usize, schedule: &[(usize, usize)]) -> usize {
        for &(c, t) in schedule {
            if (bits >> c) & 1 == 1 {
                bits ^= 1 << t;
            }
        }
        bits
    }

    #[test]
    fn discrete_sweep_permutes_basis_states() {
        let c = cfg(GateKind::DiscreteCnot, 0.0)
            .with_steps(5)
            .with_snapshot_every(1);
        let schedule = c.schedule();
        for start in [256usize, 1, 17, 27, 495, 511] {
            let traj = evolve(&AmplitudeVector::basis(9, start).unwrap(), &c).unwrap();
            let mut bits = start;
            for snap in &traj.snapshots {
                bits = classical_sweep(bits, &schedule);
                assert_eq!(snap.state.support(), vec![bits]);
                assert_eq!(snap.state[bits], Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn zero_steps_keeps_initial_only() {
        let psi = AmplitudeVector::basis(9, 27).unwrap();
        let traj = evolve(&psi, &cfg(GateKind::CprimeExact, 0.01).with_steps(0)).unwrap();
        assert!(traj.snapshots.is_empty());
        assert_eq!(traj.final_state(), &psi);
        assert_eq!(reverse_evolve(&traj).unwrap(), psi);
    }

    #[test]
    fn snapshot_cadence() {
        let psi = AmplitudeVector::basis(9, 27).unwrap();
        let c = cfg(GateKind::CprimeExact, 0.01)
            .with_steps(10)
            .with_snapshot_every(4);
        let sweeps: Vec<usize> = evolve(&psi, &c)
            .unwrap()
            .snapshots
            .iter()
            .map(|s| s.sweep)
            .collect();
        assert_eq!(sweeps, vec![4, 8, 10]);
        let c = c.with_snapshot_every(0);
        let sweeps: Vec<usize> = evolve(&psi, &c)
            .unwrap()
            .snapshots
            .iter()
            .map(|s| s.sweep)
            .collect();
        assert_eq!(sweeps, vec![10]);
    }

    #[test]
    fn renormalized_snapshots_have_unit_norm() {
        let c = cfg(GateKind::CprimeFirstOrder, 0.05)
            .with_steps(20)
            .with_snapshot_every(1);
        assert!(c.renormalize);
        let traj = evolve(&AmplitudeVector::basis(9, 27).unwrap(), &c).unwrap();
        assert!(traj.snapshots.iter().all(|s| s.state.is_normalized(1e-12)));
    }

    #[test]
    fn reverse_restores_after_many_sweeps() {
        let psi = AmplitudeVector::basis(9, 17).unwrap();
        let traj = evolve(&psi, &cfg(GateKind::CprimeExact, 0.01)).unwrap();
        let back = reverse_evolve(&traj).unwrap();
        assert!(fidelity(&back, &psi).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn reverse_discrete_on_two_by_two() {
        let c = EvolutionConfig::new(
            LatticeTopology::new(2).unwrap(),
            make_gate(GateKind::DiscreteCnot, 0.0).unwrap(),
        )
        .with_steps(2);
        for start in 0..16 {
            let psi = AmplitudeVector::basis(4, start).unwrap();
            let traj = evolve(&psi, &c).unwrap();
            assert_eq!(reverse_evolve(&traj).unwrap(), psi);
        }
    }

    #[test]
    fn reverse_refuses_nonunitary_and_renormalized() {
        let psi = AmplitudeVector::basis(9, 17).unwrap();
        let traj = evolve(&psi, &cfg(GateKind::NonunitaryCont, 0.01).with_steps(3)).unwrap();
        assert!(matches!(
            reverse_evolve(&traj),
            Err(Error::NotInvertible { .. })
        ));
        let c = cfg(GateKind::CprimeExact, 0.01)
            .with_steps(3)
            .with_renormalize(true);
        let traj = evolve(&psi, &c).unwrap();
        assert!(reverse_evolve(&traj).is_err());
    }

    #[test]
    fn exact_evolution_conserves_norm() {
        let c = cfg(GateKind::CprimeExact, 0.01).with_steps(2000);
        let traj = evolve(&AmplitudeVector::basis(9, 495).unwrap(), &c).unwrap();
        assert!((traj.final_state().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolution_is_deterministic() {
        let c = cfg(GateKind::CprimeFirstOrder, 0.02)
            .with_steps(50)
            .with_snapshot_every(7);
        let psi = AmplitudeVector::basis(9, 27).unwrap();
        let a = evolve(&psi, &c).unwrap();
        let b = evolve(&psi, &c).unwrap();
        for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
            for (p, q) in x.state.as_slice().iter().zip(y.state.as_slice()) {
                assert_eq!(p.re.to_bits(), q.re.to_bits());
                assert_eq!(p.im.to_bits(), q.im.to_bits());
            }
        }
    }

    #[test]
    fn overlap_is_sweep_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = cfg(GateKind::CprimeExact, 0.01)
            .with_steps(200)
            .with_snapshot_every(10);
        let a = AmplitudeVector::random(9, &mut rng).unwrap();
        let b = AmplitudeVector::random(9, &mut rng).unwrap();
        let f0 = fidelity(&a, &b).unwrap();
        let ta = evolve(&a, &c).unwrap();
        let tb = evolve(&b, &c).unwrap();
        for (x, y) in ta.snapshots.iter().zip(&tb.snapshots) {
            assert!((fidelity(&x.state, &y.state).unwrap() - f0).abs() < 1e-9);
        }
    }

    #[test]
    fn nonunitary_run_never_populates_ground_state() {
        // Controls are all clear on |0…0>, and no pair ever writes into it,
        // so a_0 stays exactly zero: the state cannot become uniform.
        let c = cfg(GateKind::NonunitaryCont, 0.01).with_steps(3000);
        let traj = evolve(&AmplitudeVector::basis(9, 495).unwrap(), &c).unwrap();
        let last = traj.final_state();
        assert_eq!(last[0], Complex64::new(0.0, 0.0));
        let dev = crate::analysis::uniformity_deviation(last);
        assert!(dev >= 1.0 / 512f64.sqrt() - 1e-15);
    }

    #[test]
    fn injected_orbit_basics() {
        let u = AmplitudeVector::basis(4, 5).unwrap();
        let v = AmplitudeVector::basis(4, 9).unwrap();
        let op = inject_periodic_orbit(&[u.clone(), v.clone()], 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let (x, y): (f64, f64) = (rng.random(), rng.random());
            let mut w = AmplitudeVector::from_pairs(
                4,
                [(5, Complex64::new(x, 0.0)), (9, Complex64::new(0.0, y))],
            )
            .unwrap();
            w.normalize().unwrap();
            let mut z = w.clone();
            for _ in 0..4 {
                op.apply(&mut z).unwrap();
            }
            for (a, b) in z.as_slice().iter().zip(w.as_slice()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
        let mut off = AmplitudeVector::basis(4, 3).unwrap();
        op.apply(&mut off).unwrap();
        assert_eq!(off, AmplitudeVector::basis(4, 3).unwrap());
    }

    #[test]
    fn injected_orbit_errors() {
        let u = AmplitudeVector::basis(4, 5).unwrap();
        let v = AmplitudeVector::basis(4, 9).unwrap();
        assert!(inject_periodic_orbit(&[u.clone(), v], 1).is_err());
        assert!(matches!(
            inject_periodic_orbit(&[u.clone(), u], 4),
            Err(Error::NotOrthogonal { .. })
        ));
    }
}
