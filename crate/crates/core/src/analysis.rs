//! Read-only analyses of states and trajectories.

use num_complex::Complex64;

use crate::amplitudes::AmplitudeVector;
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::lattice::BasisIndex;

/// Fraction of the largest magnitude a component needs to count as dominant.
pub const DOMINANT_RATIO: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantEntry {
    pub index: BasisIndex,
    pub magnitude: f64,
    pub amplitude: Complex64,
}

/// Components ranked by descending magnitude, ties by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub ranked: Vec<DominantEntry>,
}

impl DominanceReport {
    pub fn k(&self) -> usize {
        self.ranked.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.ranked.iter().map(|e| e.index.value()).collect()
    }
}

pub fn dominant_components(psi: &AmplitudeVector, k: usize) -> Result<DominanceReport> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..psi.dim()).collect();
    let mags: Vec<f64> = psi.as_slice().iter().map(|a| a.norm()).collect();
    order.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
    order.truncate(k.min(psi.dim()));
    let ranked = order
        .into_iter()
        .map(|i| DominantEntry {
            index: BasisIndex::from_raw(i),
            magnitude: mags[i],
            amplitude: psi[i],
        })
        .collect();
    Ok(DominanceReport { ranked })
}

/// Every component with magnitude `>= ratio * max`, in ranked order.
pub fn dominant_set(psi: &AmplitudeVector, ratio: f64) -> Vec<BasisIndex> {
    let max = psi.as_slice().iter().map(|a| a.norm()).fold(0.0, f64::max);
    let report = dominant_components(psi, psi.dim()).expect("k >= 1");
    report
        .ranked
        .into_iter()
        .take_while(|e| e.magnitude >= ratio * max)
        .map(|e| e.index)
        .collect()
}

/// Bitwise AND of the given labels.
pub fn back_project(indices: &[BasisIndex]) -> Result<BasisIndex> {
    let (first, rest) = indices
        .split_first()
        .ok_or(Error::Empty("back-projection index list"))?;
    let bits = rest.iter().fold(first.value(), |acc, i| acc & i.value());
    Ok(BasisIndex::from_raw(bits))
}

/// `|<psi|phi>|` after normalizing both vectors.
pub fn fidelity(psi: &AmplitudeVector, phi: &AmplitudeVector) -> Result<f64> {
    let overlap = psi.inner(phi)?;
    let (a, b) = (psi.norm(), phi.norm());
    if a == 0.0 || b == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(overlap.norm() / (a * b))
}

/// `max_I | |a_I| - 1/sqrt(dim) |`.
pub fn uniformity_deviation(psi: &AmplitudeVector) -> f64 {
    let flat = 1.0 / (psi.dim() as f64).sqrt();
    psi.as_slice()
        .iter()
        .map(|a| (a.norm() - flat).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodReport {
    pub period: Option<usize>,
    pub recurrence_fidelity: Option<f64>,
    pub delta: f64,
}

/// Smallest `t >= 1` with `fidelity(psi(0), psi(t)) >= 1 - delta`. Needs a
/// snapshot after every sweep.
pub fn detect_period(traj: &Trajectory, delta: f64) -> Result<PeriodReport> {
    if traj.snapshots.is_empty() {
        return Err(Error::Invalid(
            "period detection needs at least one snapshot besides the initial state".into(),
        ));
    }
    for (expected, snap) in (1..).zip(&traj.snapshots) {
        if snap.sweep != expected {
            return Err(Error::Invalid(format!(
                "period detection needs a snapshot after every sweep; found sweep {} where {expected} was expected",
                snap.sweep
            )));
        }
    }
    for snap in &traj.snapshots {
        let f = fidelity(&traj.initial, &snap.state)?;
        if f >= 1.0 - delta {
            return Ok(PeriodReport {
                period: Some(snap.sweep),
                recurrence_fidelity: Some(f),
                delta,
            });
        }
    }
    Ok(PeriodReport {
        period: None,
        recurrence_fidelity: None,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, evolve_operator, inject_periodic_orbit, EvolutionConfig};
    use crate::gates::{make_gate, GateKind};
    use crate::lattice::LatticeTopology;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn idx(v: usize) -> BasisIndex {
        BasisIndex::new(v, 9).unwrap()
    }

    #[test]
    fn dominance_of_pure_state() {
        let r = dominant_components(&AmplitudeVector::basis(9, 27).unwrap(), 3).unwrap();
        assert_eq!(r.k(), 3);
        assert_eq!(r.ranked[0].index.value(), 27);
        assert_eq!(r.ranked[0].magnitude, 1.0);
        assert_eq!(r.ranked[1].magnitude, 0.0);
        assert_eq!(r.ranked[2].magnitude, 0.0);
    }

    #[test]
    fn dominance_ties_break_by_index() {
        let r = dominant_components(&AmplitudeVector::uniform(9).unwrap(), 2).unwrap();
        assert_eq!(r.indices(), vec![0, 1]);
        let r = dominant_components(&AmplitudeVector::uniform(2).unwrap(), 10).unwrap();
        assert_eq!(r.k(), 4);
        assert!(dominant_components(&AmplitudeVector::uniform(2).unwrap(), 0).is_err());
    }

    #[test]
    fn dominant_set_threshold() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut psi = AmplitudeVector::from_pairs(
            9,
            [(27, c(0.27)), (19, c(0.23)), (25, c(-0.23)), (3, c(0.1))],
        )
        .unwrap();
        psi.normalize().unwrap();
        let set: Vec<usize> = dominant_set(&psi, DOMINANT_RATIO)
            .iter()
            .map(|i| i.value())
            .collect();
        assert_eq!(set, vec![27, 19, 25]);
        assert_eq!(
            back_project(&dominant_set(&psi, DOMINANT_RATIO))
                .unwrap()
                .value(),
            17
        );
    }

    #[test]
    fn back_projection() {
        assert_eq!(
            back_project(&[idx(27), idx(19), idx(25)]).unwrap().value(),
            17
        );
        assert_eq!(back_project(&[idx(27)]).unwrap().value(), 27);
        assert_eq!(
            back_project(&[idx(27), idx(11), idx(19), idx(25), idx(26)])
                .unwrap()
                .value(),
            0
        );
        assert_eq!(
            back_project(&[]).unwrap_err(),
            Error::Empty("back-projection index list")
        );
    }

    #[test]
    fn fidelity_values() {
        let zero = AmplitudeVector::basis(1, 0).unwrap();
        let one = AmplitudeVector::basis(1, 1).unwrap();
        let plus = AmplitudeVector::uniform(1).unwrap();
        assert!((fidelity(&plus, &plus).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!((fidelity(&zero, &plus).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        let z = AmplitudeVector::zeros(1).unwrap();
        assert_eq!(fidelity(&z, &one).unwrap_err(), Error::ZeroVector);
        let big = AmplitudeVector::basis(2, 0).unwrap();
        assert!(fidelity(&zero, &big).is_err());
    }

    #[test]
    fn uniformity_values() {
        assert!(uniformity_deviation(&AmplitudeVector::uniform(9).unwrap()) < 1e-15);
        let d = uniformity_deviation(&AmplitudeVector::basis(9, 27).unwrap());
        assert!((d - (1.0 - 1.0 / 512f64.sqrt())).abs() < 1e-15);
        assert!((d - 0.9558).abs() < 1e-4);
    }

    fn mixed_start() -> AmplitudeVector {
        // half inside the rotated plane, half outside it; a purely in-plane
        // state would already recur as a ray after half a period
        let mut psi = AmplitudeVector::from_pairs(
            4,
            [(5, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        psi.normalize().unwrap();
        psi
    }

    #[test]
    fn period_of_injected_orbit() {
        let u = AmplitudeVector::basis(4, 5).unwrap();
        let v = AmplitudeVector::basis(4, 9).unwrap();
        let op = inject_periodic_orbit(&[u, v], 4).unwrap();
        let traj = evolve_operator(&mixed_start(), &op, 12, 1).unwrap();
        let r = detect_period(&traj, 1e-6).unwrap();
        assert_eq!(r.period, Some(4));
        assert!(r.recurrence_fidelity.unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn period_of_rotated_diagonal_orbit() {
        let s = FRAC_1_SQRT_2;
        let plus = AmplitudeVector::from_pairs(
            4,
            [(5, Complex64::new(s, 0.0)), (9, Complex64::new(s, 0.0))],
        )
        .unwrap();
        let minus = AmplitudeVector::from_pairs(
            4,
            [(5, Complex64::new(s, 0.0)), (9, Complex64::new(-s, 0.0))],
        )
        .unwrap();
        let op = inject_periodic_orbit(&[plus, minus], 8).unwrap();
        let traj = evolve_operator(&mixed_start(), &op, 20, 1).unwrap();
        assert_eq!(detect_period(&traj, 1e-6).unwrap().period, Some(8));
    }

    #[test]
    fn fixed_point_has_period_one() {
        let cfg = EvolutionConfig::new(
            LatticeTopology::new(3).unwrap(),
            make_gate(GateKind::CprimeExact, 0.01).unwrap(),
        )
        .with_steps(5)
        .with_snapshot_every(1);
        let traj = evolve(&AmplitudeVector::basis(9, 0).unwrap(), &cfg).unwrap();
        assert_eq!(detect_period(&traj, 1e-6).unwrap().period, Some(1));
    }

    #[test]
    fn generic_exact_run_has_no_short_recurrence() {
        let cfg = EvolutionConfig::new(
            LatticeTopology::new(3).unwrap(),
            make_gate(GateKind::CprimeExact, 0.01).unwrap(),
        )
        .with_steps(1000)
        .with_snapshot_every(1);
        let traj = evolve(&AmplitudeVector::basis(9, 495).unwrap(), &cfg).unwrap();
        let r = detect_period(&traj, 1e-6).unwrap();
        assert_eq!(r.period, None);
        assert_eq!(r.recurrence_fidelity, None);
    }

    #[test]
    fn period_needs_per_sweep_snapshots() {
        let cfg = EvolutionConfig::new(
            LatticeTopology::new(3).unwrap(),
            make_gate(GateKind::CprimeExact, 0.01).unwrap(),
        );
        let psi = AmplitudeVector::basis(9, 17).unwrap();
        let empty = evolve(&psi, &cfg.clone().with_steps(0)).unwrap();
        assert!(detect_period(&empty, 1e-6).is_err());
        let sparse = evolve(&psi, &cfg.with_steps(6).with_snapshot_every(2)).unwrap();
        assert!(detect_period(&sparse, 1e-6).is_err());
    }

    proptest! {
        #[test]
        fn back_project_is_order_free(values in proptest::collection::vec(0usize..512, 1..8)) {
            let mut ids: Vec<BasisIndex> = values.iter().map(|&v| idx(v)).collect();
            let a = back_project(&ids).unwrap();
            ids.reverse();
            prop_assert_eq!(back_project(&ids).unwrap(), a);
            let mut doubled = ids.clone();
            doubled.extend_from_slice(&ids);
            prop_assert_eq!(back_project(&doubled).unwrap(), a);
            let (l, r) = ids.split_at(ids.len() / 2);
            if !l.is_empty() {
                let nested = back_project(&[back_project(l).unwrap(), back_project(r).unwrap()]).unwrap();
                prop_assert_eq!(nested, a);
            }
        }

        #[test]
        fn full_dominance_lists_everything(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let psi = AmplitudeVector::random(6, &mut rng).unwrap();
            let r = dominant_components(&psi, psi.dim()).unwrap();
            let mut seen = r.indices();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..64).collect::<Vec<_>>());
            prop_assert!(r.ranked.windows(2).all(|w| w[0].magnitude >= w[1].magnitude));
            let total: f64 = r.ranked.iter().map(|e| e.magnitude * e.magnitude).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }
}
