//! Grover search for an arbitrary (possibly entangled) target state.
//!
//! The oracle rotates the basis so the target becomes `|0>`, flips the sign
//! of that component and rotates back, which is the same operator as the
//! reflection `1 - 2|t><t|` in the original basis. The diffusion step is the
//! inversion about the mean, i.e. the reflection about the uniform state.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amplitudes::{inner, AmplitudeVector};
use crate::error::{Error, Result};
use crate::operator::Operator;

/// Unitary `phase · (1 - 2 u u^†)` that sends a given unit vector to `|0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRotation {
    dim: usize,
    /// Unit Householder vector; `None` when the reflection is trivial.
    reflector: Option<Vec<Complex64>>,
    phase: Complex64,
}

impl BasisRotation {
    fn reflect(&self, amps: &mut [Complex64]) {
        if let Some(u) = &self.reflector {
            let proj = inner(u, amps) * 2.0;
            for (a, ui) in amps.iter_mut().zip(u) {
                *a -= proj * ui;
            }
        }
    }
}

impl Operator for BasisRotation {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_slice(&self, amps: &mut [Complex64]) {
        self.reflect(amps);
        amps.iter_mut().for_each(|a| *a *= self.phase);
    }

    fn apply_adjoint_slice(&self, amps: &mut [Complex64]) {
        let back = self.phase.conj();
        amps.iter_mut().for_each(|a| *a *= back);
        self.reflect(amps);
    }
}

/// Builds the rotation taking `target` (normalized internally) to `|0>`.
pub fn rotate_basis_to_target(target: &AmplitudeVector) -> Result<BasisRotation> {
    let norm = target.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let t: Vec<Complex64> = target.as_slice().iter().map(|a| a / norm).collect();
    // Householder maps t to e^{iα}|0> where α is the phase of t_0; the global
    // phase e^{-iα} then lands it exactly on |0>.
    let head = t[0];
    let align = if head.norm() > 0.0 {
        head / head.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut u = t;
    u[0] -= align;
    let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let reflector = if unorm > 1e-15 {
        u.iter_mut().for_each(|z| *z /= unorm);
        Some(u)
    } else {
        None
    };
    Ok(BasisRotation {
        dim: target.dim(),
        reflector,
        phase: align.conj(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    Fixed(usize),
    Auto,
}

/// Orthonormal marked states to search for plus an iteration policy.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    targets: Vec<AmplitudeVector>,
    rotations: Vec<BasisRotation>,
    iterations: Iterations,
}

impl SearchSpec {
    pub fn new(target: AmplitudeVector, iterations: Iterations) -> Result<Self> {
        Self::with_marked(vec![target], iterations)
    }

    pub fn with_marked(targets: Vec<AmplitudeVector>, iterations: Iterations) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Empty("search targets"));
        }
        for (i, t) in targets.iter().enumerate() {
            targets[0].check_same_dim(t)?;
            let residual = (t.norm() - 1.0).abs();
            if residual > 1e-10 {
                return Err(Error::NotNormalized { residual });
            }
            for u in &targets[..i] {
                let overlap = inner(u.as_slice(), t.as_slice()).norm();
                if overlap > 1e-10 {
                    return Err(Error::NotOrthogonal { overlap });
                }
            }
        }
        if targets.len() >= targets[0].dim() {
            return Err(Error::Invalid(format!(
                "{} marked states leave nothing to search in dimension {}",
                targets.len(),
                targets[0].dim()
            )));
        }
        let rotations = targets
            .iter()
            .map(rotate_basis_to_target)
            .collect::<Result<_>>()?;
        Ok(Self {
            targets,
            rotations,
            iterations,
        })
    }

    pub fn dim(&self) -> usize {
        self.targets[0].dim()
    }

    pub fn marked(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[AmplitudeVector] {
        &self.targets
    }

    pub fn iterations(&self) -> Iterations {
        self.iterations
    }

    /// Iteration count with `Auto` resolved by [`optimal_iterations`].
    pub fn resolved_iterations(&self) -> Result<usize> {
        match self.iterations {
            Iterations::Fixed(k) => Ok(k),
            Iterations::Auto => optimal_iterations(self.dim(), self.marked()),
        }
    }

    fn check(&self, psi: &AmplitudeVector) -> Result<()> {
        self.targets[0].check_same_dim(psi)
    }
}

/// Sign flip of each marked state, done in its rotated basis.
pub fn apply_oracle(psi: &mut AmplitudeVector, spec: &SearchSpec) -> Result<()> {
    spec.check(psi)?;
    for rot in &spec.rotations {
        rot.apply(psi)?;
        psi[0] = -psi[0];
        rot.apply_adjoint(psi)?;
    }
    Ok(())
}

/// The same oracle written directly as `1 - 2 Σ |t><t|`.
pub fn apply_oracle_direct(psi: &mut AmplitudeVector, spec: &SearchSpec) -> Result<()> {
    spec.check(psi)?;
    let coeffs: Vec<Complex64> = spec
        .targets
        .iter()
        .map(|t| inner(t.as_slice(), psi.as_slice()) * 2.0)
        .collect();
    for (t, c) in spec.targets.iter().zip(coeffs) {
        for (a, ti) in psi.as_mut_slice().iter_mut().zip(t.as_slice()) {
            *a -= c * ti;
        }
    }
    Ok(())
}

/// Inversion about the mean: `a_i -> 2·mean - a_i`.
pub fn apply_diffusion(psi: &mut AmplitudeVector) {
    let mean: Complex64 = psi.as_slice().iter().sum::<Complex64>() / psi.dim() as f64;
    for a in psi.as_mut_slice() {
        *a = mean * 2.0 - *a;
    }
}

/// One Grover iteration: oracle then diffusion.
pub fn grover_iterate(psi: &mut AmplitudeVector, spec: &SearchSpec) -> Result<()> {
    apply_oracle(psi, spec)?;
    apply_diffusion(psi);
    Ok(())
}

/// Total probability of the marked states.
pub fn success_probability(psi: &AmplitudeVector, spec: &SearchSpec) -> Result<f64> {
    spec.check(psi)?;
    let w = psi.norm_sqr();
    Ok(spec
        .targets
        .iter()
        .map(|t| inner(t.as_slice(), psi.as_slice()).norm_sqr())
        .sum::<f64>()
        / w)
}

/// Runs the resolved number of iterations starting from `psi`.
pub fn amplify(psi: &AmplitudeVector, spec: &SearchSpec) -> Result<AmplitudeVector> {
    let mut out = psi.clone();
    for _ in 0..spec.resolved_iterations()? {
        grover_iterate(&mut out, spec)?;
    }
    Ok(out)
}

/// `round(π / (4 asin(sqrt(m/dim))) - 1/2)`, rounding halves up.
pub fn optimal_iterations(dim: usize, marked: usize) -> Result<usize> {
    if dim < 2 {
        return Err(Error::Invalid(format!(
            "search dimension must be >= 2, got {dim}"
        )));
    }
    if marked == 0 || marked >= dim {
        return Err(Error::Invalid(format!(
            "marked count must be in 1..{dim}, got {marked}"
        )));
    }
    let angle = (marked as f64 / dim as f64).sqrt().asin();
    let x = PI / (4.0 * angle) - 0.5;
    // exact halves come out a few ulps low (dim = 2 gives 0.4999…)
    Ok((x + 0.5 + 1e-9).floor().max(0.0) as usize)
}

/// `sin²((2k+1)·asin(sqrt(m/dim)))`, the success probability after `k`
/// iterations from the uniform state.
pub fn expected_success(dim: usize, marked: usize, iterations: usize) -> f64 {
    let angle = (marked as f64 / dim as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * angle).sin().powi(2)
}

/// Amplifies `psi`, then samples `trials` measurements in the basis where
/// the target is `|0>` and returns the fraction of target outcomes.
pub fn detect(psi: &AmplitudeVector, spec: &SearchSpec, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    if spec.marked() != 1 {
        return Err(Error::Invalid(
            "measurement sampling supports a single target".into(),
        ));
    }
    let mut state = amplify(psi, spec)?;
    spec.rotations[0].apply(&mut state)?;
    let weights: Vec<f64> = state.as_slice().iter().map(|a| a.norm_sqr()).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::Invalid(format!("cannot sample state: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials).filter(|_| dist.sample(&mut rng) == 0).count();
    Ok(hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &AmplitudeVector, b: &AmplitudeVector, tol: f64) -> bool {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn rotation_of_ground_state_is_identity() {
        let rot = rotate_basis_to_target(&AmplitudeVector::basis(3, 0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = AmplitudeVector::random(3, &mut rng).unwrap();
        let mut w = v.clone();
        rot.apply(&mut w).unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn rotation_of_plus_state() {
        let plus = AmplitudeVector::uniform(1).unwrap();
        let rot = rotate_basis_to_target(&plus).unwrap();
        let mut w = plus.clone();
        rot.apply(&mut w).unwrap();
        assert!(close(&w, &AmplitudeVector::basis(1, 0).unwrap(), 1e-12));
        rot.apply_adjoint(&mut w).unwrap();
        assert!(close(&w, &plus, 1e-12));
    }

    #[test]
    fn rotation_of_random_complex_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = AmplitudeVector::random(9, &mut rng).unwrap();
        let rot = rotate_basis_to_target(&t).unwrap();
        let mut w = t.clone();
        rot.apply(&mut w).unwrap();
        assert!((w[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        let v = AmplitudeVector::random(9, &mut rng).unwrap();
        let mut z = v.clone();
        rot.apply(&mut z).unwrap();
        rot.apply_adjoint(&mut z).unwrap();
        assert!(close(&z, &v, 1e-12));
    }

    #[test]
    fn rotation_of_target_without_ground_component() {
        let t = AmplitudeVector::basis(3, 5).unwrap();
        let rot = rotate_basis_to_target(&t).unwrap();
        let mut w = t.clone();
        rot.apply(&mut w).unwrap();
        assert!(close(&w, &AmplitudeVector::basis(3, 0).unwrap(), 1e-15));
        assert!(rotate_basis_to_target(&AmplitudeVector::zeros(3).unwrap()).is_err());
    }

    #[test]
    fn four_dim_search_is_certain_after_one_step() {
        let spec =
            SearchSpec::new(AmplitudeVector::basis(2, 2).unwrap(), Iterations::Auto).unwrap();
        assert_eq!(spec.resolved_iterations().unwrap(), 1);
        let out = amplify(&AmplitudeVector::uniform(2).unwrap(), &spec).unwrap();
        assert!((success_probability(&out, &spec).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_iterations_leaves_uniform_odds() {
        let spec =
            SearchSpec::new(AmplitudeVector::basis(9, 77).unwrap(), Iterations::Fixed(0)).unwrap();
        let out = amplify(&AmplitudeVector::uniform(9).unwrap(), &spec).unwrap();
        assert!((success_probability(&out, &spec).unwrap() - 1.0 / 512.0).abs() < 1e-15);
    }

    #[test]
    fn optimal_iteration_counts() {
        assert_eq!(optimal_iterations(4, 1).unwrap(), 1);
        assert_eq!(optimal_iterations(512, 1).unwrap(), 17);
        assert_eq!(optimal_iterations(2, 1).unwrap(), 1);
        assert!((expected_success(2, 1, 1) - 0.5).abs() < 1e-12);
        assert!(optimal_iterations(4, 4).is_err());
        assert!(optimal_iterations(1, 1).is_err());
        assert!(optimal_iterations(8, 0).is_err());
    }

    #[test]
    fn rotated_and_direct_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = AmplitudeVector::random(6, &mut rng).unwrap();
        let spec = SearchSpec::new(t, Iterations::Fixed(1)).unwrap();
        let psi = AmplitudeVector::random(6, &mut rng).unwrap();
        let mut a = psi.clone();
        let mut b = psi.clone();
        apply_oracle(&mut a, &spec).unwrap();
        apply_oracle_direct(&mut b, &spec).unwrap();
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn entangled_target_follows_closed_form() {
        // (|5> + |9>)/sqrt2 overlaps the uniform state by sqrt(2/512), so the
        // two reflections rotate by the same angle as a two-marked search
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let t = AmplitudeVector::from_pairs(9, [(5, s), (9, s)]).unwrap();
        let spec = SearchSpec::new(t, Iterations::Fixed(0)).unwrap();
        let mut psi = AmplitudeVector::uniform(9).unwrap();
        for k in 1..=12 {
            grover_iterate(&mut psi, &spec).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            let p = success_probability(&psi, &spec).unwrap();
            assert!((p - expected_success(512, 2, k)).abs() < 1e-9);
        }
    }

    #[test]
    fn detect_errors() {
        let spec =
            SearchSpec::new(AmplitudeVector::basis(2, 1).unwrap(), Iterations::Auto).unwrap();
        let psi = AmplitudeVector::uniform(2).unwrap();
        assert!(detect(&psi, &spec, 0, 1).is_err());
        let multi = SearchSpec::with_marked(
            vec![
                AmplitudeVector::basis(3, 1).unwrap(),
                AmplitudeVector::basis(3, 2).unwrap(),
            ],
            Iterations::Auto,
        )
        .unwrap();
        assert!(detect(&AmplitudeVector::uniform(3).unwrap(), &multi, 10, 1).is_err());
        assert!(SearchSpec::with_marked(
            vec![
                AmplitudeVector::basis(3, 1).unwrap(),
                AmplitudeVector::basis(3, 1).unwrap()
            ],
            Iterations::Auto
        )
        .is_err());
    }

    #[test]
    fn certain_detection_is_seed_independent() {
        let t = AmplitudeVector::basis(2, 3).unwrap();
        let spec = SearchSpec::new(t.clone(), Iterations::Fixed(0)).unwrap();
        for seed in [0, 1, 99] {
            assert_eq!(detect(&t, &spec, 200, seed).unwrap(), 1.0);
        }
    }

    #[test]
    fn detect_is_deterministic_per_seed() {
        let spec =
            SearchSpec::new(AmplitudeVector::basis(4, 3).unwrap(), Iterations::Fixed(1)).unwrap();
        let psi = AmplitudeVector::uniform(4).unwrap();
        assert_eq!(
            detect(&psi, &spec, 500, 7).unwrap(),
            detect(&psi, &spec, 500, 7).unwrap()
        );
    }
}
