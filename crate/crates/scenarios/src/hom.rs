//! Two-atom Hong-Ou-Mandel interference on a shared Raman pulse.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use qcr_pulse::PulseSpec;
use qcr_spaces::scalar::{cr, lit};
use qcr_spaces::{Real, StateVector};

use crate::error::ScenarioError;
use crate::inputs::{OpticalInput, PairInput};
use crate::result::{PreparedRun, PulseResult};
use crate::setup::{Internal, RamanSetup};
use crate::single::{phase_records, state_index};

/// Builds the two-atom model and the normalized symmetric input.
///
/// Plane-wave couplings have the same magnitude at both atoms, so the shared-field
/// assumption holds by construction; the light must carry equal photon numbers.
pub fn prepare_hom<T: Real>(
    setup: &RamanSetup<T>,
    pair: &PairInput<T>,
    light: &OpticalInput<T>,
) -> Result<PreparedRun<T>, ScenarioError> {
    setup.validate()?;
    pair.check_symmetric()?;
    let light = light.normalized()?;
    if let Some(((x, y), _)) = light.entries().find(|((x, y), _)| x != y) {
        return Err(ScenarioError::Input(format!("two-atom light needs n_a = n_b, found ({x}, {y})")));
    }
    if light.max_photons() > setup.n_max {
        return Err(ScenarioError::Mismatch(format!("light input needs {} photons, n_max = {}", light.max_photons(), setup.n_max)));
    }
    let k = setup.kick();
    let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
    for (x, y, _) in &pair.table {
        for &(s, p) in [x, y] {
            match s {
                Internal::A => (a.insert(p), b.insert(p + k)),
                Internal::B => (a.insert(p - k), b.insert(p)),
            };
        }
    }
    let model = setup.model(a.into_iter().collect(), b.into_iter().collect(), 2)?;

    // Ψ(x₁,x₂) ψ†(x₁)ψ†(x₂)/√2 |0⟩ in occupation amplitudes
    let half = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let mut atoms: BTreeMap<Vec<(Internal, i64)>, Complex<T>> = BTreeMap::new();
    for &(x, y, c) in &pair.table {
        let mut key = vec![x, y];
        key.sort();
        let w = if x == y { c } else { c * half };
        *atoms.entry(key).or_insert_with(|| Complex::new(T::zero(), T::zero())) += w;
    }
    let mut amps = vec![Complex::new(T::zero(), T::zero()); model.dim()];
    let mut phases = Vec::new();
    for ((n_a, n_b), w) in light.entries() {
        for (key, c) in &atoms {
            amps[state_index(&model, key, n_a, n_b)?] += *c * w;
        }
        let singles: BTreeSet<_> = atoms.keys().flatten().copied().collect();
        for (s, p) in singles {
            phases.extend(phase_records(setup, &model, s, p, [n_a, n_b]));
        }
    }
    let psi = StateVector::from_vec(amps);
    let n2 = psi.norm();
    if !(n2 > T::zero()) {
        return Err(ScenarioError::Input("two-particle input has zero norm".into()));
    }
    PreparedRun::new(model, psi.scale(cr(T::one() / n2)), phases, T::zero())
}

pub fn run_hom<T: Real>(
    setup: &RamanSetup<T>,
    pair: &PairInput<T>,
    light: &OpticalInput<T>,
    pulse: &PulseSpec<T>,
) -> Result<PulseResult<T>, ScenarioError> {
    prepare_hom(setup, pair, light)?.run(pulse.theta())
}

/// Ω_n = |Ω|√(n² + n), the |ab⟩ amplitude being cos(2ϑΩ_n).
pub fn hom_frequency<T: Real>(setup: &RamanSetup<T>, n: usize) -> Result<T, ScenarioError> {
    Ok(setup.rabi_element()?.norm_sqr().sqrt() * lit::<T>((n * n + n) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::Internal::{A, B};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn pair(s: &RamanSetup<f64>) -> PairInput<f64> {
        PairInput::ab(0, s.kick())
    }

    #[test]
    fn dip_at_quarter_period() {
        let s = RamanSetup::<f64>::desk();
        for n in 1..=4 {
            let run = prepare_hom(&s, &pair(&s), &OpticalInput::fock(n, n)).unwrap();
            assert_eq!(run.model.dim(), 3 * 81);
            let w = hom_frequency(&s, n).unwrap();
            let r = run.run(FRAC_PI_4 / w).unwrap();
            assert!(r.coincidence <= 1e-10, "n = {n}: {}", r.coincidence);
            // bunching with anti-correlated photon swaps
            let bb = r.probability(|p| p.count(B) == 2 && (p.n_a, p.n_b) == (n - 1, n + 1));
            let aa = r.probability(|p| p.count(A) == 2 && (p.n_a, p.n_b) == (n + 1, n - 1));
            assert!((bb + aa - 1.0).abs() < 1e-10);
            assert!((bb - 0.5).abs() < 1e-10);
            assert!((run.run(0.0).unwrap().coincidence - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coincidence_follows_cos_squared() {
        let s = RamanSetup::<f64>::desk();
        let run = prepare_hom(&s, &pair(&s), &OpticalInput::fock(1, 1)).unwrap();
        let w = hom_frequency(&s, 1).unwrap();
        assert!((run.run(FRAC_PI_3 / w).unwrap().coincidence - 0.25).abs() < 1e-10);
        for t in [0.1, 0.7, 1.3, 2.9] {
            let r = run.run(t / w).unwrap();
            assert!((r.coincidence - (2.0 * t).cos().powi(2)).abs() < 1e-10);
            assert!((r.total() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn optical_limit_has_two_branches() {
        let s = RamanSetup { mass: f64::INFINITY, ..RamanSetup::<f64>::desk() };
        let r = run_hom(&s, &pair(&s), &OpticalInput::fock(1, 1), &PulseSpec::from_theta(FRAC_PI_4 / hom_frequency(&s, 1).unwrap()).unwrap()).unwrap();
        let bb = r.probability(|p| p.count(B) == 2 && (p.n_a, p.n_b) == (0, 2));
        let aa = r.probability(|p| p.count(A) == 2 && (p.n_a, p.n_b) == (2, 0));
        assert!((bb - 0.5).abs() < 1e-10 && (aa - 0.5).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = RamanSetup::<f64>::desk();
        let asym = PairInput { table: vec![((A, 0), (B, 2), Complex::new(1.0, 0.0))] };
        assert!(matches!(prepare_hom(&s, &asym, &OpticalInput::fock(1, 1)), Err(ScenarioError::NotSymmetric(_))));
        assert!(matches!(prepare_hom(&s, &pair(&s), &OpticalInput::fock(1, 2)), Err(ScenarioError::Input(_))));
    }

    #[test]
    fn numerical_normalization_of_unnormalized_table() {
        let s = RamanSetup::<f64>::desk();
        let mut p = pair(&s);
        for e in &mut p.table {
            e.2 *= 3.0;
        }
        let run = prepare_hom(&s, &p, &OpticalInput::fock(2, 2)).unwrap();
        assert!((run.input.norm() - 1.0).abs() < 1e-15);
    }
}
