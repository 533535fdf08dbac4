//! Single-particle Raman diffraction.

use std::collections::BTreeSet;

use num_complex::Complex;
use qcr_lambda::LambdaModel;
use qcr_pulse::{phase_factor_c, PulseSpec};
use qcr_spaces::scalar::cr;
use qcr_spaces::{Real, StateVector};

use crate::error::ScenarioError;
use crate::inputs::{AtomicInput, OpticalInput};
use crate::result::{PhaseKind, PhaseRecord, PreparedRun, PulseResult};
use crate::setup::{Internal, RamanSetup};

/// Basis index of one atom at (state, momentum) with light |n_a, n_b⟩.
pub(crate) fn state_index<T: Real>(
    model: &LambdaModel<T>,
    atoms: &[(Internal, i64)],
    n_a: usize,
    n_b: usize,
) -> Result<usize, ScenarioError> {
    let basis = model.basis();
    let mut placed = Vec::with_capacity(atoms.len());
    for &(s, p) in atoms {
        let m = basis
            .modes()
            .find_momentum(s.level(), p)
            .ok_or_else(|| ScenarioError::Mismatch(format!("no {} mode at momentum {p}", s.name())))?;
        placed.push((s.level(), m));
    }
    let occ = basis.occupation(&placed)?;
    basis
        .find(&occ, n_a, n_b)
        .ok_or_else(|| ScenarioError::Mismatch(format!("photons ({n_a}, {n_b}) exceed n_max = {}", basis.ladder(qcr_spaces::PhotonMode::A).n_max())))
}

/// 𝒞 of an atom at (state, p) with light |n_a, n_b⟩.
pub(crate) fn phase_value<T: Real>(setup: &RamanSetup<T>, model: &LambdaModel<T>, state: Internal, p: i64, photons: [usize; 2]) -> Complex<T> {
    phase_factor_c(model, state.mode(), photons, cr(setup.kinetic(p)), T::zero())
}

/// Stay and kick records for one input component.
pub(crate) fn phase_records<T: Real>(
    setup: &RamanSetup<T>,
    model: &LambdaModel<T>,
    state: Internal,
    p: i64,
    [n_a, n_b]: [usize; 2],
) -> Vec<PhaseRecord<T>> {
    let k = setup.kick();
    let mut out = vec![PhaseRecord { kind: PhaseKind::Stay, state, momentum: p, photons: [n_a, n_b], value: phase_value(setup, model, state, p, [n_a, n_b]) }];
    let target = match state {
        Internal::A if n_a > 0 && n_b < setup.n_max => Some((PhaseKind::KickPlus, Internal::B, p + k, [n_a - 1, n_b + 1])),
        Internal::B if n_b > 0 && n_a < setup.n_max => Some((PhaseKind::KickMinus, Internal::A, p - k, [n_a + 1, n_b - 1])),
        _ => None,
    };
    if let Some((kind, s, q, ph)) = target {
        out.push(PhaseRecord { kind, state: s, momentum: q, photons: ph, value: phase_value(setup, model, s, q, ph) });
    }
    out
}

/// Builds the one-atom model on a-momenta p and b-momenta p + K and the input state.
pub fn prepare_single<T: Real>(
    setup: &RamanSetup<T>,
    atom: &AtomicInput<T>,
    light: &OpticalInput<T>,
) -> Result<PreparedRun<T>, ScenarioError> {
    setup.validate()?;
    let k = setup.kick();
    let expansion = atom.expand(k, setup.unit)?;
    let light = light.normalized()?;
    if light.max_photons() > setup.n_max {
        return Err(ScenarioError::Mismatch(format!("light input needs {} photons, n_max = {}", light.max_photons(), setup.n_max)));
    }
    let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
    for &(s, p, _) in &expansion.components {
        let (pa, pb) = match s {
            Internal::A => (p, p + k),
            Internal::B => (p - k, p),
        };
        a.insert(pa);
        b.insert(pb);
    }
    let model = setup.model(a.into_iter().collect(), b.into_iter().collect(), 1)?;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); model.dim()];
    let mut phases = Vec::new();
    for &(s, p, c) in &expansion.components {
        for ((n_a, n_b), w) in light.entries() {
            amps[state_index(&model, &[(s, p)], n_a, n_b)?] += c * w;
            phases.extend(phase_records(setup, &model, s, p, [n_a, n_b]));
        }
    }
    PreparedRun::new(model, StateVector::from_vec(amps), phases, expansion.truncation_error)
}

/// Delta-pulse output for one atom.
pub fn run_single_particle<T: Real>(
    setup: &RamanSetup<T>,
    atom: &AtomicInput<T>,
    light: &OpticalInput<T>,
    pulse: &PulseSpec<T>,
) -> Result<PulseResult<T>, ScenarioError> {
    prepare_single(setup, atom, light)?.run(pulse.theta())
}
