//! Pulse outputs: amplitudes, populations, coincidence and phase records.

use num_complex::Complex;
use qcr_lambda::LambdaModel;
use qcr_pulse::{PulsePropagator, ReducedHamiltonian};
use qcr_spaces::{Real, StateVector};

use crate::error::ScenarioError;
use crate::setup::Internal;

/// Probability of one basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct Population<T: Real> {
    /// Occupied (internal state, momentum label) pairs, sorted.
    pub atoms: Vec<(Internal, i64)>,
    pub n_a: usize,
    pub n_b: usize,
    pub probability: T,
}

impl<T: Real> Population<T> {
    pub fn count(&self, state: Internal) -> usize {
        self.atoms.iter().filter(|(s, _)| *s == state).count()
    }

    /// Compact label such as `a@0 b@2`.
    pub fn label(&self) -> String {
        self.atoms.iter().map(|(s, p)| format!("{}@{p}", s.name())).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    /// 𝒞_{n_α} on an unchanged state
    Stay,
    /// 𝒞_{n_α,+ℏK} after a→b
    KickPlus,
    /// 𝒞_{n_α,−ℏK} after b→a
    KickMinus,
}

/// Free-evolution phase factor 𝒞 of one branch of an input component.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseRecord<T: Real> {
    pub kind: PhaseKind,
    pub state: Internal,
    pub momentum: i64,
    pub photons: [usize; 2],
    pub value: Complex<T>,
}

/// Compact per-run numbers used by sweeps and the CLI.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary<T: Real> {
    /// P(k atoms in b), k = 0, 1, 2.
    pub p_b: [T; 3],
    pub coincidence: T,
    pub norm_sqr: T,
}

#[derive(Clone, Debug)]
pub struct PulseResult<T: Real> {
    pub theta: T,
    pub output: StateVector<T>,
    /// Nonzero populations per (atomic configuration, n_a, n_b).
    pub populations: Vec<Population<T>>,
    /// Total probability of one atom in a and one in b.
    pub coincidence: T,
    pub phases: Vec<PhaseRecord<T>>,
    pub truncation_error: T,
}

impl<T: Real> PulseResult<T> {
    pub(crate) fn new(
        model: &LambdaModel<T>,
        theta: T,
        output: StateVector<T>,
        phases: Vec<PhaseRecord<T>>,
        truncation_error: T,
    ) -> Self {
        let basis = model.basis();
        let modes = basis.modes();
        let mut populations = Vec::new();
        for i in 0..output.dim() {
            let probability = output.probability(i);
            if probability == T::zero() {
                continue;
            }
            let l = basis.label(i);
            let mut atoms = Vec::new();
            for state in [Internal::A, Internal::B] {
                for m in 0..modes.n_modes(state.level()) {
                    let n = l.occupation[modes.flat_index(state.level(), m).expect("mode in range")];
                    let p = modes.momentum(state.level(), m).expect("ladder mode");
                    atoms.extend(std::iter::repeat_n((state, p), n as usize));
                }
            }
            populations.push(Population { atoms, n_a: l.n_a, n_b: l.n_b, probability });
        }
        let coincidence = populations
            .iter()
            .filter(|p| p.count(Internal::A) == 1 && p.count(Internal::B) == 1)
            .fold(T::zero(), |acc, p| acc + p.probability);
        Self { theta, output, populations, coincidence, phases, truncation_error }
    }

    pub fn total(&self) -> T {
        self.populations.iter().fold(T::zero(), |acc, p| acc + p.probability)
    }

    /// Σ P over states with the given number of atoms in a and in b.
    pub fn internal(&self, in_a: usize, in_b: usize) -> T {
        self.probability(|p| p.count(Internal::A) == in_a && p.count(Internal::B) == in_b)
    }

    pub fn probability(&self, keep: impl Fn(&Population<T>) -> bool) -> T {
        self.populations.iter().filter(|p| keep(p)).fold(T::zero(), |acc, p| acc + p.probability)
    }

    pub fn summary(&self) -> Summary<T> {
        let mut p_b = [T::zero(); 3];
        for p in &self.populations {
            let k = p.count(Internal::B).min(2);
            p_b[k] += p.probability;
        }
        Summary { p_b, coincidence: self.coincidence, norm_sqr: self.total() }
    }
}

/// Model, cached propagator and input state of one scenario.
#[derive(Clone, Debug)]
pub struct PreparedRun<T: Real> {
    pub model: LambdaModel<T>,
    pub input: StateVector<T>,
    pub phases: Vec<PhaseRecord<T>>,
    pub truncation_error: T,
    propagator: PulsePropagator<T>,
}

impl<T: Real> PreparedRun<T> {
    pub(crate) fn new(
        model: LambdaModel<T>,
        input: StateVector<T>,
        phases: Vec<PhaseRecord<T>>,
        truncation_error: T,
    ) -> Result<Self, ScenarioError> {
        let reduced = ReducedHamiltonian::from_model(&model)?;
        let propagator = PulsePropagator::new(&reduced)?;
        Ok(Self { model, input, phases, truncation_error, propagator })
    }

    pub fn propagator(&self) -> &PulsePropagator<T> {
        &self.propagator
    }

    /// Output of the delta pulse with area ϑ ≥ 0.
    pub fn run(&self, theta: T) -> Result<PulseResult<T>, ScenarioError> {
        if !(theta >= T::zero() && theta.is_finite()) {
            return Err(ScenarioError::Input(format!("pulse area must be finite and non-negative, got {}", qcr_spaces::scalar::to_f64(theta))));
        }
        let out = self.propagator.apply(theta, &self.input)?;
        Ok(PulseResult::new(&self.model, theta, out, self.phases.clone(), self.truncation_error))
    }
}
