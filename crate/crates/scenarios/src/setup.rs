//! Plane-wave Raman setups and the one- and two-atom models built from them.

use num_complex::Complex;
use qcr_lambda::{CouplingSet, DetuningTable, HcSign, LambdaModel, LevelScheme, LEVEL_A, LEVEL_B};
use qcr_spaces::scalar::{lit, to_f64};
use qcr_spaces::{AtomicModeSet, CompositeBasis, LevelModes, PhotonMode, Real, SpatialBackend};

use crate::error::ScenarioError;

/// Internal state of an atom in the relevant block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Internal {
    A,
    B,
}

impl Internal {
    pub fn level(self) -> usize {
        match self {
            Internal::A => LEVEL_A,
            Internal::B => LEVEL_B,
        }
    }

    pub fn mode(self) -> PhotonMode {
        match self {
            Internal::A => PhotonMode::A,
            Internal::B => PhotonMode::B,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Internal::A => "a",
            Internal::B => "b",
        }
    }
}

/// Ancilla level ω_j with its co-rotating amplitudes c_{ja}, c_{jb}.
#[derive(Clone, Debug, PartialEq)]
pub struct Ancilla<T: Real> {
    pub omega: T,
    pub coupling: [Complex<T>; 2],
}

/// Two counter-propagating plane-wave lasers driving a Λ atom with ω_a = 0.
///
/// Ω_{jα}(R) = c_{jα} e^{i k_α q R}; the Raman kick is K = k_a − k_b in units of q.
#[derive(Clone, Debug, PartialEq)]
pub struct RamanSetup<T: Real> {
    pub omega_b: T,
    pub ancillas: Vec<Ancilla<T>>,
    pub photon: [T; 2],
    pub wavenumbers: [i64; 2],
    pub unit: T,
    /// Infinite mass freezes the centre of mass.
    pub mass: T,
    pub n_max: usize,
    pub rwa: bool,
    pub hc_sign: HcSign,
}

impl<T: Real> RamanSetup<T> {
    /// ω_b = 10, one ancilla at 105, lasers 100 and 90, c = 0.1, K = 2, M = 1000.
    pub fn desk() -> Self {
        let c = Complex::new(lit(0.1), T::zero());
        Self {
            omega_b: lit(10.0),
            ancillas: vec![Ancilla { omega: lit(105.0), coupling: [c, c] }],
            photon: [lit(100.0), lit(90.0)],
            wavenumbers: [1, -1],
            unit: T::one(),
            mass: lit(1000.0),
            n_max: 8,
            rwa: true,
            hc_sign: HcSign::Hermitian,
        }
    }

    pub fn kick(&self) -> i64 {
        self.wavenumbers[0] - self.wavenumbers[1]
    }

    pub fn levels(&self) -> Result<LevelScheme<T>, ScenarioError> {
        let w = self.ancillas.iter().map(|a| a.omega).collect();
        Ok(LevelScheme::new(T::zero(), self.omega_b, w)?.with_mass(self.mass)?)
    }

    pub fn couplings(&self) -> Result<CouplingSet<T>, ScenarioError> {
        let amps = self.ancillas.iter().map(|a| a.coupling).collect();
        Ok(CouplingSet::plane_waves(self.photon, self.wavenumbers, amps)?.with_rwa(self.rwa))
    }

    /// Every ancilla moved so that Δ⁽⁻⁾_{ja} = Ω_a − ω_j equals `detuning`.
    pub fn with_detuning(&self, detuning: T) -> Self {
        let mut out = self.clone();
        for a in &mut out.ancillas {
            a.omega = self.photon[0] - detuning;
        }
        out
    }

    /// ⟨b, p+K; n_a−1, n_b+1|𝒱̂|a, p; n_a, n_b⟩ / √(n_a(n_b+1)).
    pub fn rabi_element(&self) -> Result<Complex<T>, ScenarioError> {
        let d = DetuningTable::new(&self.levels()?, &self.couplings()?)?;
        let s: T = self.hc_sign.value();
        let mut x = Complex::new(T::zero(), T::zero());
        for (j, a) in self.ancillas.iter().enumerate() {
            x += a.coupling[1].conj() * a.coupling[0] * d.inv_slow(j, j, PhotonMode::A, PhotonMode::B);
        }
        Ok(x * s)
    }

    /// (p q)²/2M, zero for infinite mass.
    pub fn kinetic(&self, momentum: i64) -> T {
        if !self.mass.is_finite() {
            return T::zero();
        }
        let k = lit::<T>(momentum as f64) * self.unit;
        k * k / (lit::<T>(2.0) * self.mass)
    }

    /// Model on the given a- and b-momenta, ancillas without modes.
    pub fn model(&self, a: Vec<i64>, b: Vec<i64>, atoms: usize) -> Result<LambdaModel<T>, ScenarioError> {
        let mut levels = vec![("a".to_string(), LevelModes::Momenta(a)), ("b".to_string(), LevelModes::Momenta(b))];
        for j in 0..self.ancillas.len() {
            levels.push(((j + 3).to_string(), LevelModes::Momenta(vec![])));
        }
        let modes = AtomicModeSet::new(SpatialBackend::ladder(self.unit), levels, atoms)?;
        let basis = CompositeBasis::with_sectors(self.n_max, self.n_max, modes, &[atoms])?;
        Ok(LambdaModel::new(self.levels()?, self.couplings()?, basis, self.hc_sign)?)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.ancillas.is_empty() {
            return Err(ScenarioError::Input("at least one ancilla is required".into()));
        }
        if !(self.unit > T::zero()) {
            return Err(ScenarioError::Input(format!("momentum unit must be positive, got {}", to_f64(self.unit))));
        }
        if self.n_max == 0 {
            return Err(ScenarioError::Input("n_max must be at least 1".into()));
        }
        Ok(())
    }
}
