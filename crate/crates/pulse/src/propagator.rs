//! U = [cos(ϑΩ̂) − i sin(ϑΩ̂)Ω̂⁻¹𝒱̂]·exp(−iϑH₀⁽²⁾) with Ω̂ = √(V²).

use num_complex::Complex;
use qcr_spaces::scalar::{cr, lit, to_f64};
use qcr_spaces::{sinc, OperatorMatrix, Real, StateVector};

use crate::blocks::{components, BlockSpectrum};
use crate::error::PulseError;
use crate::reduced::ReducedHamiltonian;
use crate::spec::PulseSpec;

/// Relative tolerance below which negative V² eigenvalues count as round-off.
pub const NEGATIVE_TOL: f64 = 1e-8;

fn checked_root<T: Real>(lam: T, bound: T) -> Result<T, PulseError> {
    if lam < -bound {
        return Err(PulseError::NegativeSpectrum { value: to_f64(lam), bound: to_f64(bound) });
    }
    Ok(if lam > T::zero() { lam.sqrt() } else { T::zero() })
}

/// Cached spectra of V² and H₀⁽²⁾ for repeated pulse evaluation.
#[derive(Clone, Debug)]
pub struct PulsePropagator<T: Real> {
    v: OperatorMatrix<T>,
    v2: BlockSpectrum<T>,
    h0: BlockSpectrum<T>,
    bound: T,
}

impl<T: Real> PulsePropagator<T> {
    /// Uses the approximated V² of the reduced Hamiltonian.
    pub fn new(reduced: &ReducedHamiltonian<T>) -> Result<Self, PulseError> {
        Self::with_v2(reduced, &reduced.v_squared().approx)
    }

    pub fn with_v2(reduced: &ReducedHamiltonian<T>, v2: &OperatorMatrix<T>) -> Result<Self, PulseError> {
        let blocks = components(&[&reduced.h0, &reduced.v, v2]);
        let bound = lit::<T>(NEGATIVE_TOL) * v2.max_norm();
        let v2s = BlockSpectrum::new(v2, &blocks)?;
        for lam in v2s.eigenvalues() {
            checked_root(lam, bound)?;
        }
        Ok(Self { v: reduced.v.clone(), v2: v2s, h0: BlockSpectrum::new(&reduced.h0, &blocks)?, bound })
    }

    /// Ω̂ = √(V²).
    pub fn rabi_operator(&self) -> OperatorMatrix<T> {
        let b = self.bound;
        self.v2.apply(|x| cr(checked_root(x, b).unwrap_or(T::zero())))
    }

    pub fn operator(&self, theta: T) -> OperatorMatrix<T> {
        let b = self.bound;
        let cos = self.v2.apply(|x| cr((theta * checked_root(x, b).unwrap_or(T::zero())).cos()));
        let sinc_m = self.v2.apply(|x| cr(sinc(theta, checked_root(x, b).unwrap_or(T::zero()))));
        let free = self.h0.apply(|x| Complex::new((theta * x).cos(), -(theta * x).sin()));
        let minus_i = Complex::new(T::zero(), -T::one());
        let trig = &cos + &(&sinc_m * &self.v).scale(minus_i);
        &trig * &free
    }

    pub fn apply(&self, theta: T, psi: &StateVector<T>) -> Result<StateVector<T>, PulseError> {
        if psi.dim() != self.v.dim() {
            return Err(PulseError::Dimension { expected: self.v.dim(), got: psi.dim() });
        }
        let b = self.bound;
        let free = self.h0.apply_to(|x| Complex::new((theta * x).cos(), -(theta * x).sin()), psi.amplitudes());
        let cos = self.v2.apply_to(|x| cr((theta * checked_root(x, b).unwrap_or(T::zero())).cos()), &free);
        let vpsi = self.v.matrix() * &free;
        let s = self.v2.apply_to(|x| cr(sinc(theta, checked_root(x, b).unwrap_or(T::zero()))), &vpsi);
        let minus_i = Complex::new(T::zero(), -T::one());
        Ok(StateVector::new(cos + s * minus_i))
    }
}

/// Ω̂ = √(V²) from the approximated V², checked for significant negative eigenvalues.
pub fn rabi_operator<T: Real>(reduced: &ReducedHamiltonian<T>) -> Result<OperatorMatrix<T>, PulseError> {
    Ok(PulsePropagator::new(reduced)?.rabi_operator())
}

/// Time-evolution operator of the delta pulse.
pub fn delta_pulse_u<T: Real>(pulse: &PulseSpec<T>, reduced: &ReducedHamiltonian<T>) -> Result<OperatorMatrix<T>, PulseError> {
    Ok(PulsePropagator::new(reduced)?.operator(pulse.theta()))
}
