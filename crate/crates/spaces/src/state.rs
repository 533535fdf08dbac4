use nalgebra::DVector;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::SpaceError;
use crate::scalar::{lit, Real};

/// Amplitude vector over a basis, with its norm cached at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    amps: DVector<Complex<T>>,
    norm: T,
}

impl<T: Real> StateVector<T> {
    pub fn new(amps: DVector<Complex<T>>) -> Self {
        let norm = amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        Self { amps, norm }
    }

    pub fn from_vec(v: Vec<Complex<T>>) -> Self {
        Self::new(DVector::from_vec(v))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { amps: DVector::zeros(dim), norm: T::zero() }
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex::one();
        Self { amps, norm: T::one() }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> Complex<T> {
        self.amps[i]
    }

    pub fn probability(&self, i: usize) -> T {
        self.amps[i].norm_sqr()
    }

    pub fn norm(&self) -> T {
        self.norm
    }

    pub fn normalize(&self) -> Result<Self, SpaceError> {
        if self.norm.is_zero() || !self.norm.is_finite() {
            return Err(SpaceError::ZeroNorm);
        }
        // already-unit vectors are returned bit-identical
        if (self.norm - T::one()).abs() <= lit::<T>(1e-15) {
            return Ok(self.clone());
        }
        Ok(Self::new(self.amps.map(|z| z / self.norm)))
    }

    /// ⟨self|other⟩
    pub fn inner_product(&self, other: &Self) -> Complex<T> {
        self.amps.dotc(&other.amps)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.amps.map(|z| z * c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.amps + &other.amps)
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|z| z.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_norm_rejected() {
        assert_eq!(StateVector::<f64>::zeros(3).normalize(), Err(SpaceError::ZeroNorm));
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(v in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..12)) {
            let s = StateVector::from_vec(v.iter().map(|(a, b)| Complex::new(*a, *b)).collect());
            prop_assume!(s.norm() > 1e-6);
            let n1 = s.normalize().unwrap();
            let n2 = n1.normalize().unwrap();
            prop_assert!((n1.inner_product(&n1).re - 1.0).abs() <= 1e-12);
            prop_assert_eq!(n1, n2);
        }
    }
}
