use qcr_spaces::Real;

use crate::error::PulseError;

/// Delta pulse of area 𝒜 and strength Γ acting at t′; ϑ = 𝒜/Γ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec<T: Real> {
    pub area: T,
    pub strength: T,
    pub instant: T,
}

impl<T: Real> PulseSpec<T> {
    pub fn new(area: T, strength: T, instant: T) -> Result<Self, PulseError> {
        if !(strength > T::zero() && strength.is_finite()) {
            return Err(PulseError::InvalidPulse("strength must be positive and finite".into()));
        }
        if !(area > T::zero() && area.is_finite()) {
            return Err(PulseError::InvalidPulse("area must be positive and finite".into()));
        }
        Ok(Self { area, strength, instant })
    }

    /// Unit strength, so ϑ equals the area.
    pub fn from_theta(theta: T) -> Result<Self, PulseError> {
        Self::new(theta, T::one(), T::zero())
    }

    pub fn theta(&self) -> T {
        self.area / self.strength
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_is_area_over_strength() {
        let p = PulseSpec::new(3.0, 1.5, 0.0).unwrap();
        assert_eq!(p.theta(), 2.0);
        assert!(PulseSpec::new(1.0, 0.0, 0.0).is_err());
        assert!(PulseSpec::new(-1.0, 1.0, 0.0).is_err());
        assert!(PulseSpec::<f64>::from_theta(0.0).is_err());
    }
}
