//! Scalar abstraction shared by every crate in the workspace.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type usable as the scalar of all operators (f32 or f64).
pub trait Real:
    RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an f64 literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cr<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// e^{iφ}
#[inline]
pub fn expi<T: Real>(phi: T) -> Complex<T> {
    Complex::new(phi.cos(), phi.sin())
}

#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Machine epsilon of the scalar type.
#[inline]
pub fn eps<T: Real>() -> T {
    T::default_epsilon()
}
