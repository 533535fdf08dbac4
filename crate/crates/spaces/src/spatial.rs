//! Position-dependent scalar functions and the two spatial backends.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::SpaceError;
use crate::scalar::{expi, lit, Real};

/// Uniform 1D quadrature grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T: Real> {
    points: Vec<T>,
    weights: Vec<T>,
    spacing: T,
    periodic: bool,
}

impl<T: Real> Grid<T> {
    /// Periodic grids hold `n` points on [x0, x1) with equal weights;
    /// open grids hold `n` points on [x0, x1] with trapezoid weights.
    pub fn uniform(x0: T, x1: T, n: usize, periodic: bool) -> Result<Self, SpaceError> {
        if n < 2 && !periodic {
            return Err(SpaceError::Grid("open grid needs at least two points".into()));
        }
        if n == 0 || !(x1 > x0) {
            return Err(SpaceError::Grid("empty interval".into()));
        }
        let len = x1 - x0;
        let spacing = if periodic { len / lit(n as f64) } else { len / lit((n - 1) as f64) };
        let points = (0..n).map(|i| x0 + spacing * lit(i as f64)).collect();
        let mut weights = vec![spacing; n];
        if !periodic {
            let half: T = lit(0.5);
            weights[0] = spacing * half;
            weights[n - 1] = spacing * half;
        }
        Ok(Self { points, weights, spacing, periodic })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    /// Σ w_i conj(f_i) g_i
    pub fn inner(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::zero();
        for i in 0..self.len() {
            acc += f[i].conj() * g[i] * self.weights[i];
        }
        acc
    }

    /// Three-point second derivative; zero boundary values on open grids.
    pub fn second_derivative(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.len();
        let h2 = self.spacing * self.spacing;
        let two: T = lit(2.0);
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    f[i - 1]
                } else if self.periodic {
                    f[n - 1]
                } else {
                    Complex::zero()
                };
                let right = if i + 1 < n {
                    f[i + 1]
                } else if self.periodic {
                    f[0]
                } else {
                    Complex::zero()
                };
                (left + right - f[i] * two) / h2
            })
            .collect()
    }
}

/// Scalar function of the centre-of-mass coordinate.
///
/// `Fourier` holds Σ_k c_k e^{i k q R} with integer k in units of the backend
/// wavenumber q; `Sampled` holds values on the grid backend.
#[derive(Clone, Debug, PartialEq)]
pub enum SpatialFunction<T: Real> {
    Fourier(BTreeMap<i64, Complex<T>>),
    Sampled(Vec<Complex<T>>),
}

impl<T: Real> SpatialFunction<T> {
    pub fn zero() -> Self {
        SpatialFunction::Fourier(BTreeMap::new())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::plane_wave(0, c)
    }

    /// c·e^{i k q R}
    pub fn plane_wave(k: i64, c: Complex<T>) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        SpatialFunction::Fourier(m)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpatialFunction::Fourier(m) => m.values().all(|c| c.is_zero()),
            SpatialFunction::Sampled(v) => v.iter().all(|c| c.is_zero()),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            SpatialFunction::Fourier(m) => {
                SpatialFunction::Fourier(m.iter().map(|(k, c)| (-k, c.conj())).collect())
            }
            SpatialFunction::Sampled(v) => SpatialFunction::Sampled(v.iter().map(|c| c.conj()).collect()),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        match self {
            SpatialFunction::Fourier(m) => SpatialFunction::Fourier(
                m.iter().map(|(k, c)| (*k, *c * s)).filter(|(_, c)| !c.is_zero()).collect(),
            ),
            SpatialFunction::Sampled(v) => SpatialFunction::Sampled(v.iter().map(|c| *c * s).collect()),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SpaceError> {
        match (self, other) {
            (SpatialFunction::Fourier(a), SpatialFunction::Fourier(b)) => {
                let mut out: BTreeMap<i64, Complex<T>> = BTreeMap::new();
                for (ka, ca) in a {
                    for (kb, cb) in b {
                        *out.entry(ka + kb).or_insert_with(Complex::zero) += *ca * *cb;
                    }
                }
                out.retain(|_, c| !c.is_zero());
                Ok(SpatialFunction::Fourier(out))
            }
            (SpatialFunction::Sampled(a), SpatialFunction::Sampled(b)) if a.len() == b.len() => {
                Ok(SpatialFunction::Sampled(a.iter().zip(b).map(|(x, y)| *x * *y).collect()))
            }
            _ => Err(SpaceError::Backend {
                backend: "mixed",
                what: "product of Fourier and sampled functions; sample both first".into(),
            }),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpaceError> {
        match (self, other) {
            (SpatialFunction::Fourier(a), SpatialFunction::Fourier(b)) => {
                let mut out = a.clone();
                for (k, c) in b {
                    *out.entry(*k).or_insert_with(Complex::zero) += *c;
                }
                out.retain(|_, c| !c.is_zero());
                Ok(SpatialFunction::Fourier(out))
            }
            (SpatialFunction::Sampled(a), SpatialFunction::Sampled(b)) if a.len() == b.len() => {
                Ok(SpatialFunction::Sampled(a.iter().zip(b).map(|(x, y)| *x + *y).collect()))
            }
            _ => Err(SpaceError::Backend {
                backend: "mixed",
                what: "sum of Fourier and sampled functions".into(),
            }),
        }
    }

    /// Value at position x (Fourier functions only need the wavenumber unit).
    pub fn eval(&self, x: T, unit: T) -> Option<Complex<T>> {
        match self {
            SpatialFunction::Fourier(m) => Some(
                m.iter()
                    .fold(Complex::zero(), |acc, (k, c)| acc + *c * expi(unit * lit(*k as f64) * x)),
            ),
            SpatialFunction::Sampled(_) => None,
        }
    }

    pub fn sampled_on(&self, grid: &Grid<T>, unit: T) -> Vec<Complex<T>> {
        match self {
            SpatialFunction::Fourier(_) => {
                grid.points().iter().map(|x| self.eval(*x, unit).unwrap()).collect()
            }
            SpatialFunction::Sampled(v) => v.clone(),
        }
    }

    /// Value if the function is position independent.
    pub fn as_constant(&self) -> Option<Complex<T>> {
        match self {
            SpatialFunction::Fourier(m) => {
                if m.keys().all(|k| *k == 0) {
                    Some(m.get(&0).copied().unwrap_or_else(Complex::zero))
                } else {
                    None
                }
            }
            SpatialFunction::Sampled(v) => {
                let first = v.first().copied().unwrap_or_else(Complex::zero);
                v.iter().all(|c| *c == first).then_some(first)
            }
        }
    }
}

/// How external modes are represented.
#[derive(Clone, Debug, PartialEq)]
pub enum SpatialBackend<T: Real> {
    /// Plane waves e^{i p q R} labelled by integer p; `period` folds labels onto a ring.
    Ladder { unit: T, period: Option<i64> },
    Grid(Grid<T>),
}

impl<T: Real> SpatialBackend<T> {
    pub fn ladder(unit: T) -> Self {
        SpatialBackend::Ladder { unit, period: None }
    }

    pub fn ring(unit: T, period: i64) -> Self {
        SpatialBackend::Ladder { unit, period: Some(period) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpatialBackend::Ladder { .. } => "momentum-ladder",
            SpatialBackend::Grid(_) => "grid",
        }
    }

    /// Wavenumber unit q (grid backends use it to sample Fourier functions).
    pub fn unit(&self) -> T {
        match self {
            SpatialBackend::Ladder { unit, .. } => *unit,
            SpatialBackend::Grid(_) => T::one(),
        }
    }
}
