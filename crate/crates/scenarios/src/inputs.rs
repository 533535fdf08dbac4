//! Optical and atomic input states.

use std::collections::BTreeMap;

use num_complex::Complex;
use qcr_pulse::GaussianAmplitude;
use qcr_spaces::scalar::{cr, lit, to_f64};
use qcr_spaces::Real;

use crate::error::ScenarioError;
use crate::setup::Internal;

/// Amplitudes w_{n_a n_b} over photon Fock pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct OpticalInput<T: Real> {
    table: BTreeMap<(usize, usize), Complex<T>>,
}

impl<T: Real> OpticalInput<T> {
    pub fn fock(n_a: usize, n_b: usize) -> Self {
        Self { table: BTreeMap::from([((n_a, n_b), Complex::new(T::one(), T::zero()))]) }
    }

    /// w_{n_a n_b} = w_{n_a} w_{n_b}
    pub fn product(w_a: &[Complex<T>], w_b: &[Complex<T>]) -> Self {
        let mut table = BTreeMap::new();
        for (i, x) in w_a.iter().enumerate() {
            for (j, y) in w_b.iter().enumerate() {
                let w = *x * *y;
                if w.norm_sqr() > T::zero() {
                    table.insert((i, j), w);
                }
            }
        }
        Self { table }
    }

    pub fn from_table(entries: impl IntoIterator<Item = ((usize, usize), Complex<T>)>) -> Self {
        let mut table = BTreeMap::new();
        for (k, w) in entries {
            *table.entry(k).or_insert_with(|| Complex::new(T::zero(), T::zero())) += w;
        }
        Self { table }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Complex<T>)> + '_ {
        self.table.iter().map(|(k, w)| (*k, *w))
    }

    pub fn norm_sqr(&self) -> T {
        self.table.values().fold(T::zero(), |acc, w| acc + w.norm_sqr())
    }

    pub fn normalized(&self) -> Result<Self, ScenarioError> {
        let n = self.norm_sqr().sqrt();
        if !(n > T::zero()) {
            return Err(ScenarioError::Input("optical input has zero norm".into()));
        }
        Ok(Self { table: self.table.iter().map(|(k, w)| (*k, *w / cr(n))).collect() })
    }

    pub fn max_photons(&self) -> usize {
        self.table.keys().map(|(a, b)| *a.max(b)).max().unwrap_or(0)
    }

    /// Entry with the largest weight.
    pub fn dominant(&self) -> Option<(usize, usize)> {
        self.table.iter().max_by(|x, y| x.1.norm_sqr().partial_cmp(&y.1.norm_sqr()).unwrap()).map(|(k, _)| *k)
    }
}

/// One atom, either in a single momentum mode or with a Gaussian momentum profile.
#[derive(Clone, Debug, PartialEq)]
pub enum AtomicInput<T: Real> {
    Momentum { state: Internal, momentum: i64 },
    /// Expanded over momentum labels within ±support·|K| of κ/q.
    Gaussian { state: Internal, amplitude: GaussianAmplitude<T>, support: i64 },
}

/// Momentum-ladder expansion of a one-atom input.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<T: Real> {
    pub components: Vec<(Internal, i64, Complex<T>)>,
    /// Discarded fraction of Σ|c_p|² outside the support.
    pub truncation_error: T,
}

impl<T: Real> AtomicInput<T> {
    pub fn momentum(state: Internal, momentum: i64) -> Self {
        AtomicInput::Momentum { state, momentum }
    }

    pub fn gaussian(state: Internal, amplitude: GaussianAmplitude<T>) -> Self {
        AtomicInput::Gaussian { state, amplitude, support: 4 }
    }

    pub fn expand(&self, kick: i64, unit: T) -> Result<Expansion<T>, ScenarioError> {
        match self {
            AtomicInput::Momentum { state, momentum } => Ok(Expansion {
                components: vec![(*state, *momentum, Complex::new(T::one(), T::zero()))],
                truncation_error: T::zero(),
            }),
            AtomicInput::Gaussian { state, amplitude, support } => {
                if amplitude.dim() != 1 {
                    return Err(ScenarioError::Input("ladder expansion needs a one-dimensional Gaussian".into()));
                }
                if *support < 0 {
                    return Err(ScenarioError::Input(format!("negative support {support}")));
                }
                let centre = to_f64(amplitude.kappa[0] / unit).round() as i64;
                let half = support * kick.abs().max(1);
                let weight = |p: i64| amplitude.momentum_amplitude(lit::<T>(p as f64) * unit);
                let mut components = Vec::new();
                let mut kept = T::zero();
                for p in centre - half..=centre + half {
                    let c = weight(p);
                    kept += c * c;
                    components.push((*state, p, cr(c)));
                }
                let mut tail = T::zero();
                let tiny: T = lit(1e-40);
                for side in [-1i64, 1] {
                    let mut p = centre + side * (half + 1);
                    loop {
                        let c = weight(p);
                        tail += c * c;
                        if c * c < tiny * kept || (p - centre).abs() > half + 100_000 {
                            break;
                        }
                        p += side;
                    }
                }
                let n = kept.sqrt();
                for c in &mut components {
                    c.2 /= cr(n);
                }
                Ok(Expansion { components, truncation_error: tail / (kept + tail) })
            }
        }
    }
}

/// (first atom, second atom, amplitude), each atom as (state, momentum).
pub type PairEntry<T> = ((Internal, i64), (Internal, i64), Complex<T>);

/// First-quantized two-atom amplitude Ψ(x₁, x₂), x = (internal state, momentum label).
#[derive(Clone, Debug, PartialEq)]
pub struct PairInput<T: Real> {
    pub table: Vec<PairEntry<T>>,
}

impl<T: Real> PairInput<T> {
    /// One atom in a at p_a and one in b at p_b, symmetrized.
    pub fn ab(p_a: i64, p_b: i64) -> Self {
        let h = Complex::new(lit::<T>(std::f64::consts::FRAC_1_SQRT_2), T::zero());
        Self { table: vec![((Internal::A, p_a), (Internal::B, p_b), h), ((Internal::B, p_b), (Internal::A, p_a), h)] }
    }

    fn amplitude(&self, x: (Internal, i64), y: (Internal, i64)) -> Complex<T> {
        self.table
            .iter()
            .filter(|(u, v, _)| *u == x && *v == y)
            .fold(Complex::new(T::zero(), T::zero()), |acc, e| acc + e.2)
    }

    /// max |Ψ(x₁,x₂) − Ψ(x₂,x₁)| relative to max |Ψ|.
    pub fn symmetry_defect(&self) -> T {
        let scale = self.table.iter().fold(T::zero(), |m, e| m.max(e.2.norm_sqr().sqrt()));
        if scale == T::zero() {
            return T::zero();
        }
        let worst = self
            .table
            .iter()
            .fold(T::zero(), |m, (x, y, _)| m.max((self.amplitude(*x, *y) - self.amplitude(*y, *x)).norm_sqr().sqrt()));
        worst / scale
    }

    pub fn check_symmetric(&self) -> Result<(), ScenarioError> {
        let d = self.symmetry_defect();
        if d > lit(1e-12) {
            return Err(ScenarioError::NotSymmetric(to_f64(d)));
        }
        if self.table.is_empty() {
            return Err(ScenarioError::Input("two-particle input is empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_light_is_normalized_after_request() {
        let w = [Complex::<f64>::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let l = OpticalInput::product(&w, &w);
        assert!((l.norm_sqr() - 1.0).abs() < 1e-15);
        let l = OpticalInput::from_table([((1, 1), Complex::new(2.0, 0.0))]).normalized().unwrap();
        assert_eq!(l.entries().next().unwrap().1, Complex::new(1.0, 0.0));
        assert!(OpticalInput::<f64>::from_table([]).normalized().is_err());
    }

    #[test]
    fn gaussian_expansion_records_tail() {
        let g = GaussianAmplitude::new(0.5, vec![3.0]).unwrap();
        let e = AtomicInput::gaussian(Internal::A, g.clone()).expand(1, 1.0).unwrap();
        assert_eq!(e.components.len(), 9);
        let n: f64 = e.components.iter().map(|c| c.2.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
        let w = |d: i64| (-0.25 * (d * d) as f64).exp();
        let all: f64 = (-200..=200).map(w).sum();
        let outside: f64 = (-200..=200).filter(|d: &i64| d.abs() > 4).map(w).sum();
        assert!((e.truncation_error - outside / all).abs() < 1e-15);
        let wide = AtomicInput::Gaussian { state: Internal::A, amplitude: g, support: 20 }.expand(1, 1.0).unwrap();
        assert!(wide.truncation_error < 1e-30);
    }

    #[test]
    fn pair_symmetry() {
        let p = PairInput::<f64>::ab(0, 2);
        assert_eq!(p.symmetry_defect(), 0.0);
        p.check_symmetric().unwrap();
        let bad = PairInput { table: vec![((Internal::A, 0), (Internal::B, 2), Complex::new(1.0, 0.0))] };
        assert!(matches!(bad.check_symmetric(), Err(ScenarioError::NotSymmetric(_))));
    }
}
