//! Level scheme, dipole couplings and the detuning table.

use num_complex::Complex;
use qcr_averaging::{Combination, Domain};
use qcr_spaces::scalar::{lit, to_f64};
use qcr_spaces::{AtomicModeSet, HarmonicTrap, PhotonMode, Real, SpatialFunction};

use crate::error::LambdaError;

/// Level index of the ground state.
pub const LEVEL_A: usize = 0;
/// Level index of the excited state.
pub const LEVEL_B: usize = 1;

/// Level index of ancilla `j` (0-based within the ancilla manifold).
pub fn ancilla_level(j: usize) -> usize {
    2 + j
}

/// Level index of a relevant state.
pub fn relevant_level(alpha: PhotonMode) -> usize {
    alpha.index()
}

/// Internal frequencies ω_a, ω_b, ω_3..ω_N and the COM Hamiltonian per level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelScheme<T: Real> {
    omega: Vec<T>,
    mass: T,
    traps: Vec<Option<HarmonicTrap<T>>>,
}

impl<T: Real> LevelScheme<T> {
    /// Free particles of unit mass.
    pub fn new(omega_a: T, omega_b: T, ancillas: Vec<T>) -> Result<Self, LambdaError> {
        if ancillas.is_empty() {
            return Err(LambdaError::Scheme("at least one ancilla level is required".into()));
        }
        if !(omega_b > omega_a) {
            return Err(LambdaError::Scheme(format!(
                "need omega_b > omega_a (got {} <= {})",
                to_f64(omega_b),
                to_f64(omega_a)
            )));
        }
        let mut omega = vec![omega_a, omega_b];
        omega.extend(ancillas);
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(LambdaError::Scheme("level frequencies must be finite".into()));
        }
        let traps = vec![None; omega.len()];
        Ok(Self { omega, mass: T::one(), traps })
    }

    /// `T::infinity()`-like masses freeze the COM motion.
    pub fn with_mass(mut self, mass: T) -> Result<Self, LambdaError> {
        if !(mass > T::zero()) {
            return Err(LambdaError::Scheme(format!("mass must be positive (got {})", to_f64(mass))));
        }
        self.mass = mass;
        Ok(self)
    }

    pub fn with_trap(mut self, level: usize, trap: HarmonicTrap<T>) -> Result<Self, LambdaError> {
        let n = self.omega.len();
        *self
            .traps
            .get_mut(level)
            .ok_or_else(|| LambdaError::Scheme(format!("trap for level {level} of {n}")))? = Some(trap);
        Ok(self)
    }

    pub fn n_levels(&self) -> usize {
        self.omega.len()
    }

    pub fn n_ancillas(&self) -> usize {
        self.omega.len() - 2
    }

    pub fn omega(&self, level: usize) -> T {
        self.omega[level]
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn trap(&self, level: usize) -> Option<HarmonicTrap<T>> {
        self.traps[level]
    }

    /// ω_j − ω_α
    pub fn transition(&self, j: usize, alpha: PhotonMode) -> T {
        self.omega[ancilla_level(j)] - self.omega[relevant_level(alpha)]
    }

    /// Same scheme with every ancilla moved so that Δ⁽⁻⁾_{ja} equals `detuning`.
    pub fn with_ground_detuning(&self, photon_a: T, detuning: T) -> Self {
        let mut out = self.clone();
        let w = self.omega[LEVEL_A] + photon_a - detuning;
        for j in 0..self.n_ancillas() {
            out.omega[ancilla_level(j)] = w;
        }
        out
    }

    /// 𝓗_COM on one level's modes.
    pub fn com_matrix(
        &self,
        modes: &AtomicModeSet<T>,
        level: usize,
    ) -> Result<nalgebra::DMatrix<Complex<T>>, LambdaError> {
        if self.mass.is_finite() {
            Ok(modes.com_matrix(level, self.mass, self.traps[level])?)
        } else {
            let n = modes.n_modes(level);
            Ok(nalgebra::DMatrix::zeros(n, n))
        }
    }
}

/// Co-rotating Ω_{jα}(R) and counter-rotating Λ_{jα}(R) couplings with the
/// laser frequencies Ω_a, Ω_b.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingSet<T: Real> {
    photon: [T; 2],
    co: Vec<[SpatialFunction<T>; 2]>,
    counter: Vec<[SpatialFunction<T>; 2]>,
    rwa: bool,
}

impl<T: Real> CouplingSet<T> {
    pub fn from_functions(
        photon: [T; 2],
        co: Vec<[SpatialFunction<T>; 2]>,
        counter: Vec<[SpatialFunction<T>; 2]>,
    ) -> Result<Self, LambdaError> {
        if photon.iter().any(|w| !(*w > T::zero()) || !w.is_finite()) {
            return Err(LambdaError::Coupling("laser frequencies must be positive and finite".into()));
        }
        if co.len() != counter.len() {
            return Err(LambdaError::Coupling(format!(
                "{} co-rotating but {} counter-rotating entries",
                co.len(),
                counter.len()
            )));
        }
        let finite = |f: &SpatialFunction<T>| match f {
            SpatialFunction::Fourier(m) => m.values().all(|c| c.re.is_finite() && c.im.is_finite()),
            SpatialFunction::Sampled(v) => v.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
        };
        if !co.iter().chain(&counter).flatten().all(finite) {
            return Err(LambdaError::Coupling("coupling functions must be finite".into()));
        }
        Ok(Self { photon, co, counter, rwa: false })
    }

    /// Ω_{jα} = −i𝓔_α ℘*_{jα} u_α/√2 and Λ_{jα} = i𝓔_α ℘*_{jα} u_α*/√2.
    pub fn from_dipoles(
        photon: [T; 2],
        field: [T; 2],
        mode_functions: [SpatialFunction<T>; 2],
        dipoles: Vec<[Complex<T>; 2]>,
    ) -> Result<Self, LambdaError> {
        let root2 = lit::<T>(2.0).sqrt();
        let mut co = Vec::with_capacity(dipoles.len());
        let mut counter = Vec::with_capacity(dipoles.len());
        for d in &dipoles {
            let entry = |alpha: usize, sign: T| -> Complex<T> {
                Complex::new(T::zero(), sign * field[alpha] / root2) * d[alpha].conj()
            };
            co.push([
                mode_functions[0].scale(entry(0, -T::one())),
                mode_functions[1].scale(entry(1, -T::one())),
            ]);
            counter.push([
                mode_functions[0].conj().scale(entry(0, T::one())),
                mode_functions[1].conj().scale(entry(1, T::one())),
            ]);
        }
        Self::from_functions(photon, co, counter)
    }

    /// Plane waves e^{ik_α R}: Ω_{jα} = c_{jα} e^{ik_α R}, Λ_{jα} = −c_{jα} e^{−ik_α R}.
    pub fn plane_waves(photon: [T; 2], wavenumbers: [i64; 2], amplitudes: Vec<[Complex<T>; 2]>) -> Result<Self, LambdaError> {
        let co = amplitudes
            .iter()
            .map(|c| [SpatialFunction::plane_wave(wavenumbers[0], c[0]), SpatialFunction::plane_wave(wavenumbers[1], c[1])])
            .collect();
        let counter = amplitudes
            .iter()
            .map(|c| [SpatialFunction::plane_wave(-wavenumbers[0], -c[0]), SpatialFunction::plane_wave(-wavenumbers[1], -c[1])])
            .collect();
        Self::from_functions(photon, co, counter)
    }

    /// Drops every counter-rotating coupling.
    pub fn with_rwa(mut self, rwa: bool) -> Self {
        self.rwa = rwa;
        self
    }

    pub fn rwa(&self) -> bool {
        self.rwa
    }

    pub fn n_ancillas(&self) -> usize {
        self.co.len()
    }

    /// Laser frequency Ω_α.
    pub fn photon_frequency(&self, alpha: PhotonMode) -> T {
        self.photon[alpha.index()]
    }

    /// Ω_{jα}(R)
    pub fn omega(&self, j: usize, alpha: PhotonMode) -> &SpatialFunction<T> {
        &self.co[j][alpha.index()]
    }

    /// Λ_{jα}(R), zero under the RWA.
    pub fn lambda(&self, j: usize, alpha: PhotonMode) -> SpatialFunction<T> {
        if self.rwa {
            SpatialFunction::zero()
        } else {
            self.counter[j][alpha.index()].clone()
        }
    }

    /// Rescales every coupling by `s`.
    pub fn scaled(&self, s: T) -> Self {
        let f = |v: &Vec<[SpatialFunction<T>; 2]>| {
            v.iter().map(|p| [p[0].scale(Complex::new(s, T::zero())), p[1].scale(Complex::new(s, T::zero()))]).collect()
        };
        Self { photon: self.photon, co: f(&self.co), counter: f(&self.counter), rwa: self.rwa }
    }
}

/// Single-photon detunings Δ⁽±⁾_{jα} = Ω_α ± (ω_j − ω_α) and their
/// inverse combinations.
#[derive(Clone, Debug, PartialEq)]
pub struct DetuningTable<T: Real> {
    minus: Vec<[T; 2]>,
    plus: Vec<[T; 2]>,
    photon: [T; 2],
    omega_rel: [T; 2],
}

impl<T: Real> DetuningTable<T> {
    pub fn new(levels: &LevelScheme<T>, couplings: &CouplingSet<T>) -> Result<Self, LambdaError> {
        if levels.n_ancillas() != couplings.n_ancillas() {
            return Err(LambdaError::Coupling(format!(
                "{} ancilla levels but couplings for {}",
                levels.n_ancillas(),
                couplings.n_ancillas()
            )));
        }
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for j in 0..levels.n_ancillas() {
            let mut m = [T::zero(); 2];
            let mut p = [T::zero(); 2];
            for alpha in PhotonMode::BOTH {
                let w = couplings.photon_frequency(alpha);
                let t = levels.transition(j, alpha);
                m[alpha.index()] = w - t;
                p[alpha.index()] = w + t;
                for (name, d) in [("-", m[alpha.index()]), ("+", p[alpha.index()])] {
                    if d.is_zero() || !d.is_finite() {
                        return Err(LambdaError::SingularDetuning(format!("Delta{name}_(j={}, {alpha})", j + 3)));
                    }
                }
            }
            minus.push(m);
            plus.push(p);
        }
        let photon = [couplings.photon_frequency(PhotonMode::A), couplings.photon_frequency(PhotonMode::B)];
        Ok(Self { minus, plus, photon, omega_rel: [levels.omega(LEVEL_A), levels.omega(LEVEL_B)] })
    }

    pub fn n_ancillas(&self) -> usize {
        self.minus.len()
    }

    /// Δ⁽⁻⁾_{jα} for the slow domain, Δ⁽⁺⁾_{jα} for the fast one.
    pub fn delta(&self, j: usize, alpha: PhotonMode, domain: Domain) -> T {
        match domain {
            Domain::Slow => self.minus[j][alpha.index()],
            Domain::Fast => self.plus[j][alpha.index()],
        }
    }

    /// ½(1/Δ_{jα} ± 1/Δ_{kβ}) within one domain; `Slow`/`Sum` is 1/ω⁽⁺⁾_{jkαβ},
    /// `Fast`/`Sum` is 1/Ω⁽⁺⁾_{jkαβ}.
    pub fn inverse(&self, domain: Domain, j: usize, k: usize, alpha: PhotonMode, beta: PhotonMode, c: Combination) -> T {
        let half: T = lit(0.5);
        let a = T::one() / self.delta(j, alpha, domain);
        let b = T::one() / self.delta(k, beta, domain);
        match c {
            Combination::Sum => half * (a + b),
            Combination::Difference => half * (a - b),
        }
    }

    /// 1/ω⁽⁺⁾_{jkαβ}
    pub fn inv_slow(&self, j: usize, k: usize, alpha: PhotonMode, beta: PhotonMode) -> T {
        self.inverse(Domain::Slow, j, k, alpha, beta, Combination::Sum)
    }

    /// 1/Ω⁽⁺⁾_{jkαβ}
    pub fn inv_fast(&self, j: usize, k: usize, alpha: PhotonMode, beta: PhotonMode) -> T {
        self.inverse(Domain::Fast, j, k, alpha, beta, Combination::Sum)
    }

    /// δ⁽⁺⁾_{αβ} = Ω_β − Ω_α + (ω_β − ω_α) and δ⁽⁻⁾_{αβ} = Ω_β − Ω_α − (ω_β − ω_α).
    pub fn two_photon(&self, alpha: PhotonMode, beta: PhotonMode, c: Combination) -> T {
        let dw = self.photon[beta.index()] - self.photon[alpha.index()];
        let dl = self.omega_rel[beta.index()] - self.omega_rel[alpha.index()];
        match c {
            Combination::Sum => dw + dl,
            Combination::Difference => dw - dl,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PhotonMode::{A, B};

    fn scheme() -> (LevelScheme<f64>, CouplingSet<f64>) {
        let levels = LevelScheme::new(0.0, 10.0, vec![105.0, 120.0]).unwrap();
        let c = Complex::new(0.1, 0.0);
        let couplings = CouplingSet::plane_waves([100.0, 90.0], [1, -1], vec![[c, c], [c, c]]).unwrap();
        (levels, couplings)
    }

    #[test]
    fn scheme_validation() {
        assert!(LevelScheme::new(0.0, 1.0, vec![]).is_err());
        assert!(LevelScheme::new(1.0, 1.0, vec![5.0]).is_err());
        assert!(LevelScheme::new(0.0, 1.0, vec![5.0]).unwrap().with_mass(0.0).is_err());
        assert!(LevelScheme::new(0.0, 1.0, vec![5.0]).unwrap().with_mass(f64::INFINITY).is_ok());
    }

    #[test]
    fn detunings_by_substitution() {
        let (levels, couplings) = scheme();
        let t = DetuningTable::new(&levels, &couplings).unwrap();
        assert_eq!(t.delta(0, A, Domain::Slow), -5.0);
        assert_eq!(t.delta(0, A, Domain::Fast), 205.0);
        assert_eq!(t.delta(0, B, Domain::Slow), 90.0 - 95.0);
        assert_eq!(t.delta(1, A, Domain::Slow), -20.0);
        assert_eq!(t.inv_slow(0, 0, A, A), -0.2);
        assert_eq!(t.inv_slow(0, 1, A, A), t.inv_slow(1, 0, A, A));
        assert_eq!(t.inv_fast(0, 1, A, B), t.inv_fast(1, 0, B, A));
        assert_eq!(t.two_photon(A, B, Combination::Sum), t.delta(0, B, Domain::Slow) - t.delta(0, A, Domain::Slow));
        assert_eq!(t.two_photon(A, B, Combination::Difference), t.delta(0, B, Domain::Fast) - t.delta(0, A, Domain::Fast));
    }

    #[test]
    fn singular_detuning_rejected() {
        let levels = LevelScheme::new(0.0, 10.0, vec![100.0]).unwrap();
        let c = Complex::new(0.1, 0.0);
        let couplings = CouplingSet::plane_waves([100.0, 90.0], [1, -1], vec![[c, c]]).unwrap();
        assert!(matches!(DetuningTable::new(&levels, &couplings), Err(LambdaError::SingularDetuning(_))));
    }

    #[test]
    fn dipole_couplings() {
        let u = [SpatialFunction::plane_wave(1, Complex::new(1.0, 0.0)), SpatialFunction::plane_wave(-1, Complex::new(1.0, 0.0))];
        let d = Complex::new(0.3, 0.4);
        let set = CouplingSet::from_dipoles([100.0, 90.0], [2.0f64.sqrt(), 2.0f64.sqrt()], u, vec![[d, d]]).unwrap();
        // -i conj(d) e^{iR}
        let om = set.omega(0, A).eval(0.0, 1.0).unwrap();
        assert!((om - Complex::new(0.0, -1.0) * d.conj()).norm() < 1e-15);
        let la = set.lambda(0, A);
        assert!((la.eval(0.0, 1.0).unwrap() - Complex::new(0.0, 1.0) * d.conj()).norm() < 1e-15);
        assert!(matches!(&la, SpatialFunction::Fourier(m) if m.contains_key(&-1)));
        assert!(set.clone().with_rwa(true).lambda(0, A).is_zero());
    }

    #[test]
    fn ground_detuning_override() {
        let (levels, couplings) = scheme();
        let moved = levels.with_ground_detuning(100.0, -7.0);
        let t = DetuningTable::new(&moved, &couplings).unwrap();
        assert_eq!(t.delta(0, A, Domain::Slow), -7.0);
        assert_eq!(t.delta(1, A, Domain::Slow), -7.0);
    }
}
