//! Single-particle external modes per internal level.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::SpaceError;
use crate::scalar::{cabs, cr, lit, to_f64, Real};
use crate::spatial::{SpatialBackend, SpatialFunction};

/// Tolerance on the orthonormality of sampled profiles.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum LevelModes<T: Real> {
    Momenta(Vec<i64>),
    Profiles(Vec<Vec<Complex<T>>>),
}

impl<T: Real> LevelModes<T> {
    pub fn len(&self) -> usize {
        match self {
            LevelModes::Momenta(v) => v.len(),
            LevelModes::Profiles(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Optional trap for the centre-of-mass Hamiltonian (grid backend only).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicTrap<T: Real> {
    pub frequency: T,
    pub center: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicModeSet<T: Real> {
    backend: SpatialBackend<T>,
    names: Vec<String>,
    levels: Vec<LevelModes<T>>,
    offsets: Vec<usize>,
    max_atoms: usize,
}

impl<T: Real> AtomicModeSet<T> {
    pub fn new(
        backend: SpatialBackend<T>,
        levels: Vec<(String, LevelModes<T>)>,
        max_atoms: usize,
    ) -> Result<Self, SpaceError> {
        if max_atoms > 2 {
            return Err(SpaceError::MaxAtoms(max_atoms));
        }
        let mut names = Vec::new();
        let mut modes = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0;
        for (idx, (name, lm)) in levels.into_iter().enumerate() {
            validate_level(&backend, idx, &lm)?;
            offsets.push(total);
            total += lm.len();
            names.push(name);
            modes.push(lm);
        }
        offsets.push(total);
        Ok(Self { backend, names, levels: modes, offsets, max_atoms })
    }

    pub fn backend(&self) -> &SpatialBackend<T> {
        &self.backend
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_name(&self, level: usize) -> &str {
        &self.names[level]
    }

    pub fn level_modes(&self, level: usize) -> Result<&LevelModes<T>, SpaceError> {
        self.levels.get(level).ok_or(SpaceError::UnknownLevel(level))
    }

    pub fn n_modes(&self, level: usize) -> usize {
        self.levels.get(level).map_or(0, LevelModes::len)
    }

    pub fn total_modes(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Flat single-particle index of (level, mode).
    pub fn flat_index(&self, level: usize, mode: usize) -> Result<usize, SpaceError> {
        if level >= self.levels.len() || mode >= self.levels[level].len() {
            return Err(SpaceError::UnknownMode { level, mode });
        }
        Ok(self.offsets[level] + mode)
    }

    /// Inverse of `flat_index`.
    pub fn level_of(&self, flat: usize) -> (usize, usize) {
        let level = self.offsets.partition_point(|o| *o <= flat) - 1;
        (level, flat - self.offsets[level])
    }

    pub fn momentum(&self, level: usize, mode: usize) -> Option<i64> {
        match self.levels.get(level)? {
            LevelModes::Momenta(v) => v.get(mode).copied(),
            LevelModes::Profiles(_) => None,
        }
    }

    /// Mode index of a momentum label on a level (ring labels compared modulo the period).
    pub fn find_momentum(&self, level: usize, label: i64) -> Option<usize> {
        match self.levels.get(level)? {
            LevelModes::Momenta(v) => v.iter().position(|p| self.same_label(*p, label)),
            LevelModes::Profiles(_) => None,
        }
    }

    fn same_label(&self, p: i64, q: i64) -> bool {
        match self.backend {
            SpatialBackend::Ladder { period: Some(per), .. } => (p - q).rem_euclid(per) == 0,
            _ => p == q,
        }
    }

    /// ⟨ξ'_{row}| f(R) |ξ_{col}⟩ as an n_row × n_col matrix.
    pub fn matrix(
        &self,
        row: usize,
        col: usize,
        f: &SpatialFunction<T>,
    ) -> Result<DMatrix<Complex<T>>, SpaceError> {
        let (lr, lc) = (self.level_modes(row)?, self.level_modes(col)?);
        let mut m = DMatrix::zeros(lr.len(), lc.len());
        match (&self.backend, lr, lc) {
            (SpatialBackend::Ladder { .. }, LevelModes::Momenta(pr), LevelModes::Momenta(pc)) => {
                let coeffs = match f {
                    SpatialFunction::Fourier(c) => c,
                    SpatialFunction::Sampled(_) => {
                        return Err(SpaceError::Backend {
                            backend: "momentum-ladder",
                            what: "sampled spatial function".into(),
                        })
                    }
                };
                for (j, p) in pc.iter().enumerate() {
                    for (k, c) in coeffs {
                        for (i, q) in pr.iter().enumerate() {
                            if self.same_label(p + k, *q) {
                                m[(i, j)] += *c;
                            }
                        }
                    }
                }
            }
            (SpatialBackend::Grid(grid), LevelModes::Profiles(pr), LevelModes::Profiles(pc)) => {
                let fs = f.sampled_on(grid, T::one());
                if fs.len() != grid.len() {
                    return Err(SpaceError::Dimension { expected: grid.len(), got: fs.len() });
                }
                for (j, phi) in pc.iter().enumerate() {
                    let fphi: Vec<Complex<T>> = phi.iter().zip(&fs).map(|(a, b)| *a * *b).collect();
                    for (i, chi) in pr.iter().enumerate() {
                        m[(i, j)] = grid.inner(chi, &fphi);
                    }
                }
            }
            _ => unreachable!("levels validated against backend"),
        }
        Ok(m)
    }

    /// Centre-of-mass Hamiltonian P²/2M (+ optional trap) on one level's modes.
    pub fn com_matrix(
        &self,
        level: usize,
        mass: T,
        trap: Option<HarmonicTrap<T>>,
    ) -> Result<DMatrix<Complex<T>>, SpaceError> {
        let lm = self.level_modes(level)?;
        let n = lm.len();
        let two: T = lit(2.0);
        match (&self.backend, lm) {
            (SpatialBackend::Ladder { unit, .. }, LevelModes::Momenta(ps)) => {
                if trap.is_some() {
                    return Err(SpaceError::Backend {
                        backend: "momentum-ladder",
                        what: "trapping potential".into(),
                    });
                }
                let mut m = DMatrix::zeros(n, n);
                for (i, p) in ps.iter().enumerate() {
                    let k = *unit * lit(*p as f64);
                    m[(i, i)] = cr(k * k / (two * mass));
                }
                Ok(m)
            }
            (SpatialBackend::Grid(grid), LevelModes::Profiles(phis)) => {
                let kin = -T::one() / (two * mass);
                let pot: Vec<T> = grid
                    .points()
                    .iter()
                    .map(|x| match trap {
                        Some(t) => mass * t.frequency * t.frequency * (*x - t.center) * (*x - t.center) / two,
                        None => T::zero(),
                    })
                    .collect();
                let mut m = DMatrix::zeros(n, n);
                for (j, phi) in phis.iter().enumerate() {
                    let d2 = grid.second_derivative(phi);
                    let hphi: Vec<Complex<T>> =
                        d2.iter().zip(phi).zip(&pot).map(|((d, p), v)| *d * kin + *p * *v).collect();
                    for (i, chi) in phis.iter().enumerate() {
                        m[(i, j)] = grid.inner(chi, &hphi);
                    }
                }
                Ok(m)
            }
            _ => unreachable!("levels validated against backend"),
        }
    }
}

fn validate_level<T: Real>(
    backend: &SpatialBackend<T>,
    level: usize,
    modes: &LevelModes<T>,
) -> Result<(), SpaceError> {
    match (backend, modes) {
        (SpatialBackend::Ladder { period, .. }, LevelModes::Momenta(ps)) => {
            let mut seen: Vec<i64> = Vec::new();
            for p in ps {
                let key = match period {
                    Some(per) if *per > 0 => p.rem_euclid(*per),
                    Some(_) => return Err(SpaceError::Grid("ring period must be positive".into())),
                    None => *p,
                };
                if seen.contains(&key) {
                    return Err(SpaceError::DuplicateMomentum { level, label: *p });
                }
                seen.push(key);
            }
            Ok(())
        }
        (SpatialBackend::Grid(grid), LevelModes::Profiles(phis)) => {
            let mut defect = T::zero();
            for (i, a) in phis.iter().enumerate() {
                if a.len() != grid.len() {
                    return Err(SpaceError::Dimension { expected: grid.len(), got: a.len() });
                }
                for (j, b) in phis.iter().enumerate() {
                    let target = if i == j { Complex::one() } else { Complex::zero() };
                    defect = defect.max(cabs(grid.inner(a, b) - target));
                }
            }
            if defect > lit(ORTHONORMAL_TOL) {
                return Err(SpaceError::NotOrthonormal { level, defect: to_f64(defect) });
            }
            Ok(())
        }
        (b, _) => Err(SpaceError::Backend {
            backend: b.name(),
            what: format!("mode representation of level {level}"),
        }),
    }
}
