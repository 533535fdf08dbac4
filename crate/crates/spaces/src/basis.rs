//! Atom-number-sectored tensor basis: atomic occupations ⊗ photon ladders a, b.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::SpaceError;
use crate::ladder::{PhotonLadder, PhotonMode};
use crate::modes::AtomicModeSet;
use crate::operator::{identity, kron, OperatorMatrix};
use crate::scalar::{cr, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Create,
    Annihilate,
}

/// Target of `tensor_embed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Atoms,
    PhotonA,
    PhotonB,
    Photons,
}

/// Decoded basis label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisLabel<'a> {
    pub occupation: &'a [u8],
    pub n_a: usize,
    pub n_b: usize,
}

#[derive(Clone, Debug)]
pub struct CompositeBasis<T: Real> {
    ladders: [PhotonLadder; 2],
    modes: AtomicModeSet<T>,
    sectors: Vec<usize>,
    configs: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
}

impl<T: Real> CompositeBasis<T> {
    /// All atom-number sectors 0..=max_atoms.
    pub fn new(n_max_a: usize, n_max_b: usize, modes: AtomicModeSet<T>) -> Result<Self, SpaceError> {
        let sectors: Vec<usize> = (0..=modes.max_atoms()).collect();
        Self::with_sectors(n_max_a, n_max_b, modes, &sectors)
    }

    pub fn with_sectors(
        n_max_a: usize,
        n_max_b: usize,
        modes: AtomicModeSet<T>,
        sectors: &[usize],
    ) -> Result<Self, SpaceError> {
        let ladders = [PhotonLadder::new(n_max_a, PhotonMode::A)?, PhotonLadder::new(n_max_b, PhotonMode::B)?];
        let mut sectors = sectors.to_vec();
        sectors.sort_unstable();
        sectors.dedup();
        if let Some(bad) = sectors.iter().find(|s| **s > modes.max_atoms()) {
            return Err(SpaceError::Sector(*bad));
        }
        let s = modes.total_modes();
        let mut configs = Vec::new();
        for &n in &sectors {
            let mut cur = vec![0u8; s];
            enumerate(&mut cur, 0, n, &mut configs);
        }
        let lookup = configs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(Self { ladders, modes, sectors, configs, lookup })
    }

    pub fn modes(&self) -> &AtomicModeSet<T> {
        &self.modes
    }

    pub fn ladder(&self, mode: PhotonMode) -> &PhotonLadder {
        &self.ladders[mode.index()]
    }

    pub fn sectors(&self) -> &[usize] {
        &self.sectors
    }

    pub fn n_configs(&self) -> usize {
        self.configs.len()
    }

    pub fn photon_dim(&self) -> usize {
        self.ladders[0].dim() * self.ladders[1].dim()
    }

    pub fn dim(&self) -> usize {
        self.n_configs() * self.photon_dim()
    }

    pub fn config(&self, i: usize) -> &[u8] {
        &self.configs[i]
    }

    pub fn config_index(&self, occupation: &[u8]) -> Option<usize> {
        self.lookup.get(occupation).copied()
    }

    pub fn photon_index(&self, n_a: usize, n_b: usize) -> usize {
        n_a * self.ladders[1].dim() + n_b
    }

    pub fn index(&self, config: usize, n_a: usize, n_b: usize) -> usize {
        config * self.photon_dim() + self.photon_index(n_a, n_b)
    }

    /// Index of a labelled basis state, if it lies inside the truncated basis.
    pub fn find(&self, occupation: &[u8], n_a: usize, n_b: usize) -> Option<usize> {
        if n_a > self.ladders[0].n_max() || n_b > self.ladders[1].n_max() {
            return None;
        }
        Some(self.index(self.config_index(occupation)?, n_a, n_b))
    }

    pub fn label(&self, index: usize) -> BasisLabel<'_> {
        let p = self.photon_dim();
        let nb_dim = self.ladders[1].dim();
        let ph = index % p;
        BasisLabel { occupation: &self.configs[index / p], n_a: ph / nb_dim, n_b: ph % nb_dim }
    }

    pub fn atom_number(&self, config: usize) -> usize {
        self.configs[config].iter().map(|n| *n as usize).sum()
    }

    /// Occupation of a given level in a configuration.
    pub fn level_occupation(&self, config: usize, level: usize) -> usize {
        let n = self.modes.n_modes(level);
        (0..n)
            .map(|m| self.configs[config][self.modes.flat_index(level, m).unwrap()] as usize)
            .sum()
    }

    /// Empty occupation vector of the right length.
    pub fn empty_occupation(&self) -> Vec<u8> {
        vec![0; self.modes.total_modes()]
    }

    /// Occupation vector with one atom in each listed (level, mode).
    pub fn occupation(&self, atoms: &[(usize, usize)]) -> Result<Vec<u8>, SpaceError> {
        let mut occ = self.empty_occupation();
        for &(l, m) in atoms {
            occ[self.modes.flat_index(l, m)?] += 1;
        }
        Ok(occ)
    }

    /// Kronecker product of an atomic (configs × configs) and a photon-pair matrix.
    pub fn atom_photon(&self, atomic: &DMatrix<Complex<T>>, photon: &DMatrix<Complex<T>>) -> OperatorMatrix<T> {
        OperatorMatrix::new(kron(atomic, photon))
    }

    /// Local photon matrix of one ladder lifted to the photon pair space.
    pub fn photon_pair(&self, mode: PhotonMode, local: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        match mode {
            PhotonMode::A => kron(local, &identity(self.ladders[1].dim())),
            PhotonMode::B => kron(&identity(self.ladders[0].dim()), local),
        }
    }

    pub fn photon_annihilation(&self, mode: PhotonMode) -> DMatrix<Complex<T>> {
        self.photon_pair(mode, &self.ladders[mode.index()].annihilation_matrix())
    }

    pub fn photon_number(&self, mode: PhotonMode) -> DMatrix<Complex<T>> {
        self.photon_pair(mode, &self.ladders[mode.index()].number_matrix())
    }

    pub fn photon_identity(&self) -> DMatrix<Complex<T>> {
        identity(self.photon_dim())
    }

    /// Embeds a subsystem operator into the full basis.
    pub fn tensor_embed(&self, op: &OperatorMatrix<T>, subsystem: Subsystem) -> Result<OperatorMatrix<T>, SpaceError> {
        let expected = match subsystem {
            Subsystem::Atoms => self.n_configs(),
            Subsystem::PhotonA => self.ladders[0].dim(),
            Subsystem::PhotonB => self.ladders[1].dim(),
            Subsystem::Photons => self.photon_dim(),
        };
        if op.dim() != expected {
            return Err(SpaceError::Dimension { expected, got: op.dim() });
        }
        let m = op.matrix();
        Ok(match subsystem {
            Subsystem::Atoms => self.atom_photon(m, &self.photon_identity()),
            Subsystem::PhotonA => self.atom_photon(&identity(self.n_configs()), &self.photon_pair(PhotonMode::A, m)),
            Subsystem::PhotonB => self.atom_photon(&identity(self.n_configs()), &self.photon_pair(PhotonMode::B, m)),
            Subsystem::Photons => self.atom_photon(&identity(self.n_configs()), m),
        })
    }

    /// Photon operator on the full basis.
    pub fn photon_op(&self, photon: &DMatrix<Complex<T>>) -> OperatorMatrix<T> {
        self.atom_photon(&identity(self.n_configs()), photon)
    }

    /// ψ̂_{ℓξ} or ψ̂†_{ℓξ} on the configuration space; creation out of the top
    /// sector (or into an absent sector) maps to zero.
    pub fn field_matrix(&self, level: usize, mode: usize, kind: FieldKind) -> Result<DMatrix<Complex<T>>, SpaceError> {
        let s = self.modes.flat_index(level, mode)?;
        let n = self.n_configs();
        let mut m = DMatrix::zeros(n, n);
        for (ci, occ) in self.configs.iter().enumerate() {
            let mut next = occ.clone();
            let amp = match kind {
                FieldKind::Annihilate => {
                    if occ[s] == 0 {
                        continue;
                    }
                    next[s] -= 1;
                    occ[s]
                }
                FieldKind::Create => {
                    next[s] += 1;
                    next[s]
                }
            };
            if let Some(ri) = self.lookup.get(&next) {
                m[(*ri, ci)] = cr(lit::<T>(amp as f64).sqrt());
            }
        }
        Ok(m)
    }

    pub fn field_op(&self, level: usize, mode: usize, kind: FieldKind) -> Result<OperatorMatrix<T>, SpaceError> {
        Ok(self.atom_photon(&self.field_matrix(level, mode, kind)?, &self.photon_identity()))
    }

    /// Σ_{ξ'ξ} M[ξ',ξ] ψ̂†_{row,ξ'} ψ̂_{col,ξ} on the configuration space.
    pub fn one_body(&self, row: usize, col: usize, m: &DMatrix<Complex<T>>) -> Result<DMatrix<Complex<T>>, SpaceError> {
        let (nr, nc) = (self.modes.n_modes(row), self.modes.n_modes(col));
        if row >= self.modes.n_levels() {
            return Err(SpaceError::UnknownLevel(row));
        }
        if col >= self.modes.n_levels() {
            return Err(SpaceError::UnknownLevel(col));
        }
        if m.nrows() != nr || m.ncols() != nc {
            return Err(SpaceError::Dimension { expected: nr * nc, got: m.len() });
        }
        let n = self.n_configs();
        let mut out = DMatrix::zeros(n, n);
        for (ci, occ) in self.configs.iter().enumerate() {
            for y in 0..nc {
                let sy = self.modes.flat_index(col, y)?;
                if occ[sy] == 0 {
                    continue;
                }
                for x in 0..nr {
                    let v = m[(x, y)];
                    if v.is_zero() {
                        continue;
                    }
                    let sx = self.modes.flat_index(row, x)?;
                    let mut next = occ.clone();
                    next[sy] -= 1;
                    next[sx] += 1;
                    let amp = lit::<T>(occ[sy] as f64 * next[sx] as f64).sqrt();
                    if let Some(ri) = self.lookup.get(&next) {
                        out[(*ri, ci)] += v * amp;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Normal-ordered Σ M1[x,y] M2[u,v] ψ̂†_{x} ψ̂†_{u} ψ̂_{v} ψ̂_{y}, with x,y on
    /// levels (r1, c1) and u,v on (r2, c2).
    pub fn normal_ordered_pair(
        &self,
        (r1, c1, m1): (usize, usize, &DMatrix<Complex<T>>),
        (r2, c2, m2): (usize, usize, &DMatrix<Complex<T>>),
    ) -> Result<DMatrix<Complex<T>>, SpaceError> {
        let n = self.n_configs();
        let mut out = DMatrix::zeros(n, n);
        let entries = |r: usize, c: usize, m: &DMatrix<Complex<T>>| -> Result<Vec<(usize, usize, Complex<T>)>, SpaceError> {
            let mut v = Vec::new();
            for y in 0..m.ncols() {
                for x in 0..m.nrows() {
                    if !m[(x, y)].is_zero() {
                        v.push((self.modes.flat_index(r, x)?, self.modes.flat_index(c, y)?, m[(x, y)]));
                    }
                }
            }
            Ok(v)
        };
        let e1 = entries(r1, c1, m1)?;
        let e2 = entries(r2, c2, m2)?;
        for (ci, occ) in self.configs.iter().enumerate() {
            for &(x, y, w1) in &e1 {
                for &(u, v, w2) in &e2 {
                    let mut next = occ.clone();
                    let mut amp = 1.0f64;
                    for (s, create) in [(y, false), (v, false), (u, true), (x, true)] {
                        if create {
                            next[s] += 1;
                            amp *= next[s] as f64;
                        } else {
                            if next[s] == 0 {
                                amp = 0.0;
                                break;
                            }
                            amp *= next[s] as f64;
                            next[s] -= 1;
                        }
                    }
                    if amp == 0.0 {
                        continue;
                    }
                    if let Some(ri) = self.lookup.get(&next) {
                        out[(*ri, ci)] += w1 * w2 * lit::<T>(amp).sqrt();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Diagonal projector keeping basis states that satisfy the predicate.
    pub fn projector<F: Fn(BasisLabel<'_>) -> bool>(&self, keep: F) -> OperatorMatrix<T> {
        let d: Vec<T> = (0..self.dim()).map(|i| if keep(self.label(i)) { T::one() } else { T::zero() }).collect();
        OperatorMatrix::from_real_diagonal(&d)
    }
}

fn enumerate(cur: &mut Vec<u8>, start: usize, remaining: usize, out: &mut Vec<Vec<u8>>) {
    if remaining == 0 {
        out.push(cur.clone());
        return;
    }
    for s in start..cur.len() {
        cur[s] += 1;
        enumerate(cur, s, remaining - 1, out);
        cur[s] -= 1;
    }
}
