//! The multi-Λ model on a truncated composite basis.

use nalgebra::DMatrix;
use num_complex::Complex;
use qcr_averaging::{Domain, HarmonicHamiltonian, HcSign, OscillatingTerm};
use qcr_spaces::operator::identity;
use qcr_spaces::scalar::{cr, lit};
use qcr_spaces::{CompositeBasis, OperatorMatrix, PhotonMode, Real};

use crate::error::LambdaError;
use crate::scheme::{ancilla_level, relevant_level, CouplingSet, DetuningTable, LevelScheme};

#[derive(Clone, Debug)]
pub struct LambdaModel<T: Real> {
    levels: LevelScheme<T>,
    couplings: CouplingSet<T>,
    basis: CompositeBasis<T>,
    detunings: DetuningTable<T>,
    hc_sign: HcSign,
    // ⟨j|Ω_{jα}|α⟩ and ⟨α|Λ*_{jα}|j⟩ per (j, α)
    co: Vec<[DMatrix<Complex<T>>; 2]>,
    counter: Vec<[DMatrix<Complex<T>>; 2]>,
}

impl<T: Real> LambdaModel<T> {
    pub fn new(
        levels: LevelScheme<T>,
        couplings: CouplingSet<T>,
        basis: CompositeBasis<T>,
        hc_sign: HcSign,
    ) -> Result<Self, LambdaError> {
        let modes = basis.modes();
        if modes.n_levels() != levels.n_levels() {
            return Err(LambdaError::Scheme(format!(
                "basis has {} levels, scheme has {}",
                modes.n_levels(),
                levels.n_levels()
            )));
        }
        let detunings = DetuningTable::new(&levels, &couplings)?;
        let mut co = Vec::new();
        let mut counter = Vec::new();
        for j in 0..levels.n_ancillas() {
            let jl = ancilla_level(j);
            let mut c = Vec::with_capacity(2);
            let mut g = Vec::with_capacity(2);
            for alpha in PhotonMode::BOTH {
                let al = relevant_level(alpha);
                c.push(modes.matrix(jl, al, couplings.omega(j, alpha))?);
                g.push(modes.matrix(al, jl, &couplings.lambda(j, alpha).conj())?);
            }
            let (c1, c0) = (c.pop().unwrap(), c.pop().unwrap());
            let (g1, g0) = (g.pop().unwrap(), g.pop().unwrap());
            co.push([c0, c1]);
            counter.push([g0, g1]);
        }
        Ok(Self { levels, couplings, basis, detunings, hc_sign, co, counter })
    }

    pub fn levels(&self) -> &LevelScheme<T> {
        &self.levels
    }

    pub fn couplings(&self) -> &CouplingSet<T> {
        &self.couplings
    }

    pub fn basis(&self) -> &CompositeBasis<T> {
        &self.basis
    }

    pub fn detunings(&self) -> &DetuningTable<T> {
        &self.detunings
    }

    pub fn hc_sign(&self) -> HcSign {
        self.hc_sign
    }

    /// Same model with a different hermitian-conjugate sign.
    pub fn with_hc_sign(&self, hc_sign: HcSign) -> Self {
        Self { hc_sign, ..self.clone() }
    }

    pub fn n_ancillas(&self) -> usize {
        self.levels.n_ancillas()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Mode matrix of the coupling in ĥ_{jα} (slow, n_j × n_α) or ĝ_{jα}
    /// (fast, n_α × n_j).
    pub fn coupling_matrix(&self, j: usize, alpha: PhotonMode, domain: Domain) -> &DMatrix<Complex<T>> {
        match domain {
            Domain::Slow => &self.co[j][alpha.index()],
            Domain::Fast => &self.counter[j][alpha.index()],
        }
    }

    /// (row level, column level) of the one-body part of ĥ_{jα} or ĝ_{jα}.
    pub fn coupling_levels(&self, j: usize, alpha: PhotonMode, domain: Domain) -> (usize, usize) {
        match domain {
            Domain::Slow => (ancilla_level(j), relevant_level(alpha)),
            Domain::Fast => (relevant_level(alpha), ancilla_level(j)),
        }
    }

    /// ĥ_{jα} = ∫ψ†_j Ω_{jα} α̂ ψ_α (slow) or ĝ_{jα} = ∫ψ†_α Λ*_{jα} α̂ ψ_j (fast).
    pub fn coupling_operator(&self, j: usize, alpha: PhotonMode, domain: Domain) -> Result<OperatorMatrix<T>, LambdaError> {
        let (row, col) = self.coupling_levels(j, alpha, domain);
        let atomic = self.basis.one_body(row, col, self.coupling_matrix(j, alpha, domain))?;
        Ok(self.basis.atom_photon(&atomic, &self.basis.photon_annihilation(alpha)))
    }

    /// Σ_ℓ ω_ℓ N̂_ℓ
    pub fn internal_hamiltonian(&self) -> Result<OperatorMatrix<T>, LambdaError> {
        let n = self.basis.n_configs();
        let mut d = DMatrix::zeros(n, n);
        for c in 0..n {
            let e = (0..self.levels.n_levels())
                .fold(T::zero(), |acc, l| acc + self.levels.omega(l) * lit(self.basis.level_occupation(c, l) as f64));
            d[(c, c)] = cr(e);
        }
        Ok(self.basis.atom_photon(&d, &self.basis.photon_identity()))
    }

    /// Σ_ℓ ∫ψ†_ℓ 𝓗_COM ψ_ℓ
    pub fn com_hamiltonian(&self) -> Result<OperatorMatrix<T>, LambdaError> {
        let n = self.basis.n_configs();
        let mut acc = DMatrix::zeros(n, n);
        for l in 0..self.levels.n_levels() {
            let m = self.levels.com_matrix(self.basis.modes(), l)?;
            acc += self.basis.one_body(l, l, &m)?;
        }
        Ok(self.basis.atom_photon(&acc, &self.basis.photon_identity()))
    }

    /// One-body ∫ψ†_ℓ 𝓗₀⁽ℓ⁾ ψ_ℓ for a single level, on the configuration space.
    pub fn level_h0(&self, level: usize) -> Result<DMatrix<Complex<T>>, LambdaError> {
        let mut m = self.levels.com_matrix(self.basis.modes(), level)?;
        let w = self.levels.omega(level);
        for i in 0..m.nrows() {
            m[(i, i)] += cr(w);
        }
        Ok(self.basis.one_body(level, level, &m)?)
    }

    /// H_A = H_ext + H_int
    pub fn atomic_hamiltonian(&self) -> Result<OperatorMatrix<T>, LambdaError> {
        Ok(&self.com_hamiltonian()? + &self.internal_hamiltonian()?)
    }

    /// H_L = Σ_α Ω_α (n̂_α + ½)
    pub fn light_hamiltonian(&self) -> OperatorMatrix<T> {
        let half: T = lit(0.5);
        let mut m = DMatrix::zeros(self.basis.photon_dim(), self.basis.photon_dim());
        for alpha in PhotonMode::BOTH {
            let w = cr(self.couplings.photon_frequency(alpha));
            m += (self.basis.photon_number(alpha) + identity::<T>(self.basis.photon_dim()).map(|z| z * half)).map(|z| z * w);
        }
        self.basis.photon_op(&m)
    }

    /// n̂_a + n̂_b
    pub fn total_photon_number(&self) -> OperatorMatrix<T> {
        self.basis
            .photon_op(&(self.basis.photon_number(PhotonMode::A) + self.basis.photon_number(PhotonMode::B)))
    }

    /// Full Schrödinger-picture Hamiltonian H_A + H_L + H_AL.
    pub fn full_hamiltonian(&self) -> Result<OperatorMatrix<T>, LambdaError> {
        Ok(&(&self.atomic_hamiltonian()? + &self.light_hamiltonian()) + &build_dipole_hamiltonian(self)?)
    }
}

/// H_AL = Σ_{jα} (ĥ_{jα} + ĝ_{jα}) ± h.c.
pub fn build_dipole_hamiltonian<T: Real>(model: &LambdaModel<T>) -> Result<OperatorMatrix<T>, LambdaError> {
    let s: T = model.hc_sign.value();
    let mut x = OperatorMatrix::zeros(model.dim());
    for j in 0..model.n_ancillas() {
        for alpha in PhotonMode::BOTH {
            for domain in [Domain::Slow, Domain::Fast] {
                x += &model.coupling_operator(j, alpha, domain)?;
            }
        }
    }
    let xd = x.adjoint().scale_re(s);
    Ok(&x + &xd)
}

/// Interaction picture with respect to H_int + H_L: slow terms ĥ_{jα} at
/// Δ⁽⁻⁾_{jα}, fast terms ĝ_{jα} at Δ⁽⁺⁾_{jα}, H0 the COM part.
pub fn to_interaction_picture<T: Real>(model: &LambdaModel<T>) -> Result<HarmonicHamiltonian<T>, LambdaError> {
    let mut slow = Vec::new();
    let mut fast = Vec::new();
    for j in 0..model.n_ancillas() {
        for alpha in PhotonMode::BOTH {
            for (domain, list, name) in [(Domain::Slow, &mut slow, "h"), (Domain::Fast, &mut fast, "g")] {
                list.push(OscillatingTerm::new(
                    model.coupling_operator(j, alpha, domain)?,
                    model.detunings.delta(j, alpha, domain),
                    format!("{name}_{},{alpha}", j + 3),
                ));
            }
        }
    }
    Ok(HarmonicHamiltonian::new(model.com_hamiltonian()?, slow, fast, model.hc_sign)?)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use qcr_spaces::{AtomicModeSet, LevelModes, SpatialBackend};
    use PhotonMode::{A, B};

    /// One atom, ring of period 1 so every level has a single mode.
    pub(crate) fn closed_model(n_anc: usize, n_max: usize, sectors: &[usize], g: f64, rwa: bool) -> LambdaModel<f64> {
        let anc: Vec<f64> = (0..n_anc).map(|j| 205.0 + 7.0 * j as f64).collect();
        let levels = LevelScheme::new(0.0, 10.0, anc).unwrap();
        let amps = (0..n_anc)
            .map(|j| [Complex::new(g, 0.1 * g * j as f64), Complex::new(g * (1.0 + 0.1 * j as f64), -0.2 * g)])
            .collect();
        let couplings = CouplingSet::plane_waves([200.0, 190.0], [1, -1], amps).unwrap().with_rwa(rwa);
        let mut lv = vec![("a".to_string(), LevelModes::Momenta(vec![0])), ("b".to_string(), LevelModes::Momenta(vec![0]))];
        for j in 0..n_anc {
            lv.push((format!("{}", j + 3), LevelModes::Momenta(vec![0])));
        }
        let modes = AtomicModeSet::new(SpatialBackend::ring(1.0, 1), lv, 2).unwrap();
        let basis = CompositeBasis::with_sectors(n_max, n_max, modes, sectors).unwrap();
        LambdaModel::new(levels, couplings, basis, HcSign::Hermitian).unwrap()
    }

    #[test]
    fn zero_couplings_give_zero() {
        let m = closed_model(1, 2, &[1], 0.0, false);
        assert!(build_dipole_hamiltonian(&m).unwrap().is_zero());
    }

    #[test]
    fn single_excitation_matrix_element() {
        let m = closed_model(1, 2, &[1], 0.1, false);
        let h = build_dipole_hamiltonian(&m).unwrap();
        let b = m.basis();
        let from = b.find(&b.occupation(&[(0, 0)]).unwrap(), 1, 0).unwrap();
        let to = b.find(&b.occupation(&[(2, 0)]).unwrap(), 0, 0).unwrap();
        let om = m.coupling_matrix(0, A, Domain::Slow)[(0, 0)];
        assert!((h.get(to, from) - om).norm() < 1e-15);
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert!(m.with_hc_sign(HcSign::Literal).full_hamiltonian().unwrap().hermiticity_defect() > 0.0);
    }

    #[test]
    fn interaction_picture_terms() {
        let m = closed_model(2, 2, &[1], 0.1, false);
        let h = to_interaction_picture(&m).unwrap();
        assert_eq!(h.slow.len() + h.fast.len(), 2 * 2 * 2);
        for (i, (j, alpha)) in [(0, A), (0, B), (1, A), (1, B)].into_iter().enumerate() {
            assert_eq!(h.slow[i].frequency, m.detunings().delta(j, alpha, Domain::Slow));
            assert_eq!(h.fast[i].frequency, m.detunings().delta(j, alpha, Domain::Fast));
        }
    }

    #[test]
    fn slow_and_fast_frequencies_by_substitution() {
        let levels = LevelScheme::new(0.0, 10.0, vec![105.0]).unwrap();
        let c = Complex::new(0.1, 0.0);
        let couplings = CouplingSet::plane_waves([100.0, 90.0], [1, -1], vec![[c, c]]).unwrap();
        let t = DetuningTable::new(&levels, &couplings).unwrap();
        assert_eq!(t.delta(0, A, Domain::Slow), -5.0);
        assert_eq!(t.delta(0, A, Domain::Fast), 205.0);
    }

    #[test]
    fn interaction_picture_reproduces_schroedinger_dynamics_generator() {
        // U0† (H - H_int - H_L) U0 at time t equals H^I(t)
        let m = closed_model(1, 2, &[1], 0.1, false);
        let hi = to_interaction_picture(&m).unwrap();
        let free = &m.internal_hamiltonian().unwrap() + &m.light_hamiltonian();
        let t = 0.37;
        let u0 = free.matrix_function(qcr_spaces::SpectralFn::Propagator(t)).unwrap();
        let rest = &m.full_hamiltonian().unwrap() - &free;
        let lhs = rest.conjugate_by(&u0.adjoint());
        assert!((&lhs - &hi.at(t)).max_norm() < 1e-12);
    }

    #[test]
    fn photon_number_of_free_parts() {
        let m = closed_model(1, 3, &[0, 1], 0.1, false);
        let n = m.total_photon_number();
        for h in [m.light_hamiltonian(), m.atomic_hamiltonian().unwrap()] {
            assert!(h.commutator(&n).is_zero());
        }
    }
}
