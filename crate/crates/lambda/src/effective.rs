//! Assembly of the effective Hamiltonian from shifts and couplings, and the
//! generic averaging-engine path used to cross-check it.

use qcr_averaging::{EffectiveTerms, FilterSpec};
use qcr_spaces::operator::product;
use qcr_spaces::{CompositeBasis, FieldKind, OperatorMatrix, PhotonMode, Real};

use crate::error::LambdaError;
use crate::model::{to_interaction_picture, LambdaModel};
use crate::scheme::{ancilla_level, relevant_level, LEVEL_A, LEVEL_B};
use crate::shifts::{ancilla_coupling, pair_self_coupling, rabi_coupling, self_couplings};
use qcr_averaging::Domain;

/// Which denominator each second-order contribution used.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub entries: Vec<(String, String)>,
    pub dropped: Vec<String>,
}

impl Provenance {
    fn note(&mut self, term: impl Into<String>, denominator: impl Into<String>) {
        self.entries.push((term.into(), denominator.into()));
    }
}

/// H_eff = H_L + H_sp + H_pp, H_sp = M_R + M_A.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian<T: Real> {
    pub h_l: OperatorMatrix<T>,
    /// Relevant block: Δ̂_a, Δ̂_b and the Rabi coupling.
    pub m_r: OperatorMatrix<T>,
    /// Ancilla block: Δ̂_j and χ̂_jk.
    pub m_a: OperatorMatrix<T>,
    pub h_pp: OperatorMatrix<T>,
    /// Composed pair products before subtracting 𝒱 (unsigned).
    pub pp_products: OperatorMatrix<T>,
    /// ∫ψ†_α 𝒱_α ψ_α summed over α (unsigned).
    pub pp_self: OperatorMatrix<T>,
    pub provenance: Provenance,
}

impl<T: Real> EffectiveHamiltonian<T> {
    pub fn h_sp(&self) -> OperatorMatrix<T> {
        &self.m_r + &self.m_a
    }

    pub fn total(&self) -> OperatorMatrix<T> {
        let mut h = &self.h_l + &self.m_r;
        h += &self.m_a;
        h += &self.h_pp;
        h
    }

    pub fn parts(&self) -> [(&'static str, &OperatorMatrix<T>); 4] {
        [("H_L", &self.h_l), ("M_R", &self.m_r), ("M_A", &self.m_a), ("H_pp", &self.h_pp)]
    }
}

/// Builds H_eff from the AC-Stark/Bloch-Siegert decomposition, the Rabi and
/// ancilla couplings and the pair-pair terms.
pub fn assemble_h_eff<T: Real>(model: &LambdaModel<T>) -> Result<EffectiveHamiltonian<T>, LambdaError> {
    let s: T = model.hc_sign().value();
    let basis = model.basis();
    let n_anc = model.n_ancillas();
    let mut provenance = Provenance::default();

    let sc = self_couplings(model)?;
    let (b, a) = (LEVEL_B, LEVEL_A);
    let rabi = rabi_coupling(model)?.embed(basis, b, a)?.scale_re(-s);
    let mut m_r = &sc.delta_a + &sc.delta_b;
    m_r += &rabi;
    m_r += &rabi.adjoint();
    for j in 0..n_anc {
        provenance.note(format!("rabi b†a via ancilla {}", j + 3), format!("omega+_({0}{0},ab)", j + 3));
        provenance.note(format!("rabi a†b via ancilla {}", j + 3), format!("Omega+_({0}{0},ab)", j + 3));
    }

    let mut m_a = OperatorMatrix::zeros(basis.dim());
    for d in &sc.delta_j {
        m_a += d;
    }
    for j in 0..n_anc {
        for k in 0..n_anc {
            if j != k {
                let chi = ancilla_coupling(model, j, k)?.embed(basis, ancilla_level(j), ancilla_level(k))?;
                m_a += &chi.scale_re(-s);
                provenance.note(format!("chi_{}{}", j + 3, k + 3), format!("omega+_({}{},aa|bb)", j + 3, k + 3));
            }
        }
    }

    let pp_products = pair_products(model)?;
    let mut pp_self = OperatorMatrix::zeros(basis.dim());
    for alpha in PhotonMode::BOTH {
        let l = relevant_level(alpha);
        pp_self += &pair_self_coupling(model, alpha)?.embed(basis, l, l)?;
    }
    let h_pp = (&pp_products - &pp_self).scale_re(-s);

    if model.couplings().rwa() {
        provenance.dropped.push("counter-rotating couplings".into());
    }
    Ok(EffectiveHamiltonian { h_l: model.light_hamiltonian(), m_r, m_a, h_pp, pp_products, pp_self, provenance })
}

/// Σ_{jkα} (ψ†_α Ω*_{kα} ψ_k)(ψ†_j Ω_{jα} ψ_α)/ω⁽⁺⁾_{jkαα} + the Λ analogue over Ω⁽⁺⁾.
fn pair_products<T: Real>(model: &LambdaModel<T>) -> Result<OperatorMatrix<T>, LambdaError> {
    let basis = model.basis();
    let d = model.detunings();
    let n = basis.n_configs();
    let mut acc = nalgebra::DMatrix::zeros(n, n);
    for alpha in PhotonMode::BOTH {
        let al = relevant_level(alpha);
        for j in 0..model.n_ancillas() {
            let jl = ancilla_level(j);
            let co_j = basis.one_body(jl, al, model.coupling_matrix(j, alpha, Domain::Slow))?;
            let ct_j = basis.one_body(jl, al, &model.coupling_matrix(j, alpha, Domain::Fast).adjoint())?;
            for k in 0..model.n_ancillas() {
                let kl = ancilla_level(k);
                let co_k = basis.one_body(al, kl, &model.coupling_matrix(k, alpha, Domain::Slow).adjoint())?;
                let ct_k = basis.one_body(al, kl, model.coupling_matrix(k, alpha, Domain::Fast))?;
                let ws = qcr_spaces::scalar::cr(d.inv_slow(j, k, alpha, alpha));
                let wf = qcr_spaces::scalar::cr(d.inv_fast(j, k, alpha, alpha));
                acc += product(&co_k, &co_j) * ws;
                acc += product(&ct_k, &ct_j) * wf;
            }
        }
    }
    Ok(basis.atom_photon(&acc, &basis.photon_identity()))
}

/// Adds H_int + H_L back to an interaction-picture effective Hamiltonian at t = 0.
pub fn restore_schroedinger<T: Real>(model: &LambdaModel<T>, h_interaction: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>, LambdaError> {
    let mut h = h_interaction + &model.internal_hamiltonian()?;
    h += &model.light_hamiltonian();
    Ok(h)
}

/// Effective Hamiltonian produced by the generic averaging engine on the
/// interaction-picture model, returned in the Schrödinger picture.
pub fn engine_effective_hamiltonian<T: Real>(model: &LambdaModel<T>, filter: &FilterSpec<T>) -> Result<OperatorMatrix<T>, LambdaError> {
    let h = to_interaction_picture(model)?;
    let hi = EffectiveTerms::new(&h, filter)?.at(T::zero());
    restore_schroedinger(model, &hi)
}

/// i dψ/dt = [ψ, H] for the field annihilator ψ_{level, mode}.
pub fn heisenberg_rhs<T: Real>(
    h: &OperatorMatrix<T>,
    basis: &CompositeBasis<T>,
    level: usize,
    mode: usize,
) -> Result<OperatorMatrix<T>, LambdaError> {
    let psi = basis.field_op(level, mode, FieldKind::Annihilate)?;
    Ok(psi.commutator(h))
}

/// Projector onto states strictly below both photon cutoffs.
pub fn below_photon_edge<T: Real>(basis: &CompositeBasis<T>) -> impl Fn(usize) -> bool + '_ {
    let (na, nb) = (basis.ladder(PhotonMode::A).n_max(), basis.ladder(PhotonMode::B).n_max());
    move |i| {
        let l = basis.label(i);
        l.n_a < na && l.n_b < nb
    }
}
