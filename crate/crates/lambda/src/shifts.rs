//! Energy shifts, self-couplings and transition couplings as operator densities.

use nalgebra::DMatrix;
use num_complex::Complex;
use qcr_spaces::operator::identity;
use qcr_spaces::scalar::{cr, lit};
use qcr_spaces::{CompositeBasis, OperatorMatrix, PhotonMode, Real, SpatialFunction};

use crate::error::LambdaError;
use crate::model::LambdaModel;
use crate::scheme::{ancilla_level, relevant_level, LEVEL_A, LEVEL_B};

use PhotonMode::{A, B};

/// Σ_i f_i(R) ⊗ P_i: spatial weights times photon-pair matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Density<T: Real> {
    terms: Vec<(SpatialFunction<T>, DMatrix<Complex<T>>)>,
}

impl<T: Real> Default for Density<T> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<T: Real> Density<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(f: SpatialFunction<T>, photon: DMatrix<Complex<T>>) -> Self {
        Self { terms: vec![(f, photon)] }
    }

    pub fn terms(&self) -> &[(SpatialFunction<T>, DMatrix<Complex<T>>)] {
        &self.terms
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn minus(self, other: &Self) -> Self {
        self.plus(&other.scaled(-T::one()))
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { terms: self.terms.iter().map(|(f, p)| (f.scale(cr(s)), p.clone())).collect() }
    }

    /// Density of the adjoint operator (for embedding at the transposed levels).
    pub fn adjoint(&self) -> Self {
        Self { terms: self.terms.iter().map(|(f, p)| (f.conj(), p.adjoint())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(f, p)| f.is_zero() || p.iter().all(|z| *z == Complex::new(T::zero(), T::zero())))
    }

    /// Photon operator if every weight is position independent.
    pub fn photon_operator(&self, basis: &CompositeBasis<T>) -> Option<OperatorMatrix<T>> {
        let d = basis.photon_dim();
        let mut m = DMatrix::zeros(d, d);
        for (f, p) in &self.terms {
            m += p * f.as_constant()?;
        }
        Some(OperatorMatrix::new(m))
    }

    /// Σ_i ∫ψ†_row f_i ψ_col ⊗ P_i on the full basis.
    pub fn embed(&self, basis: &CompositeBasis<T>, row: usize, col: usize) -> Result<OperatorMatrix<T>, LambdaError> {
        let mut acc = OperatorMatrix::zeros(basis.dim());
        for (f, p) in &self.terms {
            if f.is_zero() {
                continue;
            }
            let m = basis.modes().matrix(row, col, f)?;
            let atomic = basis.one_body(row, col, &m)?;
            acc += &basis.atom_photon(&atomic, p);
        }
        Ok(acc)
    }
}

/// The ± branch of a shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Photon-number-dependent shift and its vacuum counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPair<T: Real> {
    pub operator: Density<T>,
    pub vacuum: Density<T>,
}

fn abs2<T: Real>(f: &SpatialFunction<T>) -> Result<SpatialFunction<T>, LambdaError> {
    Ok(f.conj().mul(f)?)
}

fn number<T: Real>(basis: &CompositeBasis<T>, alpha: PhotonMode) -> DMatrix<Complex<T>> {
    basis.photon_number(alpha)
}

fn number_plus_one<T: Real>(basis: &CompositeBasis<T>, alpha: PhotonMode) -> DMatrix<Complex<T>> {
    basis.photon_number(alpha) + identity::<T>(basis.photon_dim())
}

fn check_ancilla<T: Real>(model: &LambdaModel<T>, j: usize) -> Result<(), LambdaError> {
    if j >= model.n_ancillas() {
        return Err(LambdaError::UnknownAncilla { index: j, count: model.n_ancillas() });
    }
    Ok(())
}

/// Weighted |coupling|² per relevant state: co-rotating uses 1/ω⁽⁺⁾_{jjαα},
/// counter-rotating 1/Ω⁽⁺⁾_{jjαα}.
fn weight<T: Real>(model: &LambdaModel<T>, j: usize, alpha: PhotonMode, counter: bool) -> Result<SpatialFunction<T>, LambdaError> {
    let d = model.detunings();
    Ok(if counter {
        abs2(&model.couplings().lambda(j, alpha))?.scale(cr(d.inv_fast(j, j, alpha, alpha)))
    } else {
        abs2(model.couplings().omega(j, alpha))?.scale(cr(d.inv_slow(j, j, alpha, alpha)))
    })
}

fn shift_j<T: Real>(model: &LambdaModel<T>, j: usize, branch: Branch, counter: bool) -> Result<ShiftPair<T>, LambdaError> {
    check_ancilla(model, j)?;
    let basis = model.basis();
    let wa = weight(model, j, A, counter)?;
    let wb = weight(model, j, B, counter)?.scale(cr(branch.sign()));
    let id = identity::<T>(basis.photon_dim());
    Ok(ShiftPair {
        operator: Density::term(wa.clone(), number(basis, A)).plus(&Density::term(wb.clone(), number(basis, B))),
        vacuum: Density::term(wa, id.clone()).plus(&Density::term(wb, id)),
    })
}

fn sum_over_ancillas<T: Real>(
    model: &LambdaModel<T>,
    f: impl Fn(usize) -> Result<ShiftPair<T>, LambdaError>,
) -> Result<ShiftPair<T>, LambdaError> {
    let mut acc = ShiftPair { operator: Density::zero(), vacuum: Density::zero() };
    for j in 0..model.n_ancillas() {
        let p = f(j)?;
        acc.operator = acc.operator.plus(&p.operator);
        acc.vacuum = acc.vacuum.plus(&p.vacuum);
    }
    Ok(acc)
}

/// ω̂_AC,j⁽±⁾ and ω_ACvac,j⁽±⁾ for a single ancilla.
pub fn ac_stark_j<T: Real>(model: &LambdaModel<T>, j: usize, branch: Branch) -> Result<ShiftPair<T>, LambdaError> {
    shift_j(model, j, branch, false)
}

/// ω̂_BS,j⁽±⁾ and ω_BSvac,j⁽±⁾ for a single ancilla.
pub fn bloch_siegert_j<T: Real>(model: &LambdaModel<T>, j: usize, branch: Branch) -> Result<ShiftPair<T>, LambdaError> {
    shift_j(model, j, branch, true)
}

/// Ω̂_AC⁽±⁾ = Σ_j |Ω_{ja}|²/ω⁽⁺⁾_{jjaa} n̂_a ± |Ω_{jb}|²/ω⁽⁺⁾_{jjbb} n̂_b, with vacuum part.
pub fn ac_stark<T: Real>(model: &LambdaModel<T>, branch: Branch) -> Result<ShiftPair<T>, LambdaError> {
    sum_over_ancillas(model, |j| ac_stark_j(model, j, branch))
}

/// Ω̂_BS⁽±⁾ = Σ_j |Λ_{ja}|²/Ω⁽⁺⁾_{jjaa} n̂_a ± |Λ_{jb}|²/Ω⁽⁺⁾_{jjbb} n̂_b, with vacuum part.
pub fn bloch_siegert<T: Real>(model: &LambdaModel<T>, branch: Branch) -> Result<ShiftPair<T>, LambdaError> {
    sum_over_ancillas(model, |j| bloch_siegert_j(model, j, branch))
}

/// Self-couplings Δ̂_a, Δ̂_b and Δ̂_j on the full basis.
#[derive(Clone, Debug)]
pub struct SelfCouplings<T: Real> {
    pub delta_a: OperatorMatrix<T>,
    pub delta_b: OperatorMatrix<T>,
    pub delta_j: Vec<OperatorMatrix<T>>,
}

fn embed_h0<T: Real>(model: &LambdaModel<T>, level: usize) -> Result<OperatorMatrix<T>, LambdaError> {
    let basis = model.basis();
    Ok(basis.atom_photon(&model.level_h0(level)?, &basis.photon_identity()))
}

/// Shift part of Δ̂_α written directly from the couplings:
/// Σ_j |Ω_{jα}|²/ω⁽⁺⁾ n̂_α − |Λ_{jα}|²/Ω⁽⁺⁾ (n̂_α + 1), before the sign.
pub fn relevant_shift_direct<T: Real>(model: &LambdaModel<T>, alpha: PhotonMode) -> Result<Density<T>, LambdaError> {
    let basis = model.basis();
    let mut d = Density::zero();
    for j in 0..model.n_ancillas() {
        d = d
            .plus(&Density::term(weight(model, j, alpha, false)?, number(basis, alpha)))
            .minus(&Density::term(weight(model, j, alpha, true)?, number_plus_one(basis, alpha)));
    }
    Ok(d)
}

/// Shift part of Δ̂_j written directly: Σ_α |Ω_{jα}|²/ω⁽⁺⁾ (n̂_α + 1) − |Λ_{jα}|²/Ω⁽⁺⁾ n̂_α.
pub fn ancilla_shift_direct<T: Real>(model: &LambdaModel<T>, j: usize) -> Result<Density<T>, LambdaError> {
    check_ancilla(model, j)?;
    let basis = model.basis();
    let mut d = Density::zero();
    for alpha in PhotonMode::BOTH {
        d = d
            .plus(&Density::term(weight(model, j, alpha, false)?, number_plus_one(basis, alpha)))
            .minus(&Density::term(weight(model, j, alpha, true)?, number(basis, alpha)));
    }
    Ok(d)
}

/// Shift parts of Δ̂_a, Δ̂_b from the AC-Stark and Bloch-Siegert shifts.
pub fn relevant_shifts_decomposed<T: Real>(model: &LambdaModel<T>) -> Result<[Density<T>; 2], LambdaError> {
    let half: T = lit(0.5);
    let (acp, acm) = (ac_stark(model, Branch::Plus)?, ac_stark(model, Branch::Minus)?);
    let (bsp, bsm) = (bloch_siegert(model, Branch::Plus)?, bloch_siegert(model, Branch::Minus)?);
    let a = acp
        .operator
        .clone()
        .plus(&acm.operator)
        .minus(&bsp.operator)
        .minus(&bsm.operator)
        .minus(&bsp.vacuum)
        .minus(&bsm.vacuum)
        .scaled(half);
    let b = acp
        .operator
        .minus(&acm.operator)
        .minus(&bsp.operator)
        .plus(&bsm.operator)
        .minus(&bsp.vacuum)
        .plus(&bsm.vacuum)
        .scaled(half);
    Ok([a, b])
}

/// Shift part of Δ̂_j: ω̂_AC,j⁽⁺⁾ − ω̂_BS,j⁽⁺⁾ + ω_ACvac,j⁽⁺⁾.
pub fn ancilla_shift_decomposed<T: Real>(model: &LambdaModel<T>, j: usize) -> Result<Density<T>, LambdaError> {
    let ac = ac_stark_j(model, j, Branch::Plus)?;
    let bs = bloch_siegert_j(model, j, Branch::Plus)?;
    Ok(ac.operator.minus(&bs.operator).plus(&ac.vacuum))
}

/// Δ̂_α = 𝓗₀⁽α⁾ + s·(relevant shift) and Δ̂_j = 𝓗₀⁽j⁾ − s·(ancilla shift),
/// with s the hermitian-conjugate sign; built from the AC/BS decomposition.
pub fn self_couplings<T: Real>(model: &LambdaModel<T>) -> Result<SelfCouplings<T>, LambdaError> {
    let [sa, sb] = relevant_shifts_decomposed(model)?;
    let anc: Result<Vec<_>, _> = (0..model.n_ancillas()).map(|j| ancilla_shift_decomposed(model, j)).collect();
    assemble_self(model, [sa, sb], anc?)
}

/// Same operators written directly from the couplings.
pub fn self_couplings_direct<T: Real>(model: &LambdaModel<T>) -> Result<SelfCouplings<T>, LambdaError> {
    let rel = [relevant_shift_direct(model, A)?, relevant_shift_direct(model, B)?];
    let anc: Result<Vec<_>, _> = (0..model.n_ancillas()).map(|j| ancilla_shift_direct(model, j)).collect();
    assemble_self(model, rel, anc?)
}

fn assemble_self<T: Real>(
    model: &LambdaModel<T>,
    rel: [Density<T>; 2],
    anc: Vec<Density<T>>,
) -> Result<SelfCouplings<T>, LambdaError> {
    let s: T = model.hc_sign().value();
    let basis = model.basis();
    let rel_op = |alpha: PhotonMode, d: &Density<T>| -> Result<OperatorMatrix<T>, LambdaError> {
        let l = relevant_level(alpha);
        Ok(&embed_h0(model, l)? + &d.embed(basis, l, l)?.scale_re(s))
    };
    let delta_a = rel_op(A, &rel[0])?;
    let delta_b = rel_op(B, &rel[1])?;
    let mut delta_j = Vec::with_capacity(anc.len());
    for (j, d) in anc.iter().enumerate() {
        let l = ancilla_level(j);
        delta_j.push(&embed_h0(model, l)? - &d.embed(basis, l, l)?.scale_re(s));
    }
    Ok(SelfCouplings { delta_a, delta_b, delta_j })
}

/// Ω̂_ba = −Σ_j [Ω*_{jb}Ω_{ja}/ω⁽⁺⁾_{jjab} b̂†â − Λ*_{jb}Λ_{ja}/Ω⁽⁺⁾_{jjab} â†b̂],
/// a density between ψ†_b and ψ_a.
pub fn rabi_coupling<T: Real>(model: &LambdaModel<T>) -> Result<Density<T>, LambdaError> {
    let basis = model.basis();
    let d = model.detunings();
    let swap_ba = qcr_spaces::operator::product(&basis.photon_annihilation(B).adjoint(), &basis.photon_annihilation(A));
    let swap_ab = swap_ba.adjoint();
    let mut out = Density::zero();
    for j in 0..model.n_ancillas() {
        let c = model.couplings();
        let co = c.omega(j, B).conj().mul(c.omega(j, A))?.scale(cr(-d.inv_slow(j, j, A, B)));
        let counter = c.lambda(j, B).conj().mul(&c.lambda(j, A))?.scale(cr(d.inv_fast(j, j, A, B)));
        out = out.plus(&Density::term(co, swap_ba.clone())).plus(&Density::term(counter, swap_ab.clone()));
    }
    Ok(out)
}

/// χ̂_jk = Σ_α [Ω*_{kα}Ω_{jα}/ω⁽⁺⁾_{jkαα} (n̂_α + 1) − Λ*_{kα}Λ_{jα}/Ω⁽⁺⁾_{jkαα} n̂_α],
/// a density between ψ†_j and ψ_k.
pub fn ancilla_coupling<T: Real>(model: &LambdaModel<T>, j: usize, k: usize) -> Result<Density<T>, LambdaError> {
    check_ancilla(model, j)?;
    check_ancilla(model, k)?;
    if j == k {
        return Err(LambdaError::SameAncilla(j));
    }
    let basis = model.basis();
    let d = model.detunings();
    let c = model.couplings();
    let mut out = Density::zero();
    for alpha in PhotonMode::BOTH {
        let co = c.omega(k, alpha).conj().mul(c.omega(j, alpha))?.scale(cr(d.inv_slow(j, k, alpha, alpha)));
        let counter = c.lambda(k, alpha).conj().mul(&c.lambda(j, alpha))?.scale(cr(d.inv_fast(j, k, alpha, alpha)));
        out = out
            .plus(&Density::term(co, number_plus_one(basis, alpha)))
            .minus(&Density::term(counter, number(basis, alpha)));
    }
    Ok(out)
}

/// 𝒱_α = Σ_j |Ω_{jα}|²/ω⁽⁺⁾_{jjαα} + |Λ_{jα}|²/Ω⁽⁺⁾_{jjαα} (photon identity).
pub fn pair_self_coupling<T: Real>(model: &LambdaModel<T>, alpha: PhotonMode) -> Result<Density<T>, LambdaError> {
    let id = identity::<T>(model.basis().photon_dim());
    let mut out = Density::zero();
    for j in 0..model.n_ancillas() {
        out = out
            .plus(&Density::term(weight(model, j, alpha, false)?, id.clone()))
            .plus(&Density::term(weight(model, j, alpha, true)?, id.clone()));
    }
    Ok(out)
}

/// Level pair (row, col) of the Rabi density.
pub const RABI_LEVELS: (usize, usize) = (LEVEL_B, LEVEL_A);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::closed_model;
    use crate::scheme::{CouplingSet, LevelScheme};
    use qcr_averaging::HcSign;
    use qcr_spaces::{AtomicModeSet, LevelModes, SpatialBackend};

    /// Real couplings g on both arms, Δ⁽⁻⁾ = −5 and Δ⁽⁺⁾ = 205 on the a arm.
    fn model(g: [f64; 2], rwa: bool, n_anc: usize) -> LambdaModel<f64> {
        let levels = LevelScheme::new(0.0, 10.0, vec![105.0; n_anc]).unwrap();
        let amps = vec![[Complex::new(g[0], 0.0), Complex::new(g[1], 0.0)]; n_anc];
        let couplings = CouplingSet::plane_waves([100.0, 90.0], [0, 0], amps).unwrap().with_rwa(rwa);
        let mut lv = vec![("a".to_string(), LevelModes::Momenta(vec![0])), ("b".to_string(), LevelModes::Momenta(vec![0]))];
        for j in 0..n_anc {
            lv.push((format!("{}", j + 3), LevelModes::Momenta(vec![0])));
        }
        let modes = AtomicModeSet::new(SpatialBackend::ladder(1.0), lv, 2).unwrap();
        let basis = CompositeBasis::with_sectors(5, 5, modes, &[1]).unwrap();
        LambdaModel::new(levels, couplings, basis, HcSign::Hermitian).unwrap()
    }

    fn diag_at(op: &OperatorMatrix<f64>, basis: &CompositeBasis<f64>, n_a: usize, n_b: usize) -> Complex<f64> {
        let i = basis.photon_index(n_a, n_b);
        op.get(i, i)
    }

    #[test]
    fn ac_stark_by_substitution() {
        let m = model([0.1, 0.0], false, 1);
        let ac = ac_stark(&m, Branch::Plus).unwrap().operator.photon_operator(m.basis()).unwrap();
        assert!((diag_at(&ac, m.basis(), 4, 0).re + 0.008).abs() < 1e-16);
        let zero = model([0.0, 0.0], false, 1);
        assert!(ac_stark(&zero, Branch::Plus).unwrap().operator.photon_operator(zero.basis()).unwrap().is_zero());
    }

    #[test]
    fn bloch_siegert_by_substitution() {
        let m = model([0.1, 0.0], false, 1);
        let bs = bloch_siegert(&m, Branch::Plus).unwrap().operator.photon_operator(m.basis()).unwrap();
        assert!((diag_at(&bs, m.basis(), 4, 0).re - 0.04 / 205.0).abs() < 1e-18);
        let ac = ac_stark(&m, Branch::Plus).unwrap().operator.photon_operator(m.basis()).unwrap();
        let ratio = diag_at(&bs, m.basis(), 3, 0).re / diag_at(&ac, m.basis(), 3, 0).re;
        assert!((ratio.abs() - 5.0 / 205.0).abs() < 1e-15);
        let rwa = model([0.1, 0.0], true, 1);
        assert!(bloch_siegert(&rwa, Branch::Plus).unwrap().operator.photon_operator(rwa.basis()).unwrap().is_zero());
    }

    #[test]
    fn two_equal_ancillas_double_everything() {
        let one = model([0.1, 0.07], false, 1);
        let two = model([0.1, 0.07], false, 2);
        for branch in [Branch::Plus, Branch::Minus] {
            for f in [ac_stark::<f64>, bloch_siegert::<f64>] {
                let a = f(&one, branch).unwrap();
                let b = f(&two, branch).unwrap();
                for (x, y) in [(&a.operator, &b.operator), (&a.vacuum, &b.vacuum)] {
                    let x = x.photon_operator(one.basis()).unwrap();
                    let y = y.photon_operator(two.basis()).unwrap();
                    assert!((&x.scale_re(2.0) - &y).max_norm() < 1e-16);
                }
            }
        }
        let r1 = rabi_coupling(&one).unwrap().photon_operator(one.basis()).unwrap();
        let r2 = rabi_coupling(&two).unwrap().photon_operator(two.basis()).unwrap();
        assert!((&r1.scale_re(2.0) - &r2).max_norm() < 1e-16);
    }

    #[test]
    fn rabi_amplitude_by_substitution() {
        let m = model([0.1, 0.1], true, 1);
        let r = rabi_coupling(&m).unwrap().embed(m.basis(), LEVEL_B, LEVEL_A).unwrap();
        let b = m.basis();
        for (na, nb) in [(1usize, 0usize), (3, 2), (5, 4)] {
            let from = b.find(&b.occupation(&[(LEVEL_A, 0)]).unwrap(), na, nb).unwrap();
            let to = b.find(&b.occupation(&[(LEVEL_B, 0)]).unwrap(), na - 1, nb + 1).unwrap();
            let expect = 0.002 * ((na * (nb + 1)) as f64).sqrt();
            assert!((r.get(to, from).re - expect).abs() < 1e-15);
        }
        // RWA: only b†a, so nothing maps b back to a
        let from = b.find(&b.occupation(&[(LEVEL_B, 0)]).unwrap(), 0, 1).unwrap();
        let to = b.find(&b.occupation(&[(LEVEL_A, 0)]).unwrap(), 1, 0).unwrap();
        assert_eq!(r.get(to, from), Complex::new(0.0, 0.0));
    }

    #[test]
    fn ancilla_coupling_pairing() {
        let m = closed_model(3, 2, &[1, 2], 0.1, false);
        for (j, k) in [(0, 1), (1, 2), (0, 2)] {
            let jk = ancilla_coupling(&m, j, k).unwrap().embed(m.basis(), ancilla_level(j), ancilla_level(k)).unwrap();
            let kj = ancilla_coupling(&m, k, j).unwrap().embed(m.basis(), ancilla_level(k), ancilla_level(j)).unwrap();
            assert!((&jk.adjoint() - &kj).max_norm() < 1e-16);
        }
        assert!(matches!(ancilla_coupling(&m, 1, 1), Err(LambdaError::SameAncilla(1))));
        assert!(matches!(ancilla_coupling(&m, 0, 7), Err(LambdaError::UnknownAncilla { .. })));
    }

    #[test]
    fn self_coupling_paths_agree() {
        for rwa in [false, true] {
            let m = closed_model(2, 3, &[1, 2], 0.1, rwa);
            let direct = self_couplings_direct(&m).unwrap();
            let decomposed = self_couplings(&m).unwrap();
            assert!((&direct.delta_a - &decomposed.delta_a).max_norm() < 1e-12);
            assert!((&direct.delta_b - &decomposed.delta_b).max_norm() < 1e-12);
            for (x, y) in direct.delta_j.iter().zip(&decomposed.delta_j) {
                assert!((x - y).max_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_field_self_coupling_is_bare() {
        let m = closed_model(2, 3, &[1], 0.0, false);
        let sc = self_couplings(&m).unwrap();
        let b = m.basis();
        assert_eq!(sc.delta_a, b.atom_photon(&m.level_h0(LEVEL_A).unwrap(), &b.photon_identity()));
        assert_eq!(sc.delta_b, b.atom_photon(&m.level_h0(LEVEL_B).unwrap(), &b.photon_identity()));
    }

    #[test]
    fn ancilla_shift_carries_n_plus_one() {
        let m = model([0.1, 0.0], true, 1);
        let d = ancilla_shift_direct(&m, 0).unwrap().photon_operator(m.basis()).unwrap();
        for n in 0..5 {
            assert!((diag_at(&d, m.basis(), n, 0).re - 0.01 / -5.0 * (n as f64 + 1.0)).abs() < 1e-16);
        }
    }
}
