//! The reduced Rabi-block Hamiltonian, its two-photon operators and V².

use nalgebra::DMatrix;
use num_complex::Complex;
use qcr_lambda::shifts::{self_couplings, Density};
use qcr_lambda::{LambdaModel, LEVEL_A, LEVEL_B};
use qcr_spaces::operator::product;
use qcr_spaces::scalar::cr;
use qcr_spaces::{CompositeBasis, OperatorMatrix, PhotonMode, Real, SpatialFunction};

use crate::error::PulseError;

/// ĉ = b̂†â, ĉ† = â†b̂ on the photon pair, ψ̂_c = ψ̂†_b ψ̂_a on configurations,
/// and the effective two-photon frequencies Ω(R), Λ(R).
#[derive(Clone, Debug)]
pub struct JointOperators<T: Real> {
    pub c: DMatrix<Complex<T>>,
    pub c_dag: DMatrix<Complex<T>>,
    /// n̂_a(n̂_b + 1) = ĉ†ĉ
    pub n_c: DMatrix<Complex<T>>,
    pub psi_c: DMatrix<Complex<T>>,
    pub psi_c_dag: DMatrix<Complex<T>>,
    pub omega: SpatialFunction<T>,
    pub lambda: SpatialFunction<T>,
}

impl<T: Real> JointOperators<T> {
    pub fn new(model: &LambdaModel<T>) -> Result<Self, PulseError> {
        let basis = model.basis();
        let a = basis.photon_annihilation(PhotonMode::A);
        let b = basis.photon_annihilation(PhotonMode::B);
        let c = product(&b.adjoint(), &a);
        let c_dag = c.adjoint();
        let n_c = product(&c_dag, &c);
        let one = SpatialFunction::constant(Complex::new(T::one(), T::zero()));
        let psi_c = basis.one_body(LEVEL_B, LEVEL_A, &basis.modes().matrix(LEVEL_B, LEVEL_A, &one)?)?;
        let psi_c_dag = psi_c.adjoint();
        let (omega, lambda) = effective_frequencies(model)?;
        Ok(Self { c, c_dag, n_c, psi_c, psi_c_dag, omega, lambda })
    }
}

/// Ω(R) = −Σ_j Ω*_{jb}Ω_{ja}/ω⁽⁺⁾_{jjab} and Λ(R) = Σ_j Λ*_{jb}Λ_{ja}/Ω⁽⁺⁾_{jjab}.
pub fn effective_frequencies<T: Real>(model: &LambdaModel<T>) -> Result<(SpatialFunction<T>, SpatialFunction<T>), PulseError> {
    let (cs, d) = (model.couplings(), model.detunings());
    let (pa, pb) = (PhotonMode::A, PhotonMode::B);
    let mut omega = SpatialFunction::zero();
    let mut lambda = SpatialFunction::zero();
    for j in 0..model.n_ancillas() {
        let o = cs.omega(j, pb).conj().mul(cs.omega(j, pa)).map_err(qcr_lambda::LambdaError::from)?;
        omega = omega.add(&o.scale(cr(-d.inv_slow(j, j, pa, pb)))).map_err(qcr_lambda::LambdaError::from)?;
        let l = cs.lambda(j, pb).conj().mul(&cs.lambda(j, pa)).map_err(qcr_lambda::LambdaError::from)?;
        lambda = lambda.add(&l.scale(cr(d.inv_fast(j, j, pa, pb)))).map_err(qcr_lambda::LambdaError::from)?;
    }
    Ok((omega, lambda))
}

/// H_R = H₀⁽²⁾ + 𝒱̂ with H₀⁽²⁾ = Δ̂_a + Δ̂_b + H_L and 𝒱̂ the Rabi off-diagonals.
#[derive(Clone, Debug)]
pub struct ReducedHamiltonian<T: Real> {
    pub h_r: OperatorMatrix<T>,
    pub h0: OperatorMatrix<T>,
    pub v: OperatorMatrix<T>,
    parts: VParts<T>,
}

/// 𝒱̂ = A + B + A† + B† with A the Ω part and B the Λ part of the b←a coupling.
#[derive(Clone, Debug)]
struct VParts<T: Real> {
    a: OperatorMatrix<T>,
    b: OperatorMatrix<T>,
}

impl<T: Real> ReducedHamiltonian<T> {
    pub fn from_model(model: &LambdaModel<T>) -> Result<Self, PulseError> {
        let sc = self_couplings(model)?;
        let mut h0 = &sc.delta_a + &sc.delta_b;
        h0 += &model.light_hamiltonian();
        let parts = v_parts(model)?;
        let v = parts.sum();
        let h_r = &h0 + &v;
        Ok(Self { h_r, h0, v, parts })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    /// Full V² and the approximation keeping ĉ², ĉ†² and the mixed ĉĉ†/ĉ†ĉ terms.
    pub fn v_squared(&self) -> VSquared<T> {
        let p = &self.parts;
        let (a, b) = (&p.a, &p.b);
        let (ad, bd) = (a.adjoint(), b.adjoint());
        let named = [("A", a), ("B", b), ("A†", &ad), ("B†", &bd)];
        let kept = [("A", "A"), ("A†", "A†"), ("A", "A†"), ("A†", "A"), ("B", "B†"), ("B†", "B")];
        let mut full = OperatorMatrix::zeros(self.dim());
        let mut approx = OperatorMatrix::zeros(self.dim());
        let mut dropped = Vec::new();
        for (ln, l) in &named {
            for (rn, r) in &named {
                let prod = *l * *r;
                full += &prod;
                if kept.contains(&(*ln, *rn)) {
                    approx += &prod;
                } else {
                    dropped.push(DroppedTerm { label: format!("{ln}·{rn}"), norm: prod.frobenius_norm() });
                }
            }
        }
        VSquared { full, approx, dropped }
    }
}

impl<T: Real> VParts<T> {
    fn sum(&self) -> OperatorMatrix<T> {
        let mut v = &self.a + &self.b;
        v += &self.a.adjoint();
        v += &self.b.adjoint();
        v
    }
}

/// A = −s ∫Ω(R) ĉ ψ̂_c, B = −s ∫Λ(R) ĉ† ψ̂_c, s the hermitian-conjugate sign.
fn v_parts<T: Real>(model: &LambdaModel<T>) -> Result<VParts<T>, PulseError> {
    let s: T = model.hc_sign().value();
    let basis: &CompositeBasis<T> = model.basis();
    let j = JointOperators::new(model)?;
    let a = Density::term(j.omega, j.c).embed(basis, LEVEL_B, LEVEL_A)?.scale_re(-s);
    let b = Density::term(j.lambda, j.c_dag).embed(basis, LEVEL_B, LEVEL_A)?.scale_re(-s);
    Ok(VParts { a, b })
}

/// 𝒱̂ of the reduced model.
pub fn build_v<T: Real>(model: &LambdaModel<T>) -> Result<OperatorMatrix<T>, PulseError> {
    Ok(v_parts(model)?.sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DroppedTerm<T: Real> {
    pub label: String,
    /// Frobenius norm of the discarded product.
    pub norm: T,
}

#[derive(Clone, Debug)]
pub struct VSquared<T: Real> {
    pub full: OperatorMatrix<T>,
    pub approx: OperatorMatrix<T>,
    pub dropped: Vec<DroppedTerm<T>>,
}

impl<T: Real> VSquared<T> {
    pub fn dropped_norm(&self) -> T {
        self.dropped.iter().fold(T::zero(), |acc, d| acc + d.norm)
    }
}
