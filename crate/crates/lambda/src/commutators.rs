//! Structured evaluation of [x†_m, x_n] for the coupling Hamiltonians.
//!
//! With x_n = X_n ⊗ α̂ and x_m = X_m ⊗ β̂ (X one-body atomic operators),
//! [x†_m, x_n] = X†_m X_n ⊗ β̂†α̂ − X_n X†_m ⊗ α̂β̂†, and each product splits
//! into its normal-ordered four-field part plus a single contraction.

use nalgebra::DMatrix;
use num_complex::Complex;
use qcr_averaging::Domain;
use qcr_spaces::operator::product;
use qcr_spaces::{OperatorMatrix, PhotonMode, Real};

use crate::error::LambdaError;
use crate::model::LambdaModel;

/// One commutator [x†_m, x_n] with n = (j, α), m = (k, β).
#[derive(Clone, Debug)]
pub struct CommutatorTerm<T: Real> {
    pub domain: Domain,
    pub n: (usize, PhotonMode),
    pub m: (usize, PhotonMode),
    /// Brute-force matrix commutator.
    pub direct: OperatorMatrix<T>,
    /// Contraction from X†_m X_n (present when the inner levels agree).
    pub left: Option<OperatorMatrix<T>>,
    /// Contraction from −X_n X†_m (present when the outer levels agree).
    pub right: Option<OperatorMatrix<T>>,
    /// :X†_m X_n: ⊗ (β̂†α̂ − α̂β̂†)
    pub pair: OperatorMatrix<T>,
}

impl<T: Real> CommutatorTerm<T> {
    pub fn structured(&self) -> OperatorMatrix<T> {
        let mut s = self.pair.clone();
        for c in [&self.left, &self.right].into_iter().flatten() {
            s += c;
        }
        s
    }

    /// ‖direct − structured‖_max
    pub fn defect(&self) -> T {
        (&self.direct - &self.structured()).max_norm()
    }
}

/// Every intra-domain pair (n, m), slow domain first.
pub fn evaluate_commutators<T: Real>(model: &LambdaModel<T>) -> Result<Vec<CommutatorTerm<T>>, LambdaError> {
    let mut out = Vec::new();
    let index: Vec<(usize, PhotonMode)> =
        (0..model.n_ancillas()).flat_map(|j| PhotonMode::BOTH.map(|a| (j, a))).collect();
    for domain in [Domain::Slow, Domain::Fast] {
        for &n in &index {
            for &m in &index {
                out.push(commutator(model, domain, n, m)?);
            }
        }
    }
    Ok(out)
}

pub fn commutator<T: Real>(
    model: &LambdaModel<T>,
    domain: Domain,
    n: (usize, PhotonMode),
    m: (usize, PhotonMode),
) -> Result<CommutatorTerm<T>, LambdaError> {
    let basis = model.basis();
    let (rn, cn) = model.coupling_levels(n.0, n.1, domain);
    let (rm, cm) = model.coupling_levels(m.0, m.1, domain);
    let mn = model.coupling_matrix(n.0, n.1, domain);
    let mm_dag: DMatrix<Complex<T>> = model.coupling_matrix(m.0, m.1, domain).adjoint();

    let an = basis.photon_annihilation(n.1);
    let am = basis.photon_annihilation(m.1);
    let am_dag = am.adjoint();
    let left_ph = product(&am_dag, &an);
    let right_ph = product(&an, &am_dag);

    let xn = model.coupling_operator(n.0, n.1, domain)?;
    let xm = model.coupling_operator(m.0, m.1, domain)?;
    let direct = xm.adjoint().commutator(&xn);

    let left = if rm == rn {
        let c = basis.one_body(cm, cn, &product(&mm_dag, mn))?;
        Some(basis.atom_photon(&c, &left_ph))
    } else {
        None
    };
    let right = if cn == cm {
        let c = basis.one_body(rn, rm, &product(mn, &mm_dag))?;
        Some(basis.atom_photon(&c, &right_ph).scale_re(-T::one()))
    } else {
        None
    };
    let pp = basis.normal_ordered_pair((cm, rm, &mm_dag), (rn, cn, mn))?;
    let pair = basis.atom_photon(&pp, &(left_ph - right_ph));
    Ok(CommutatorTerm { domain, n, m, direct, left, right, pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::closed_model;
    use qcr_spaces::{AtomicModeSet, CompositeBasis, LevelModes, SpatialBackend};

    #[test]
    fn structured_matches_direct_two_atoms() {
        let m = closed_model(2, 3, &[0, 1, 2], 0.1, false);
        let terms = evaluate_commutators(&m).unwrap();
        assert_eq!(terms.len(), 2 * 4 * 4);
        for t in &terms {
            assert!(t.defect() < 1e-12, "{:?} {:?} {:?}: {}", t.domain, t.n, t.m, t.defect());
        }
    }

    #[test]
    fn structured_matches_direct_on_momentum_ladder() {
        // open ladder: truncation in momentum, exact contractions regardless
        let levels = crate::scheme::LevelScheme::new(0.0, 10.0, vec![205.0, 230.0]).unwrap();
        let c = Complex::new(0.1, 0.05);
        let couplings = crate::scheme::CouplingSet::plane_waves([200.0, 190.0], [1, -1], vec![[c, c], [c, -c]]).unwrap();
        let modes = AtomicModeSet::new(
            SpatialBackend::ladder(1.0),
            vec![
                ("a".into(), LevelModes::Momenta(vec![0, 2])),
                ("b".into(), LevelModes::Momenta(vec![2, 4])),
                ("3".into(), LevelModes::Momenta(vec![1, 3])),
                ("4".into(), LevelModes::Momenta(vec![1])),
            ],
            2,
        )
        .unwrap();
        let basis = CompositeBasis::new(2, 2, modes).unwrap();
        let m = LambdaModel::new(levels, couplings, basis, qcr_averaging::HcSign::Hermitian).unwrap();
        for t in evaluate_commutators(&m).unwrap() {
            assert!(t.defect() < 1e-12);
        }
    }

    #[test]
    fn pair_term_vanishes_on_one_atom() {
        let m = closed_model(2, 3, &[0, 1], 0.1, false);
        for t in evaluate_commutators(&m).unwrap() {
            assert!(t.pair.is_zero());
        }
    }

    #[test]
    fn diagonal_pair_reduces_to_number_weighted_projectors() {
        // j = k, α = β: Ω*Ω (ψ†_α ψ_α n̂_α − ψ†_j ψ_j (n̂_α + 1)) below the photon edge
        let m = closed_model(1, 3, &[1], 0.1, false);
        let t = commutator(&m, Domain::Slow, (0, PhotonMode::A), (0, PhotonMode::A)).unwrap();
        let b = m.basis();
        let w = m.coupling_matrix(0, PhotonMode::A, Domain::Slow)[(0, 0)].norm_sqr();
        for i in 0..b.dim() {
            let l = b.label(i);
            if l.n_a == 3 {
                continue;
            }
            let expect = if l.occupation[0] == 1 {
                w * l.n_a as f64
            } else if l.occupation[2] == 1 {
                -w * (l.n_a as f64 + 1.0)
            } else {
                0.0
            };
            assert!((t.direct.get(i, i).re - expect).abs() < 1e-14);
        }
        assert!(t.direct.restrict(|i| b.label(i).n_a < 3).max_norm() > 0.0);
    }
}
