//! Truncated single-mode photon Fock ladders.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::SpaceError;
use crate::operator::OperatorMatrix;
use crate::scalar::{cr, lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhotonMode {
    A,
    B,
}

impl PhotonMode {
    pub const BOTH: [PhotonMode; 2] = [PhotonMode::A, PhotonMode::B];

    pub fn index(self) -> usize {
        match self {
            PhotonMode::A => 0,
            PhotonMode::B => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            PhotonMode::A => PhotonMode::B,
            PhotonMode::B => PhotonMode::A,
        }
    }
}

impl fmt::Display for PhotonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhotonMode::A => "a",
            PhotonMode::B => "b",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhotonLadder {
    n_max: usize,
    mode: PhotonMode,
}

impl PhotonLadder {
    pub fn new(n_max: usize, mode: PhotonMode) -> Result<Self, SpaceError> {
        if n_max < 1 {
            return Err(SpaceError::Cutoff(n_max));
        }
        Ok(Self { n_max, mode })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn mode(&self) -> PhotonMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn annihilation_matrix<T: Real>(&self) -> DMatrix<Complex<T>> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for n in 1..d {
            m[(n - 1, n)] = cr(lit::<T>(n as f64).sqrt());
        }
        m
    }

    pub fn number_matrix<T: Real>(&self) -> DMatrix<Complex<T>> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| if r == c { cr(lit::<T>(r as f64)) } else { cr(T::zero()) })
    }
}

/// â on a single ladder: ⟨n−1|â|n⟩ = √n.
pub fn build_annihilation<T: Real>(ladder: &PhotonLadder) -> OperatorMatrix<T> {
    OperatorMatrix::new(ladder.annihilation_matrix())
}

pub fn build_creation<T: Real>(ladder: &PhotonLadder) -> OperatorMatrix<T> {
    build_annihilation(ladder).adjoint()
}

pub fn build_number<T: Real>(ladder: &PhotonLadder) -> OperatorMatrix<T> {
    OperatorMatrix::new(ladder.number_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_ladder() {
        let l = PhotonLadder::new(1, PhotonMode::A).unwrap();
        let a = build_annihilation::<f64>(&l);
        assert_eq!(a.get(0, 1), Complex::new(1.0, 0.0));
        assert_eq!(a.get(0, 0), Complex::new(0.0, 0.0));
        assert_eq!(a.get(1, 0), Complex::new(0.0, 0.0));
        assert_eq!(a.get(1, 1), Complex::new(0.0, 0.0));
        assert_eq!(PhotonLadder::new(0, PhotonMode::B), Err(SpaceError::Cutoff(0)));
    }

    #[test]
    fn truncation_edge_commutator() {
        for n_max in [2usize, 5, 9] {
            let l = PhotonLadder::new(n_max, PhotonMode::B).unwrap();
            let a = build_annihilation::<f64>(&l);
            let comm = a.commutator(&a.adjoint());
            for r in 0..=n_max {
                for c in 0..=n_max {
                    let expect = if r != c {
                        0.0
                    } else if r == n_max {
                        -(n_max as f64)
                    } else {
                        1.0
                    };
                    assert!((comm.get(r, c).re - expect).abs() < 1e-14 && comm.get(r, c).im == 0.0);
                }
            }
        }
    }

    #[test]
    fn number_operator_eigenvalue() {
        let l = PhotonLadder::new(30, PhotonMode::A).unwrap();
        let a = build_annihilation::<f64>(&l);
        let n = &a.adjoint() * &a;
        assert!((n.get(10, 10).re - 10.0).abs() < 1e-13);
        assert!((&n - &build_number::<f64>(&l)).max_norm() < 1e-13);
    }
}
