//! Spectral functions evaluated block by block over the connected components
//! of a sparsity pattern.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use qcr_spaces::{OperatorMatrix, Real, Spectrum, StateVector};

use crate::error::PulseError;

/// Connected components of the union of the nonzero patterns.
pub fn components<T: Real>(ops: &[&OperatorMatrix<T>]) -> Vec<Vec<usize>> {
    let n = ops.first().map_or(0, |o| o.dim());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for op in ops {
        let m = op.matrix();
        for c in 0..n {
            for r in 0..n {
                if r != c && m[(r, c)] != Complex::new(T::zero(), T::zero()) {
                    let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Eigendecomposition of a hermitian operator restricted to each block.
#[derive(Clone, Debug)]
pub struct BlockSpectrum<T: Real> {
    dim: usize,
    blocks: Vec<(Vec<usize>, Spectrum<T>)>,
}

impl<T: Real> BlockSpectrum<T> {
    /// `blocks` must be invariant under `op`.
    pub fn new(op: &OperatorMatrix<T>, blocks: &[Vec<usize>]) -> Result<Self, PulseError> {
        let m = op.matrix();
        let mut out = Vec::with_capacity(blocks.len());
        for idx in blocks {
            let k = idx.len();
            let sub = DMatrix::from_fn(k, k, |i, j| m[(idx[i], idx[j])]);
            out.push((idx.clone(), OperatorMatrix::new(sub).spectrum()?));
        }
        Ok(Self { dim: op.dim(), blocks: out })
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        self.blocks.iter().flat_map(|(_, s)| s.values.iter().copied())
    }

    /// f(op) as a full matrix.
    pub fn apply<F: Fn(T) -> Complex<T>>(&self, f: F) -> OperatorMatrix<T> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (idx, s) in &self.blocks {
            let fb = s.apply(&f);
            let fm = fb.matrix();
            for (j, &cj) in idx.iter().enumerate() {
                for (i, &ri) in idx.iter().enumerate() {
                    out[(ri, cj)] = fm[(i, j)];
                }
            }
        }
        OperatorMatrix::new(out)
    }

    /// f(op)·ψ without forming f(op).
    pub fn apply_to<F: Fn(T) -> Complex<T>>(&self, f: F, psi: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        let mut out = DVector::zeros(self.dim);
        for (idx, s) in &self.blocks {
            let x = DVector::from_iterator(idx.len(), idx.iter().map(|&i| psi[i]));
            let mut y = s.vectors.adjoint() * x;
            for (k, lam) in s.values.iter().enumerate() {
                y[k] *= f(*lam);
            }
            let z = &s.vectors * y;
            for (i, &ri) in idx.iter().enumerate() {
                out[ri] = z[i];
            }
        }
        out
    }

    pub fn apply_state<F: Fn(T) -> Complex<T>>(&self, f: F, psi: &StateVector<T>) -> StateVector<T> {
        StateVector::new(self.apply_to(f, psi.amplitudes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcr_spaces::SpectralFn;

    #[test]
    fn blockwise_matches_full() {
        let mut m = DMatrix::<Complex<f64>>::zeros(5, 5);
        m[(0, 0)] = Complex::new(1.0, 0.0);
        m[(0, 3)] = Complex::new(0.5, 0.2);
        m[(3, 0)] = Complex::new(0.5, -0.2);
        m[(1, 4)] = Complex::new(-0.3, 0.0);
        m[(4, 1)] = Complex::new(-0.3, 0.0);
        m[(2, 2)] = Complex::new(2.0, 0.0);
        let op = OperatorMatrix::new(m);
        let blocks = components(&[&op]);
        assert_eq!(blocks, vec![vec![0, 3], vec![1, 4], vec![2]]);
        let bs = BlockSpectrum::new(&op, &blocks).unwrap();
        let f = SpectralFn::Propagator(0.7);
        let full = op.matrix_function(f).unwrap();
        assert!((&bs.apply(|x| f.eval(x)) - &full).max_norm() < 1e-14);
        let psi = DVector::from_fn(5, |i, _| Complex::new(i as f64, 1.0));
        let y = bs.apply_to(|x| f.eval(x), &psi);
        assert!((y - full.matrix() * psi).camax() < 1e-13);
    }
}
