//! Dense complex operators with a cached hermiticity flag.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::SpaceError;
use crate::scalar::{cabs, cr, lit, to_f64, Real};
use crate::state::StateVector;

/// Relative tolerance below which an operator is flagged hermitian.
pub const HERMITIAN_RTOL: f64 = 1e-12;

/// Dense square complex matrix over some basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    mat: DMatrix<Complex<T>>,
    hermitian: bool,
}

/// Scalar functions applied to the spectrum of a hermitian operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralFn<T: Real> {
    /// cos(θx)
    Cos(T),
    /// sin(θx)
    Sin(T),
    /// sin(θx)/x, equal to θ at x = 0
    Sinc(T),
    /// e^{-iθx}
    Propagator(T),
    /// √x with eigenvalues in [-tol, 0) clamped to zero
    Sqrt { tol: T },
}

impl<T: Real> SpectralFn<T> {
    pub fn eval(&self, x: T) -> Complex<T> {
        match *self {
            SpectralFn::Cos(th) => cr((th * x).cos()),
            SpectralFn::Sin(th) => cr((th * x).sin()),
            SpectralFn::Sinc(th) => cr(sinc(th, x)),
            SpectralFn::Propagator(th) => Complex::new((th * x).cos(), -(th * x).sin()),
            SpectralFn::Sqrt { tol } => {
                if x >= T::zero() {
                    cr(x.sqrt())
                } else if x >= -tol {
                    Complex::zero()
                } else {
                    cr(T::zero() / T::zero())
                }
            }
        }
    }
}

/// sin(θx)/x with its limit θ at x = 0.
pub fn sinc<T: Real>(theta: T, x: T) -> T {
    if x == T::zero() {
        theta
    } else {
        (theta * x).sin() / x
    }
}

/// Spectral decomposition of a hermitian operator, reusable for many functions.
#[derive(Clone, Debug)]
pub struct Spectrum<T: Real> {
    pub values: DVector<T>,
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn apply<F: Fn(T) -> Complex<T>>(&self, f: F) -> OperatorMatrix<T> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, lam) in self.values.iter().enumerate() {
            let fk = f(*lam);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        OperatorMatrix::new(product(&scaled, &self.vectors.adjoint()))
    }

    pub fn function(&self, f: SpectralFn<T>) -> OperatorMatrix<T> {
        self.apply(|x| f.eval(x))
    }
}

impl<T: Real> OperatorMatrix<T> {
    /// Wraps a square matrix; panics on non-square input.
    pub fn new(mat: DMatrix<Complex<T>>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator matrix must be square");
        let hermitian = relative_defect(&mat) <= lit::<T>(HERMITIAN_RTOL);
        Self { mat, hermitian }
    }

    pub fn try_new(mat: DMatrix<Complex<T>>, dim: usize) -> Result<Self, SpaceError> {
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(SpaceError::Dimension { expected: dim, got: mat.nrows().max(mat.ncols()) });
        }
        Ok(Self::new(mat))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim), hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let d: Vec<Complex<T>> = diag.iter().map(|x| cr(*x)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.mat[(row, col)]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// ‖H − H†‖_max
    pub fn hermiticity_defect(&self) -> T {
        abs_defect(&self.mat)
    }

    /// ‖H − H†‖_max / ‖H‖_max (zero for the zero matrix)
    pub fn relative_hermiticity_defect(&self) -> T {
        relative_defect(&self.mat)
    }

    pub fn max_norm(&self) -> T {
        max_abs(&self.mat)
    }

    pub fn frobenius_norm(&self) -> T {
        self.mat.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|z| z.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.mat.iter().filter(|z| !z.is_zero()).count()
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint(), hermitian: self.hermitian }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.mat.map(|z| z * c))
    }

    pub fn scale_re(&self, x: T) -> Self {
        Self { mat: self.mat.map(|z| z * x), hermitian: self.hermitian }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self::new(product(&self.mat, &other.mat) - product(&other.mat, &self.mat))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self::new(product(&self.mat, &other.mat) + product(&other.mat, &self.mat))
    }

    /// Conjugation U A U† .
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self::new(product(&product(&u.mat, &self.mat), &u.mat.adjoint()))
    }

    pub fn apply(&self, psi: &StateVector<T>) -> StateVector<T> {
        StateVector::new(matvec(&self.mat, psi.amplitudes()))
    }

    /// ⟨ψ|A|ψ⟩
    pub fn expectation(&self, psi: &StateVector<T>) -> Complex<T> {
        let v = matvec(&self.mat, psi.amplitudes());
        psi.amplitudes().dotc(&v)
    }

    /// Hermitian eigendecomposition; fails for non-hermitian input.
    pub fn spectrum(&self) -> Result<Spectrum<T>, SpaceError> {
        if !self.hermitian {
            return Err(SpaceError::NotHermitian(to_f64(self.relative_hermiticity_defect())));
        }
        let half: T = lit(0.5);
        let sym = (&self.mat + self.mat.adjoint()).map(|z| z * half);
        let eig = SymmetricEigen::new(sym);
        Ok(Spectrum { values: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>, SpaceError> {
        let mut v: Vec<T> = self.spectrum()?.values.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(v)
    }

    pub fn matrix_function(&self, f: SpectralFn<T>) -> Result<Self, SpaceError> {
        Ok(self.spectrum()?.function(f))
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        Self::new(kron(&self.mat, &other.mat))
    }

    /// Keeps only entries selected by the row/column predicate.
    pub fn restrict<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        let n = self.dim();
        let mut m = self.mat.clone();
        for c in 0..n {
            for r in 0..n {
                if !(keep(r) && keep(c)) {
                    m[(r, c)] = Complex::zero();
                }
            }
        }
        Self::new(m)
    }

    /// Triplet list of nonzero entries, row-major.
    pub fn to_sparse(&self) -> SparseRows<T> {
        SparseRows::from_dense(&self.mat)
    }
}

/// Row-compressed nonzeros for fast matrix-vector products.
#[derive(Clone, Debug)]
pub struct SparseRows<T: Real> {
    dim: usize,
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> SparseRows<T> {
    pub fn from_dense(m: &DMatrix<Complex<T>>) -> Self {
        let mut rows = vec![Vec::new(); m.nrows()];
        for c in 0..m.ncols() {
            for (r, z) in m.column(c).iter().enumerate() {
                if !z.is_zero() {
                    rows[r].push((c, *z));
                }
            }
        }
        Self { dim: m.nrows(), rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// out += c · M x
    pub fn mul_add(&self, x: &[Complex<T>], c: Complex<T>, out: &mut [Complex<T>]) {
        for (r, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let mut acc: Complex<T> = Complex::zero();
            for &(col, z) in row {
                acc += z * x[col];
            }
            out[r] += acc * c;
        }
    }
}

impl<T: Real> Add for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn add(self, rhs: Self) -> OperatorMatrix<T> {
        OperatorMatrix::new(&self.mat + &rhs.mat)
    }
}

impl<T: Real> Sub for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn sub(self, rhs: Self) -> OperatorMatrix<T> {
        OperatorMatrix::new(&self.mat - &rhs.mat)
    }
}

impl<T: Real> Mul for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn mul(self, rhs: Self) -> OperatorMatrix<T> {
        OperatorMatrix::new(product(&self.mat, &rhs.mat))
    }
}

impl<T: Real> Neg for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn neg(self) -> OperatorMatrix<T> {
        OperatorMatrix { mat: -&self.mat, hermitian: self.hermitian }
    }
}

impl<T: Real> AddAssign<&OperatorMatrix<T>> for OperatorMatrix<T> {
    fn add_assign(&mut self, rhs: &OperatorMatrix<T>) {
        self.mat += &rhs.mat;
        self.hermitian = relative_defect(&self.mat) <= lit::<T>(HERMITIAN_RTOL);
    }
}

impl<T: Real> SubAssign<&OperatorMatrix<T>> for OperatorMatrix<T> {
    fn sub_assign(&mut self, rhs: &OperatorMatrix<T>) {
        self.mat -= &rhs.mat;
        self.hermitian = relative_defect(&self.mat) <= lit::<T>(HERMITIAN_RTOL);
    }
}

pub(crate) fn max_abs<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

fn abs_defect<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let mut d = T::zero();
    for c in 0..n {
        for r in 0..=c {
            d = d.max(cabs(m[(r, c)] - m[(c, r)].conj()));
        }
    }
    d
}

fn relative_defect<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let scale = max_abs(m);
    if scale.is_zero() {
        T::zero()
    } else {
        abs_defect(m) / scale
    }
}

fn density<T: Real>(m: &DMatrix<Complex<T>>) -> (usize, usize) {
    (m.iter().filter(|z| !z.is_zero()).count(), m.len().max(1))
}

/// Matrix product that exploits sparsity of either factor.
pub fn product<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let (n, k, m) = (a.nrows(), a.ncols(), b.ncols());
    let (nnz_a, len_a) = density(a);
    let (nnz_b, len_b) = density(b);
    let a_sparse = nnz_a * 4 <= len_a;
    let b_sparse = nnz_b * 4 <= len_b;
    let mut out = DMatrix::<Complex<T>>::zeros(n, m);
    if a_sparse {
        let cols: Vec<Vec<(usize, Complex<T>)>> = (0..k)
            .map(|c| {
                a.column(c)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| !z.is_zero())
                    .map(|(i, z)| (i, *z))
                    .collect()
            })
            .collect();
        for j in 0..m {
            let mut ocol = out.column_mut(j);
            for (kk, bv) in b.column(j).iter().enumerate() {
                if bv.is_zero() {
                    continue;
                }
                for &(i, av) in &cols[kk] {
                    ocol[i] += av * *bv;
                }
            }
        }
        out
    } else if b_sparse {
        for j in 0..m {
            for kk in 0..k {
                let bv = b[(kk, j)];
                if bv.is_zero() {
                    continue;
                }
                let acol = a.column(kk);
                let mut ocol = out.column_mut(j);
                for i in 0..n {
                    ocol[i] += acol[i] * bv;
                }
            }
        }
        out
    } else {
        a * b
    }
}

pub fn matvec<T: Real>(a: &DMatrix<Complex<T>>, x: &DVector<Complex<T>>) -> DVector<Complex<T>> {
    let mut out = DVector::<Complex<T>>::zeros(a.nrows());
    for (c, xv) in x.iter().enumerate() {
        if xv.is_zero() {
            continue;
        }
        let col = a.column(c);
        for r in 0..a.nrows() {
            out[r] += col[r] * *xv;
        }
    }
    out
}

pub fn kron<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    let mut out = DMatrix::<Complex<T>>::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let av = a[(i, j)];
            if av.is_zero() {
                continue;
            }
            for q in 0..bc {
                for p in 0..br {
                    let bv = b[(p, q)];
                    if !bv.is_zero() {
                        out[(i * br + p, j * bc + q)] = av * bv;
                    }
                }
            }
        }
    }
    out
}

pub fn identity<T: Real>(n: usize) -> DMatrix<Complex<T>> {
    DMatrix::from_diagonal_element(n, n, Complex::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn cos_of_zero_is_identity() {
        let z = OperatorMatrix::<f64>::zeros(4);
        let f = z.matrix_function(SpectralFn::Cos(1.3)).unwrap();
        assert!((&f - &OperatorMatrix::identity(4)).max_norm() < 1e-15);
    }

    #[test]
    fn sine_kills_pi_over_theta() {
        let th = 0.7;
        let d = OperatorMatrix::from_real_diagonal(&[std::f64::consts::PI / th; 3]);
        let f = d.matrix_function(SpectralFn::Sin(th)).unwrap();
        assert!(f.max_norm() < 1e-14);
    }

    #[test]
    fn sinc_limit_at_zero() {
        assert_eq!(sinc(0.37_f64, 0.0), 0.37);
        let z = OperatorMatrix::<f64>::zeros(2);
        let f = z.matrix_function(SpectralFn::Sinc(2.5)).unwrap();
        assert_eq!(f.get(0, 0), c(2.5, 0.0));
        assert_eq!(f.get(1, 1), c(2.5, 0.0));
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        let op = OperatorMatrix::<f64>::new(m);
        assert!(!op.is_hermitian());
        assert!(matches!(op.matrix_function(SpectralFn::Cos(1.0)), Err(SpaceError::NotHermitian(_))));
    }

    #[test]
    fn f32_scalar_supported() {
        let d = OperatorMatrix::<f32>::from_real_diagonal(&[0.0, 1.0]);
        let f = d.matrix_function(SpectralFn::Cos(std::f32::consts::PI)).unwrap();
        assert!((f.get(1, 1).re + 1.0).abs() < 1e-6);
    }

    fn dense(n: usize, fill: &[(usize, usize, f64, f64)]) -> DMatrix<Complex<f64>> {
        let mut m = DMatrix::zeros(n, n);
        for &(r, cc, re, im) in fill {
            m[(r % n, cc % n)] = c(re, im);
        }
        m
    }

    proptest! {
        #[test]
        fn sparse_product_matches_dense(
            a in prop::collection::vec((0usize..9, 0usize..9, -2.0..2.0f64, -2.0..2.0f64), 0..40),
            b in prop::collection::vec((0usize..9, 0usize..9, -2.0..2.0f64, -2.0..2.0f64), 0..40),
        ) {
            let (ma, mb) = (dense(9, &a), dense(9, &b));
            let fast = product(&ma, &mb);
            let slow = &ma * &mb;
            prop_assert!(max_abs(&(fast - slow)) < 1e-12);
        }

        #[test]
        fn spectral_roundtrip(vals in prop::collection::vec(-3.0..3.0f64, 1..6), phase in 0.0..6.0f64) {
            let n = vals.len();
            let mut h = DMatrix::<Complex<f64>>::from_diagonal(&DVector::from_iterator(n, vals.iter().map(|x| c(*x, 0.0))));
            if n > 1 {
                h[(0, 1)] = c(phase.cos(), phase.sin());
                h[(1, 0)] = c(phase.cos(), -phase.sin());
            }
            let op = OperatorMatrix::new(h);
            let sp = op.spectrum().unwrap();
            let back = sp.apply(cr);
            prop_assert!((&back - &op).max_norm() < 1e-12);
            let u = sp.function(SpectralFn::Propagator(0.9));
            let uu = &u.adjoint() * &u;
            prop_assert!((&uu - &OperatorMatrix::identity(n)).max_norm() < 1e-12);
        }
    }
}
