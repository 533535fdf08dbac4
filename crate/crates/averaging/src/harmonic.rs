use std::fmt;

use num_complex::Complex;
use qcr_spaces::scalar::{expi, lit};
use qcr_spaces::{OperatorMatrix, Real};

use crate::error::AveragingError;

/// Sign in front of the hermitian-conjugate terms.
///
/// `Hermitian` (+1) gives H(t) = H0 + Σ (h e^{-iωt} + h† e^{iωt}), the
/// physical choice; `Literal` (−1) reproduces "− h.c.".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HcSign {
    #[default]
    Hermitian,
    Literal,
}

impl HcSign {
    pub fn value<T: Real>(self) -> T {
        match self {
            HcSign::Hermitian => T::one(),
            HcSign::Literal => -T::one(),
        }
    }
}

impl fmt::Display for HcSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HcSign::Hermitian => "+h.c.",
            HcSign::Literal => "-h.c.",
        })
    }
}

/// Which frequency domain a term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Slow,
    Fast,
}

#[derive(Clone, Debug)]
pub struct OscillatingTerm<T: Real> {
    pub op: OperatorMatrix<T>,
    pub frequency: T,
    pub label: String,
}

impl<T: Real> OscillatingTerm<T> {
    pub fn new(op: OperatorMatrix<T>, frequency: T, label: impl Into<String>) -> Self {
        Self { op, frequency, label: label.into() }
    }
}

/// H(t) = H0 + Σ_n (h_n e^{-iω_n t} ± h.c.) + Σ_n (g_n e^{-iΩ_n t} ± h.c.)
#[derive(Clone, Debug)]
pub struct HarmonicHamiltonian<T: Real> {
    pub h0: OperatorMatrix<T>,
    pub slow: Vec<OscillatingTerm<T>>,
    pub fast: Vec<OscillatingTerm<T>>,
    pub hc_sign: HcSign,
}

impl<T: Real> HarmonicHamiltonian<T> {
    pub fn new(
        h0: OperatorMatrix<T>,
        slow: Vec<OscillatingTerm<T>>,
        fast: Vec<OscillatingTerm<T>>,
        hc_sign: HcSign,
    ) -> Result<Self, AveragingError> {
        let dim = h0.dim();
        for term in slow.iter().chain(&fast) {
            if term.op.dim() != dim {
                return Err(AveragingError::Dimension { expected: dim, got: term.op.dim() });
            }
            if !term.frequency.is_finite() || term.frequency.is_zero() {
                return Err(AveragingError::SingularDetuning(term.label.clone()));
            }
        }
        Ok(Self { h0, slow, fast, hc_sign })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn terms(&self, domain: Domain) -> &[OscillatingTerm<T>] {
        match domain {
            Domain::Slow => &self.slow,
            Domain::Fast => &self.fast,
        }
    }

    /// Largest |frequency| across both domains.
    pub fn max_frequency(&self) -> T {
        self.slow
            .iter()
            .chain(&self.fast)
            .fold(T::zero(), |acc, t| acc.max(t.frequency.abs()))
    }

    /// Full time-dependent Hamiltonian as a dense matrix.
    pub fn at(&self, t: T) -> OperatorMatrix<T> {
        let s: T = self.hc_sign.value();
        let mut m = self.h0.matrix().clone();
        for term in self.slow.iter().chain(&self.fast) {
            let ph: Complex<T> = expi(-term.frequency * t);
            let op = term.op.matrix();
            m += op.map(|z| z * ph) + op.adjoint().map(|z| z * ph.conj() * s);
        }
        OperatorMatrix::new(m)
    }

    /// max_n ‖h_n‖_max / min_n |ω_n|, the small parameter of the expansion.
    pub fn coupling_ratio(&self) -> T {
        let mut num = T::zero();
        let mut den = T::max_value().unwrap_or_else(|| lit(f64::MAX));
        for term in self.slow.iter().chain(&self.fast) {
            num = num.max(term.op.max_norm());
            den = den.min(term.frequency.abs());
        }
        num / den
    }
}
