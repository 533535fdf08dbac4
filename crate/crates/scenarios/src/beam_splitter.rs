//! Closed-form beam-splitter operator of the plane-wave RWA pulse.

use num_complex::Complex;
use qcr_lambda::LambdaModel;
use qcr_spaces::scalar::{cr, lit};
use qcr_spaces::{OperatorMatrix, Real};

use crate::error::ScenarioError;
use crate::setup::{Internal, RamanSetup};
use crate::single::{phase_value, state_index};

/// S·diag(v) restricted to one light sector |n_a, n_b⟩, with the b component
/// at momentum p + K and the a component at p. Rows and columns are ordered (b, a).
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBlock<T: Real> {
    pub momentum: i64,
    pub photons: [usize; 2],
    /// Off-diagonal entries land in the neighbouring sectors listed in `targets`.
    pub block: [[Complex<T>; 2]; 2],
    /// v = (e^{−iϑ𝒞_b}, e^{−iϑ𝒞_a})
    pub phases: [Complex<T>; 2],
    /// [b ← a: (p + K, (n_a−1, n_b+1)), a ← b: (p, (n_a+1, n_b−1))]
    pub targets: [Option<(i64, [usize; 2])>; 2],
}

impl<T: Real> SectorBlock<T> {
    /// Entry (row, col) of S·diag(v).
    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.block[row][col] * self.phases[col]
    }
}

#[derive(Clone, Debug)]
pub struct BeamSplitter<T: Real> {
    setup: RamanSetup<T>,
    model: LambdaModel<T>,
    theta: T,
    rabi: Complex<T>,
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(setup: &RamanSetup<T>, theta: T) -> Result<Self, ScenarioError> {
        setup.validate()?;
        if !setup.rwa {
            return Err(ScenarioError::Mismatch("the beam-splitter operator needs the RWA".into()));
        }
        let model = setup.model(vec![0], vec![setup.kick()], 1)?;
        Ok(Self { setup: setup.clone(), model, theta, rabi: setup.rabi_element()? })
    }

    /// Block on the sector with the a component at momentum p.
    pub fn sector(&self, momentum: i64, [n_a, n_b]: [usize; 2]) -> SectorBlock<T> {
        let (s, th) = (&self.setup, self.theta);
        let k = s.kick();
        let mag = self.rabi.norm_sqr().sqrt();
        let phase = if mag > T::zero() { self.rabi / cr(mag) } else { Complex::new(T::one(), T::zero()) };
        let rate = |m: usize, allowed: bool| if allowed { mag * lit::<T>(m as f64).sqrt() } else { T::zero() };
        let down = rate(n_a * (n_b + 1), n_b < s.n_max);
        let up = rate((n_a + 1) * n_b, n_a < s.n_max);
        let minus_i = Complex::new(T::zero(), -T::one());
        let block = [
            [cr((th * up).cos()), minus_i * phase * (th * down).sin()],
            [minus_i * phase.conj() * (th * up).sin(), cr((th * down).cos())],
        ];
        let v = |st: Internal, p: i64| {
            let c = phase_value(s, &self.model, st, p, [n_a, n_b]) * th;
            Complex::new(c.im.exp() * c.re.cos(), -c.im.exp() * c.re.sin())
        };
        let targets = [
            (down > T::zero()).then(|| (momentum + k, [n_a - 1, n_b + 1])),
            (up > T::zero()).then(|| (momentum, [n_a + 1, n_b - 1])),
        ];
        SectorBlock { momentum, photons: [n_a, n_b], block, phases: [v(Internal::B, momentum + k), v(Internal::A, momentum)], targets }
    }

    /// Full operator on a one-atom model whose b modes sit at the a modes shifted by K.
    pub fn operator(&self, model: &LambdaModel<T>) -> Result<OperatorMatrix<T>, ScenarioError> {
        let basis = model.basis();
        let modes = basis.modes();
        if basis.sectors() != [1] {
            return Err(ScenarioError::Mismatch("beam-splitter operator acts on one-atom models".into()));
        }
        let k = self.setup.kick();
        let mut m = nalgebra::DMatrix::zeros(basis.dim(), basis.dim());
        for col in 0..basis.dim() {
            let l = basis.label(col);
            let flat = l.occupation.iter().position(|n| *n == 1).expect("one atom");
            let (level, mode) = modes.level_of(flat);
            let p = modes.momentum(level, mode).ok_or_else(|| ScenarioError::Mismatch("ladder modes required".into()))?;
            let (state, c, a_momentum) = if level == Internal::A.level() { (Internal::A, 1, p) } else { (Internal::B, 0, p - k) };
            let blk = self.sector(a_momentum, [l.n_a, l.n_b]);
            m[(col, col)] = blk.entry(c, c);
            if let Some((q, [x, y])) = blk.targets[1 - c] {
                let other = if state == Internal::A { (Internal::B, q) } else { (Internal::A, q) };
                m[(state_index(model, &[other], x, y)?, col)] = blk.entry(1 - c, c);
            }
        }
        Ok(OperatorMatrix::new(m))
    }
}
