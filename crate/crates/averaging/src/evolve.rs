//! Exact-evolution oracle: adaptive Dormand–Prince 5(4) for i dψ/dt = H(t)ψ.

use nalgebra::DVector;
use num_complex::Complex;
use num_traits::Zero;
use qcr_spaces::scalar::{expi, lit, to_f64};
use qcr_spaces::{Real, SparseRows, StateVector};

use crate::error::AveragingError;
use crate::harmonic::HarmonicHamiltonian;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, max_steps: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveDiagnostics {
    pub accepted: usize,
    pub rejected: usize,
    pub max_norm_drift: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub states: Vec<StateVector<T>>,
    pub diagnostics: EvolveDiagnostics,
}

struct Rhs<T: Real> {
    h0: SparseRows<T>,
    terms: Vec<(SparseRows<T>, SparseRows<T>, T)>,
    sign: T,
}

impl<T: Real> Rhs<T> {
    fn new(h: &HarmonicHamiltonian<T>) -> Self {
        let terms = h
            .slow
            .iter()
            .chain(&h.fast)
            .map(|t| (t.op.to_sparse(), t.op.adjoint().to_sparse(), t.frequency))
            .collect();
        Self { h0: h.h0.to_sparse(), terms, sign: h.hc_sign.value() }
    }

    /// −i H(t) y
    fn eval(&self, t: T, y: &[Complex<T>], out: &mut [Complex<T>]) {
        for o in out.iter_mut() {
            *o = Complex::zero();
        }
        let minus_i = Complex::new(T::zero(), -T::one());
        self.h0.mul_add(y, minus_i, out);
        for (op, adj, w) in &self.terms {
            let ph = expi(-*w * t);
            op.mul_add(y, minus_i * ph, out);
            adj.mul_add(y, minus_i * ph.conj() * self.sign, out);
        }
    }
}

// Dormand–Prince tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates from t_grid[0] (where ψ = ψ0) and returns the state at every grid time.
pub fn exact_evolve<T: Real>(
    h: &HarmonicHamiltonian<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
) -> Result<Trajectory<T>, AveragingError> {
    exact_evolve_with(h, psi0, t_grid, EvolveOptions::default())
}

pub fn exact_evolve_with<T: Real>(
    h: &HarmonicHamiltonian<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
    opts: EvolveOptions,
) -> Result<Trajectory<T>, AveragingError> {
    if psi0.dim() != h.dim() {
        return Err(AveragingError::Dimension { expected: h.dim(), got: psi0.dim() });
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(AveragingError::TimeGrid);
    }
    let mut diag = EvolveDiagnostics { accepted: 0, rejected: 0, max_norm_drift: 0.0 };
    let mut states = Vec::with_capacity(t_grid.len());
    if t_grid.is_empty() {
        return Ok(Trajectory { states, diagnostics: diag });
    }
    let rhs = Rhs::new(h);
    let n = h.dim();
    let norm0 = to_f64(psi0.norm());
    let mut y: Vec<Complex<T>> = psi0.amplitudes().iter().copied().collect();
    let mut t = t_grid[0];
    states.push(psi0.clone());

    let (rtol, atol): (T, T) = (lit(opts.rtol), lit(opts.atol));
    let scale = h.max_frequency().max(h.h0.max_norm()).max(lit(1e-12));
    let mut step = lit::<T>(0.01) / scale;
    let mut k: Vec<Vec<Complex<T>>> = vec![vec![Complex::zero(); n]; 7];
    let mut tmp = vec![Complex::zero(); n];
    let mut y5 = vec![Complex::zero(); n];
    let mut last_err = 0.0;
    rhs.eval(t, &y, &mut k[0]);

    for &target in &t_grid[1..] {
        while t < target {
            if diag.accepted + diag.rejected >= opts.max_steps {
                return Err(AveragingError::Stiffness { t: to_f64(t), h: to_f64(step), steps: diag.accepted, err: last_err });
            }
            let remaining = target - t;
            let hit = step >= remaining;
            let dt = if hit { remaining } else { step };
            if dt < lit::<T>(1e-14) * t.abs().max(T::one()) && !hit {
                return Err(AveragingError::Stiffness { t: to_f64(t), h: to_f64(dt), steps: diag.accepted, err: last_err });
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = A[s][j];
                        if a != 0.0 {
                            acc += kj[i] * (dt * lit(a));
                        }
                    }
                    tmp[i] = acc;
                }
                let (_, tail) = k.split_at_mut(s);
                rhs.eval(t + dt * lit(C[s]), &tmp, &mut tail[0]);
            }
            let mut err = T::zero();
            for i in 0..n {
                let mut hi = y[i];
                let mut lo_diff: Complex<T> = Complex::zero();
                for s in 0..7 {
                    if B5[s] != 0.0 {
                        hi += k[s][i] * (dt * lit(B5[s]));
                    }
                    let d = B5[s] - B4[s];
                    if d != 0.0 {
                        lo_diff += k[s][i] * (dt * lit(d));
                    }
                }
                y5[i] = hi;
                let sc = atol + rtol * qcr_spaces::scalar::cabs(y[i]).max(qcr_spaces::scalar::cabs(hi));
                err = err.max(qcr_spaces::scalar::cabs(lo_diff) / sc);
            }
            last_err = to_f64(err);
            if err <= T::one() {
                t = if hit { target } else { t + dt };
                std::mem::swap(&mut y, &mut y5);
                // FSAL: the last stage is f(t + dt, y_new)
                k.swap(0, 6);
                diag.accepted += 1;
            } else {
                diag.rejected += 1;
            }
            let factor = if err.is_zero() {
                lit(5.0)
            } else {
                (lit::<T>(0.9) * err.powf(lit(-0.2))).max(lit(0.2)).min(lit(5.0))
            };
            if !hit || err > T::one() {
                step = dt * factor;
            } else {
                step = step.max(dt * factor);
            }
        }
        let psi = StateVector::new(DVector::from_vec(y.clone()));
        let drift = (to_f64(psi.norm()) - norm0).abs();
        diag.max_norm_drift = diag.max_norm_drift.max(drift);
        states.push(psi);
    }
    Ok(Trajectory { states, diagnostics: diag })
}
