//! Low-pass filtering of frequencies and of sampled observables.

use qcr_spaces::scalar::{lit, to_f64};
use qcr_spaces::{OperatorMatrix, Real, StateVector};

use crate::error::AveragingError;

/// Gaussian windows are truncated at this many standard deviations.
pub const GAUSSIAN_SUPPORT: f64 = 4.0;

/// Time-domain window realizing the low-pass filter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window<T: Real> {
    /// e^{-τ²/2σ²}; transfer function e^{-ω²σ²/2}
    Gaussian { sigma_t: T },
    /// sin(ω_c τ)/(πτ) with a Blackman taper on |τ| ≤ half_width
    Ideal { half_width: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterSpec<T: Real> {
    pub cutoff: T,
    pub window: Window<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Drop,
}

impl<T: Real> FilterSpec<T> {
    /// Gaussian window with σ_t = 10/cutoff.
    pub fn gaussian(cutoff: T) -> Result<Self, AveragingError> {
        Self::new(cutoff, Window::Gaussian { sigma_t: lit::<T>(10.0) / cutoff })
    }

    pub fn ideal(cutoff: T, half_width: T) -> Result<Self, AveragingError> {
        Self::new(cutoff, Window::Ideal { half_width })
    }

    pub fn new(cutoff: T, window: Window<T>) -> Result<Self, AveragingError> {
        let width_ok = match window {
            Window::Gaussian { sigma_t } => sigma_t > T::zero() && sigma_t.is_finite(),
            Window::Ideal { half_width } => half_width > T::zero() && half_width.is_finite(),
        };
        if !(cutoff > T::zero()) || !width_ok {
            return Err(AveragingError::Filter);
        }
        Ok(Self { cutoff, window })
    }

    /// Keeps every combination; only meaningful for building H_eff.
    pub fn pass_all() -> Self {
        Self { cutoff: T::one() / T::zero(), window: Window::Gaussian { sigma_t: T::one() } }
    }

    /// Half-length of the window support in time.
    pub fn half_support(&self) -> T {
        match self.window {
            Window::Gaussian { sigma_t } => sigma_t * lit(GAUSSIAN_SUPPORT),
            Window::Ideal { half_width } => half_width,
        }
    }

    fn kernel(&self, tau: T) -> T {
        match self.window {
            Window::Gaussian { sigma_t } => (-(tau * tau) / (lit::<T>(2.0) * sigma_t * sigma_t)).exp(),
            Window::Ideal { half_width } => {
                let pi = T::pi();
                let x = tau / half_width;
                // Blackman taper centred on τ = 0
                let taper = lit::<T>(0.42)
                    + lit::<T>(0.5) * (pi * x).cos()
                    + lit::<T>(0.08) * (lit::<T>(2.0) * pi * x).cos();
                let core = if tau.is_zero() { self.cutoff / pi } else { (self.cutoff * tau).sin() / (pi * tau) };
                core * taper
            }
        }
    }
}

/// |combo| < cutoff keeps the term.
pub fn classify_frequency<T: Real>(combo: T, filter: &FilterSpec<T>) -> Verdict {
    if combo.abs() < filter.cutoff {
        Verdict::Keep
    } else {
        Verdict::Drop
    }
}

/// Convolves a uniformly sampled signal with the filter window; the window is
/// truncated at the trace edges and renormalized.
pub fn filter_series<T: Real>(values: &[T], t_grid: &[T], filter: &FilterSpec<T>) -> Result<Vec<T>, AveragingError> {
    if values.len() != t_grid.len() {
        return Err(AveragingError::Dimension { expected: t_grid.len(), got: values.len() });
    }
    if values.is_empty() {
        return Ok(Vec::new());
    }
    check_uniform(t_grid)?;
    let span = t_grid[t_grid.len() - 1] - t_grid[0];
    let half = filter.half_support();
    if span < half + half {
        return Err(AveragingError::InsufficientData { span: to_f64(span), needed: to_f64(half + half) });
    }
    let dt = if t_grid.len() > 1 { t_grid[1] - t_grid[0] } else { T::one() };
    let reach = to_f64(half / dt).floor() as usize;
    let weights: Vec<T> = (0..=reach).map(|k| filter.kernel(dt * lit(k as f64))).collect();
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(n - 1);
        let (mut num, mut den) = (T::zero(), T::zero());
        for (j, v) in values.iter().enumerate().take(hi + 1).skip(lo) {
            let w = weights[i.abs_diff(j)];
            num += w * *v;
            den += w;
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Filtered ⟨ψ(t)|O|ψ(t)⟩ (real part) over a trajectory.
pub fn averaged_observable<T: Real>(
    trace: &[StateVector<T>],
    t_grid: &[T],
    filter: &FilterSpec<T>,
    observable: &OperatorMatrix<T>,
) -> Result<Vec<T>, AveragingError> {
    let raw: Vec<T> = trace.iter().map(|psi| observable.expectation(psi).re).collect();
    filter_series(&raw, t_grid, filter)
}

fn check_uniform<T: Real>(t: &[T]) -> Result<(), AveragingError> {
    if t.len() < 2 {
        return Ok(());
    }
    let dt = t[1] - t[0];
    if !(dt > T::zero()) {
        return Err(AveragingError::TimeGrid);
    }
    let mut worst = T::zero();
    for w in t.windows(2) {
        if !(w[1] > w[0]) {
            return Err(AveragingError::TimeGrid);
        }
        worst = worst.max(((w[1] - w[0]) - dt).abs() / dt);
    }
    if worst > lit(1e-9) {
        return Err(AveragingError::NonUniform(to_f64(worst)));
    }
    Ok(())
}
