//! Parallel parameter sweeps over one scenario.

use std::str::FromStr;

use qcr_spaces::scalar::to_f64;
use qcr_spaces::Real;
use rayon::prelude::*;

use crate::error::ScenarioError;
use crate::hom::prepare_hom;
use crate::inputs::{AtomicInput, OpticalInput, PairInput};
use crate::result::{PreparedRun, Summary};
use crate::setup::RamanSetup;
use crate::single::prepare_single;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    Theta,
    /// Photon number n_a (both modes for two atoms).
    PhotonA,
    /// Photon number n_b (both modes for two atoms).
    PhotonB,
    /// Δ⁽⁻⁾_{ja} of every ancilla.
    Detuning,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Theta => "theta",
            SweepParameter::PhotonA => "n_a",
            SweepParameter::PhotonB => "n_b",
            SweepParameter::Detuning => "detuning",
        }
    }
}

impl FromStr for SweepParameter {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theta" => Ok(SweepParameter::Theta),
            "n_a" => Ok(SweepParameter::PhotonA),
            "n_b" => Ok(SweepParameter::PhotonB),
            "detuning" => Ok(SweepParameter::Detuning),
            other => Err(ScenarioError::Grid(format!("unknown sweep parameter {other:?} (theta, n_a, n_b, detuning)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Scenario<T: Real> {
    Single { setup: RamanSetup<T>, atom: AtomicInput<T>, light: OpticalInput<T> },
    Hom { setup: RamanSetup<T>, pair: PairInput<T>, light: OpticalInput<T> },
}

impl<T: Real> Scenario<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Single { .. } => "single",
            Scenario::Hom { .. } => "hom",
        }
    }

    pub fn setup(&self) -> &RamanSetup<T> {
        match self {
            Scenario::Single { setup, .. } | Scenario::Hom { setup, .. } => setup,
        }
    }

    pub fn prepare(&self) -> Result<PreparedRun<T>, ScenarioError> {
        match self {
            Scenario::Single { setup, atom, light } => prepare_single(setup, atom, light),
            Scenario::Hom { setup, pair, light } => prepare_hom(setup, pair, light),
        }
    }

    /// Same scenario with a non-θ parameter set to `value`.
    pub fn with_parameter(&self, parameter: SweepParameter, value: T) -> Result<Self, ScenarioError> {
        let mut out = self.clone();
        match parameter {
            SweepParameter::Theta => {}
            SweepParameter::Detuning => {
                if !(value.is_finite() && value != T::zero()) {
                    return Err(ScenarioError::Grid(format!("detuning must be finite and nonzero, got {}", to_f64(value))));
                }
                match &mut out {
                    Scenario::Single { setup, .. } | Scenario::Hom { setup, .. } => *setup = setup.with_detuning(value),
                }
            }
            SweepParameter::PhotonA | SweepParameter::PhotonB => {
                let v = to_f64(value);
                if !(v >= 0.0 && v.fract() == 0.0 && v <= self.setup().n_max as f64) {
                    return Err(ScenarioError::Grid(format!("photon number must be an integer in 0..={}, got {v}", self.setup().n_max)));
                }
                let n = v as usize;
                match &mut out {
                    Scenario::Single { light, .. } => {
                        let (a, b) = light.dominant().unwrap_or((0, 0));
                        *light = if parameter == SweepParameter::PhotonA { OpticalInput::fock(n, b) } else { OpticalInput::fock(a, n) };
                    }
                    Scenario::Hom { light, .. } => *light = OpticalInput::fock(n, n),
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow<T: Real> {
    pub value: T,
    pub theta: T,
    pub summary: Summary<T>,
    pub truncation_error: T,
}

/// Thread pool capped by the SIM_THREADS environment variable.
pub fn thread_pool() -> Result<rayon::ThreadPool, ScenarioError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SIM_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| ScenarioError::Input(format!("SIM_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| ScenarioError::Input(e.to_string()))
}

/// One row per grid point, in grid order. For θ sweeps `theta` is ignored.
pub fn sweep<T: Real>(
    scenario: &Scenario<T>,
    theta: T,
    parameter: SweepParameter,
    grid: &[T],
) -> Result<Vec<SweepRow<T>>, ScenarioError> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(v) = grid.iter().find(|v| !v.is_finite()) {
        return Err(ScenarioError::Grid(format!("non-finite grid value {}", to_f64(*v))));
    }
    let pool = thread_pool()?;
    let row = |run: &PreparedRun<T>, value: T, th: T| -> Result<SweepRow<T>, ScenarioError> {
        let r = run.run(th)?;
        Ok(SweepRow { value, theta: th, summary: r.summary(), truncation_error: r.truncation_error })
    };
    pool.install(|| {
        if parameter == SweepParameter::Theta {
            let run = scenario.prepare()?;
            grid.par_iter().map(|&v| row(&run, v, v)).collect()
        } else {
            grid.par_iter().map(|&v| row(&scenario.with_parameter(parameter, v)?.prepare()?, v, theta)).collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_frequency;
    use crate::setup::Internal;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn single(n_a: usize, n_b: usize) -> Scenario<f64> {
        Scenario::Single { setup: RamanSetup::desk(), atom: AtomicInput::momentum(Internal::A, 0), light: OpticalInput::fock(n_a, n_b) }
    }

    #[test]
    fn theta_sweep_is_rabi_curve() {
        let s = single(2, 1);
        let w = s.setup().rabi_element().unwrap().norm() * 4f64.sqrt();
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05 / w).collect();
        let rows = sweep(&s, 0.0, SweepParameter::Theta, &grid).unwrap();
        assert_eq!(rows.len(), 100);
        for r in &rows {
            assert!((r.summary.p_b[1] - (r.theta * w).sin().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_grid_gives_empty_table() {
        assert!(sweep(&single(1, 0), 0.0, SweepParameter::Theta, &[]).unwrap().is_empty());
    }

    #[test]
    fn coincidence_minima_sit_at_analytic_zeros() {
        let setup = RamanSetup::<f64>::desk();
        let s = Scenario::Hom { pair: PairInput::ab(0, setup.kick()), light: OpticalInput::fock(2, 2), setup: setup.clone() };
        let w = hom_frequency(&setup, 2).unwrap();
        let n = 2001;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 * 3.2 / (n - 1) as f64 / w).collect();
        let rows = sweep(&s, 0.0, SweepParameter::Theta, &grid).unwrap();
        let c: Vec<f64> = rows.iter().map(|r| r.summary.coincidence).collect();
        let minima: Vec<f64> = (1..n - 1).filter(|&i| c[i] <= c[i - 1] && c[i] < c[i + 1]).map(|i| grid[i] * w).collect();
        let zeros = [FRAC_PI_4, FRAC_PI_4 + FRAC_PI_2];
        assert_eq!(minima.len(), zeros.len());
        let step = 3.2 / (n - 1) as f64;
        for (m, z) in minima.iter().zip(zeros) {
            assert!((m - z).abs() <= step / 2.0 + 1e-12, "{m} vs {z}");
        }
    }

    #[test]
    fn photon_and_detuning_sweeps() {
        let s = single(0, 0);
        let theta = 500.0;
        let rows = sweep(&s, theta, SweepParameter::PhotonA, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        let g = s.setup().rabi_element().unwrap().norm();
        for r in &rows {
            assert!((r.summary.p_b[1] - (theta * g * r.value.sqrt()).sin().powi(2)).abs() < 1e-10);
        }
        assert!(sweep(&s, theta, SweepParameter::PhotonB, &[1.5]).is_err());
        assert!(sweep(&s, theta, SweepParameter::PhotonB, &[9.0]).is_err());
        let s = single(1, 0);
        let rows = sweep(&s, theta, SweepParameter::Detuning, &[-5.0, -10.0, -20.0]).unwrap();
        for r in &rows {
            let w = 0.01 / r.value.abs();
            assert!((r.summary.p_b[1] - (theta * w).sin().powi(2)).abs() < 1e-10);
        }
        assert!(sweep(&s, theta, SweepParameter::Detuning, &[0.0]).is_err());
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in [SweepParameter::Theta, SweepParameter::PhotonA, SweepParameter::PhotonB, SweepParameter::Detuning] {
            assert_eq!(p.name().parse::<SweepParameter>().unwrap(), p);
        }
        assert!("omega".parse::<SweepParameter>().is_err());
    }
}
