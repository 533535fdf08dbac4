//! Exact-evolution oracle: integrates the full dipole Hamiltonian, low-pass
//! filters observables, and compares them with effective or pulse dynamics.

use std::collections::BTreeSet;

use num_complex::Complex;
use qcr_averaging::{averaged_observable, exact_evolve_with, EffectiveTerms, EvolveOptions, FilterSpec};
use qcr_lambda::{to_interaction_picture, LambdaModel};
use qcr_scenarios::{Internal, PreparedRun, RamanSetup};
use qcr_spaces::{AtomicModeSet, CompositeBasis, LevelModes, OperatorMatrix, SpatialBackend, StateVector};

use crate::error::CliError;

/// Uniform grid 0, dt, …, covering t_end.
pub fn time_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt).ceil() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

/// Observable values sampled on a time grid, one series per observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub times: Vec<f64>,
    pub series: Vec<Vec<f64>>,
}

impl Trace {
    /// Linear interpolation of series k at time t.
    pub fn at(&self, k: usize, t: f64) -> f64 {
        let ts = &self.times;
        let s = &self.series[k];
        let i = ts.partition_point(|x| *x <= t);
        if i == 0 {
            return s[0];
        }
        if i >= ts.len() {
            return s[ts.len() - 1];
        }
        let w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
        s[i - 1] * (1.0 - w) + s[i] * w
    }
}

/// Filtered ⟨O_k⟩(t) under the exact interaction-picture dynamics.
pub fn exact_filtered(
    model: &LambdaModel<f64>,
    psi0: &StateVector<f64>,
    observables: &[OperatorMatrix<f64>],
    filter: &FilterSpec<f64>,
    times: &[f64],
) -> Result<Trace, CliError> {
    let h = to_interaction_picture(model)?;
    let opts = EvolveOptions { rtol: 1e-10, atol: 1e-12, ..EvolveOptions::default() };
    let traj = exact_evolve_with(&h, psi0, times, opts)?;
    let series = observables
        .iter()
        .map(|o| averaged_observable(&traj.states, times, filter, o))
        .collect::<Result<_, _>>()?;
    Ok(Trace { times: times.to_vec(), series })
}

/// ⟨O_k⟩(t) under exp(−iH_eff t), H_eff the engine output for the filter.
pub fn effective_trace(
    model: &LambdaModel<f64>,
    psi0: &StateVector<f64>,
    observables: &[OperatorMatrix<f64>],
    filter: &FilterSpec<f64>,
    times: &[f64],
) -> Result<Trace, CliError> {
    let terms = EffectiveTerms::new(&to_interaction_picture(model)?, filter)?;
    if terms.pairs().any(|p| p.residual != 0.0) {
        return Err(CliError::Oracle("effective Hamiltonian keeps off-resonant pairs and is time dependent".into()));
    }
    let spec = terms.at(0.0).spectrum()?;
    let c0 = spec.vectors.adjoint() * psi0.amplitudes();
    let mut series = vec![Vec::with_capacity(times.len()); observables.len()];
    for &t in times {
        let mut c = c0.clone();
        for (z, lam) in c.iter_mut().zip(spec.values.iter()) {
            *z *= Complex::from_polar(1.0, -lam * t);
        }
        let psi = StateVector::new(&spec.vectors * c);
        for (k, o) in observables.iter().enumerate() {
            series[k].push(o.expectation(&psi).re);
        }
    }
    Ok(Trace { times: times.to_vec(), series })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub exact: Trace,
    pub effective: Trace,
    /// max |exact − effective| away from the filter edges
    pub max_delta: f64,
    pub compared: usize,
}

/// Filtered exact vs effective populations on [0, t_end], edges within one
/// filter half-support excluded.
pub fn compare_effective(
    model: &LambdaModel<f64>,
    psi0: &StateVector<f64>,
    observables: &[OperatorMatrix<f64>],
    filter: &FilterSpec<f64>,
    t_end: f64,
    dt: f64,
) -> Result<Comparison, CliError> {
    let half = filter.half_support();
    let times = time_grid(t_end + half, dt);
    let exact = exact_filtered(model, psi0, observables, filter, &times)?;
    let effective = effective_trace(model, psi0, observables, filter, &times)?;
    let (mut max_delta, mut compared) = (0.0f64, 0);
    for (i, &t) in times.iter().enumerate() {
        if t < half || t > t_end {
            continue;
        }
        compared += 1;
        for k in 0..observables.len() {
            max_delta = max_delta.max((exact.series[k][i] - effective.series[k][i]).abs());
        }
    }
    Ok(Comparison { exact, effective, max_delta, compared })
}

/// Diagonal projector onto basis states accepted by `keep`.
pub fn projector(model: &LambdaModel<f64>, keep: impl Fn(usize) -> bool) -> OperatorMatrix<f64> {
    let d: Vec<f64> = (0..model.dim()).map(|i| if keep(i) { 1.0 } else { 0.0 }).collect();
    OperatorMatrix::from_real_diagonal(&d)
}

/// Number of atoms in the relevant level `state` for basis index i.
pub fn count(model: &LambdaModel<f64>, i: usize, state: Internal) -> usize {
    let b = model.basis();
    b.level_occupation(i / b.photon_dim(), state.level())
}

/// Full dipole model for a prepared scenario: the same a/b modes plus the
/// ancilla momenta reached by one photon absorption or emission.
pub fn full_model(setup: &RamanSetup<f64>, run: &PreparedRun<f64>) -> Result<(LambdaModel<f64>, StateVector<f64>), CliError> {
    let basis = run.model.basis();
    let modes = basis.modes();
    let momenta = |level: usize| -> Vec<i64> { (0..modes.n_modes(level)).filter_map(|m| modes.momentum(level, m)).collect() };
    let (a, b) = (momenta(Internal::A.level()), momenta(Internal::B.level()));
    let [ka, kb] = setup.wavenumbers;
    let mut anc: BTreeSet<i64> = a.iter().map(|p| p + ka).chain(b.iter().map(|p| p + kb)).collect();
    if !setup.rwa {
        anc.extend(a.iter().map(|p| p - ka).chain(b.iter().map(|p| p - kb)));
    }
    let mut levels = vec![("a".to_string(), LevelModes::Momenta(a)), ("b".to_string(), LevelModes::Momenta(b))];
    for j in 0..setup.ancillas.len() {
        levels.push(((j + 3).to_string(), LevelModes::Momenta(anc.iter().copied().collect())));
    }
    let max_atoms = *basis.sectors().iter().max().unwrap_or(&1);
    let full_modes = AtomicModeSet::new(SpatialBackend::ladder(setup.unit), levels, max_atoms)?;
    let full_basis = CompositeBasis::with_sectors(setup.n_max, setup.n_max, full_modes, basis.sectors())?;
    let model = LambdaModel::new(setup.levels()?, setup.couplings()?, full_basis, setup.hc_sign)?;
    let mut amps = vec![Complex::new(0.0, 0.0); model.dim()];
    let prefix = basis.modes().total_modes();
    for i in 0..run.input.dim() {
        let z = run.input.amplitude(i);
        if z.norm_sqr() == 0.0 {
            continue;
        }
        let l = basis.label(i);
        let mut occ = model.basis().empty_occupation();
        occ[..prefix].copy_from_slice(l.occupation);
        let j = model.basis().find(&occ, l.n_a, l.n_b).ok_or_else(|| CliError::Oracle("input state missing from the full basis".into()))?;
        amps[j] = z;
    }
    Ok((model, StateVector::from_vec(amps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_interpolation() {
        let g = time_grid(1.0, 0.25);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let tr = Trace { times: g, series: vec![vec![0.0, 1.0, 2.0, 3.0, 4.0]] };
        assert_eq!(tr.at(0, 0.375), 1.5);
        assert_eq!(tr.at(0, -1.0), 0.0);
        assert_eq!(tr.at(0, 9.0), 4.0);
    }
}
