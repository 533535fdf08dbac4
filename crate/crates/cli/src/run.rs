//! Executes configured scenarios and collects result rows and the run report.

use num_complex::Complex;
use qcr_pulse::ReducedHamiltonian;
use qcr_scenarios::{hom_frequency, thread_pool, AtomicInput, Internal, PreparedRun, Scenario, SweepParameter};
use qcr_spaces::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ScenarioKind, SimulationConfig};
use crate::error::CliError;
use crate::oracle::{count, exact_filtered, full_model, projector, time_grid};
use crate::sweep_spec::{Axis, SweepSpec};

/// One output line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub scenario: String,
    pub parameter: String,
    pub value: f64,
    pub theta: f64,
    pub angle: f64,
    pub p_b0: f64,
    pub p_b1: f64,
    pub p_b2: f64,
    pub coincidence: f64,
    pub norm: f64,
    pub closed_form: Option<f64>,
    pub closed_form_delta: Option<f64>,
    pub oracle_delta: Option<f64>,
    pub truncation_error: f64,
}

impl Row {
    pub const HEADER: [&'static str; 14] = [
        "scenario",
        "parameter",
        "value",
        "theta",
        "angle",
        "p_b0",
        "p_b1",
        "p_b2",
        "coincidence",
        "norm",
        "closed_form",
        "closed_form_delta",
        "oracle_delta",
        "truncation_error",
    ];

    /// Observable the closed form and the oracle refer to.
    fn observable(&self, kind: ScenarioKind) -> f64 {
        match kind {
            ScenarioKind::Single => self.p_b1,
            ScenarioKind::Hom => self.coincidence,
        }
    }

    pub fn record(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:.16e}");
        let o = |x: Option<f64>| x.map(f).unwrap_or_default();
        vec![
            self.scenario.clone(),
            self.parameter.clone(),
            f(self.value),
            f(self.theta),
            f(self.angle),
            f(self.p_b0),
            f(self.p_b1),
            f(self.p_b2),
            f(self.coincidence),
            f(self.norm),
            o(self.closed_form),
            o(self.closed_form_delta),
            o(self.oracle_delta),
            f(self.truncation_error),
        ]
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Run only the named scenario.
    pub scenario: Option<String>,
    /// Overrides the config sweep.
    pub sweep: Option<SweepSpec>,
    pub oracle: bool,
    /// Overrides the config seed.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DroppedProduct {
    pub label: String,
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseEntry {
    pub kind: String,
    pub state: String,
    pub momentum: i64,
    pub photons: [usize; 2],
    pub value: [f64; 2],
}

/// Per-scenario provenance written to report.json.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub kind: ScenarioKind,
    pub dim: usize,
    pub rabi_element: [f64; 2],
    pub reference_frequency: f64,
    pub theta: f64,
    pub truncation_error: f64,
    pub dropped_v2: Vec<DroppedProduct>,
    pub phases: Vec<PhaseEntry>,
    /// max |‖Uψ‖ − 1| over seeded random probe states
    pub probe_norm_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub parameter: String,
    pub oracle: bool,
    pub config: SimulationConfig,
    pub scenarios: Vec<ScenarioReport>,
    pub breaches: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    pub report: Report,
}

fn atom_state(atom: &AtomicInput<f64>) -> Internal {
    match atom {
        AtomicInput::Momentum { state, .. } | AtomicInput::Gaussian { state, .. } => *state,
    }
}

/// Rabi frequency of the dominant light component: what `angle` is measured in.
pub fn reference_frequency(s: &Scenario<f64>) -> Result<f64, CliError> {
    let setup = s.setup();
    let x = setup.rabi_element()?.norm();
    Ok(match s {
        Scenario::Single { atom, light, .. } => {
            let (na, nb) = light.dominant().unwrap_or((0, 0));
            match atom_state(atom) {
                Internal::A => x * ((na * (nb + 1)) as f64).sqrt(),
                Internal::B => x * (((na + 1) * nb) as f64).sqrt(),
            }
        }
        Scenario::Hom { light, .. } => hom_frequency(setup, light.dominant().map(|d| d.0).unwrap_or(0))?,
    })
}

/// Analytic RWA prediction of P(atom in b) or the coincidence probability.
pub fn closed_form(s: &Scenario<f64>, theta: f64) -> Result<Option<f64>, CliError> {
    let setup = s.setup();
    if !setup.rwa {
        return Ok(None);
    }
    let x = setup.rabi_element()?.norm();
    let n_max = setup.n_max;
    Ok(match s {
        Scenario::Single { atom, light, .. } => {
            let state = atom_state(atom);
            let mut p = 0.0;
            for ((na, nb), w) in light.normalized()?.entries() {
                let rate = match state {
                    Internal::A if nb < n_max => x * ((na * (nb + 1)) as f64).sqrt(),
                    Internal::B if na < n_max => x * (((na + 1) * nb) as f64).sqrt(),
                    _ => 0.0,
                };
                let s2 = (theta * rate).sin().powi(2);
                p += w.norm_sqr() * if state == Internal::A { s2 } else { 1.0 - s2 };
            }
            Some(p)
        }
        Scenario::Hom { pair, light, .. } => {
            let k = setup.kick();
            let paired = pair.table.iter().all(|(u, v, _)| {
                let (a, b) = if u.0 == Internal::A { (u, v) } else { (v, u) };
                a.0 == Internal::A && b.0 == Internal::B && b.1 - a.1 == k
            });
            let light = light.normalized()?;
            if !paired || light.entries().any(|((n, _), _)| n + 1 > n_max) {
                return Ok(None);
            }
            let mut c = 0.0;
            for ((n, _), w) in light.entries() {
                c += w.norm_sqr() * (2.0 * theta * hom_frequency(setup, n)?).cos().powi(2);
            }
            Some(c)
        }
    })
}

fn observable_op(model: &qcr_lambda::LambdaModel<f64>, kind: ScenarioKind) -> qcr_spaces::OperatorMatrix<f64> {
    match kind {
        ScenarioKind::Single => projector(model, |i| count(model, i, Internal::B) == 1),
        ScenarioKind::Hom => projector(model, |i| count(model, i, Internal::A) == 1 && count(model, i, Internal::B) == 1),
    }
}

/// Filtered exact observable at each θ, or None inside the filter's edge zone.
fn oracle_values(cfg: &SimulationConfig, scenario: &Scenario<f64>, run: &PreparedRun<f64>, kind: ScenarioKind, thetas: &[f64]) -> Result<Vec<Option<f64>>, CliError> {
    let filter = cfg.filter_spec()?;
    let half = filter.half_support();
    let t_max = thetas.iter().copied().fold(0.0, f64::max);
    if t_max < half {
        return Ok(vec![None; thetas.len()]);
    }
    let (model, psi0) = full_model(scenario.setup(), run)?;
    let obs = observable_op(&model, kind);
    let times = time_grid(t_max + half, cfg.filter.dt);
    let trace = exact_filtered(&model, &psi0, &[obs], &filter, &times)?;
    Ok(thetas.iter().map(|&t| (t >= half).then(|| trace.at(0, t))).collect())
}

fn probe_defect(run: &PreparedRun<f64>, theta: f64, probes: usize, rng: &mut ChaCha8Rng) -> Result<f64, CliError> {
    let dim = run.input.dim();
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let v: Vec<Complex<f64>> = (0..dim).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let psi = StateVector::from_vec(v).normalize()?;
        let out = run.propagator().apply(theta, &psi).map_err(|e| CliError::Oracle(e.to_string()))?;
        worst = worst.max((out.norm() - 1.0).abs());
    }
    Ok(worst)
}

fn theta_for(cfg: &SimulationConfig, omega_ref: f64, at: &str) -> Result<f64, CliError> {
    match (cfg.pulse.theta, cfg.pulse.angle) {
        (Some(t), _) => Ok(t),
        (None, Some(a)) => {
            if omega_ref > 0.0 {
                Ok(a / omega_ref)
            } else {
                Err(CliError::schema("pulse.angle", format!("{at}: reference Rabi frequency vanishes")))
            }
        }
        _ => Err(CliError::schema("pulse", "give exactly one of theta or angle")),
    }
}

/// Runs every selected scenario over the sweep grid (or the single pulse).
pub fn run(cfg: &SimulationConfig, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let seed = opts.seed.unwrap_or(cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = match (&opts.sweep, &cfg.sweep) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(c)) => Some(crate::sweep_spec::grid_from_config(c)?),
        _ => None,
    };
    let selected: Vec<usize> = match &opts.scenario {
        None => (0..cfg.scenarios.len()).collect(),
        Some(name) => {
            let i = cfg
                .scenarios
                .iter()
                .position(|s| &s.name == name)
                .ok_or_else(|| CliError::schema("scenario", format!("no scenario named {name:?}")))?;
            vec![i]
        }
    };
    let pool = thread_pool()?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for i in selected {
        let sc = &cfg.scenarios[i];
        let scenario = cfg.scenario(i)?;
        let omega_ref = reference_frequency(&scenario)?;
        let base = scenario.prepare()?;
        let base_theta = theta_for(cfg, omega_ref, &sc.name)?;
        let (parameter, values) = match &spec {
            Some(s) => (s.axis.name().to_string(), s.values.clone()),
            None => ("theta".to_string(), vec![base_theta]),
        };
        let axis = spec.as_ref().map(|s| s.axis).unwrap_or(Axis::Scenario(SweepParameter::Theta));

        let mut block: Vec<Row> = match axis {
            Axis::Angle | Axis::Scenario(SweepParameter::Theta) => {
                let thetas: Vec<f64> = match axis {
                    Axis::Angle if omega_ref > 0.0 => values.iter().map(|a| a / omega_ref).collect(),
                    Axis::Angle => return Err(CliError::schema("sweep.parameter", format!("{}: angle needs a nonzero reference Rabi frequency", sc.name))),
                    _ => values.clone(),
                };
                let rows: Result<Vec<Row>, CliError> = pool.install(|| {
                    values
                        .par_iter()
                        .zip(thetas.par_iter())
                        .map(|(&value, &theta)| make_row(&sc.name, &parameter, value, theta, omega_ref, &scenario, &base))
                        .collect()
                });
                let mut rows = rows?;
                if opts.oracle {
                    let exact = oracle_values(cfg, &scenario, &base, sc.kind, &thetas)?;
                    for (r, e) in rows.iter_mut().zip(exact) {
                        r.oracle_delta = e.map(|e| (r.observable(sc.kind) - e).abs());
                    }
                }
                rows
            }
            Axis::Scenario(p) => {
                let built: Result<Vec<(Row, Option<f64>)>, CliError> = pool.install(|| {
                    values
                        .par_iter()
                        .map(|&value| {
                            let s = scenario.with_parameter(p, value)?;
                            let w = reference_frequency(&s)?;
                            let theta = theta_for(cfg, w, &sc.name)?;
                            let run = s.prepare()?;
                            let row = make_row(&sc.name, &parameter, value, theta, w, &s, &run)?;
                            let exact = if opts.oracle { oracle_values(cfg, &s, &run, sc.kind, &[theta])?[0] } else { None };
                            Ok((row, exact))
                        })
                        .collect()
                });
                built?
                    .into_iter()
                    .map(|(mut r, e)| {
                        r.oracle_delta = e.map(|e| (r.observable(sc.kind) - e).abs());
                        r
                    })
                    .collect()
            }
        };
        rows.append(&mut block);

        let reduced = ReducedHamiltonian::from_model(&base.model).map_err(qcr_scenarios::ScenarioError::from)?;
        let x = scenario.setup().rabi_element()?;
        reports.push(ScenarioReport {
            name: sc.name.clone(),
            kind: sc.kind,
            dim: base.model.dim(),
            rabi_element: [x.re, x.im],
            reference_frequency: omega_ref,
            theta: base_theta,
            truncation_error: base.truncation_error,
            dropped_v2: reduced.v_squared().dropped.into_iter().map(|d| DroppedProduct { label: d.label, norm: d.norm }).collect(),
            phases: base
                .phases
                .iter()
                .map(|p| PhaseEntry {
                    kind: format!("{:?}", p.kind),
                    state: p.state.name().to_string(),
                    momentum: p.momentum,
                    photons: p.photons,
                    value: [p.value.re, p.value.im],
                })
                .collect(),
            probe_norm_defect: probe_defect(&base, base_theta, cfg.check.probes, &mut rng)?,
        });
    }
    let parameter = spec.as_ref().map(|s| s.axis.name()).unwrap_or("theta").to_string();
    let mut report = Report { seed, parameter, oracle: opts.oracle, config: cfg.clone(), scenarios: reports, breaches: Vec::new() };
    report.breaches = breaches(cfg, &rows, &report);
    Ok(RunOutput { rows, report })
}

fn make_row(name: &str, parameter: &str, value: f64, theta: f64, omega_ref: f64, s: &Scenario<f64>, run: &PreparedRun<f64>) -> Result<Row, CliError> {
    let r = run.run(theta)?;
    let sum = r.summary();
    let cf = closed_form(s, theta)?;
    let kind = match s {
        Scenario::Single { .. } => ScenarioKind::Single,
        Scenario::Hom { .. } => ScenarioKind::Hom,
    };
    let mut row = Row {
        scenario: name.to_string(),
        parameter: parameter.to_string(),
        value,
        theta,
        angle: theta * omega_ref,
        p_b0: sum.p_b[0],
        p_b1: sum.p_b[1],
        p_b2: sum.p_b[2],
        coincidence: sum.coincidence,
        norm: sum.norm_sqr,
        closed_form: cf,
        closed_form_delta: None,
        oracle_delta: None,
        truncation_error: r.truncation_error,
    };
    row.closed_form_delta = cf.map(|c| (row.observable(kind) - c).abs());
    Ok(row)
}

/// Tolerance breaches for `--check`.
pub fn breaches(cfg: &SimulationConfig, rows: &[Row], report: &Report) -> Vec<String> {
    let c = &cfg.check;
    let mut out = Vec::new();
    for r in rows {
        let at = format!("{} {}={}", r.scenario, r.parameter, r.value);
        if let Some(d) = r.closed_form_delta {
            if d > c.tolerance {
                out.push(format!("{at}: closed-form deviation {d:e} > {:e}", c.tolerance));
            }
        }
        if cfg.couplings.rwa && (r.norm - 1.0).abs() > c.tolerance {
            out.push(format!("{at}: norm {} deviates from 1 by more than {:e}", r.norm, c.tolerance));
        }
        let kind = cfg.scenarios.iter().find(|s| s.name == r.scenario).map(|s| s.kind);
        if let (Some(m), Some(ScenarioKind::Hom)) = (c.max_coincidence, kind) {
            if r.coincidence > m {
                out.push(format!("{at}: coincidence {:e} > {m:e}", r.coincidence));
            }
        }
        if let Some(d) = r.oracle_delta {
            if d > c.oracle_tolerance {
                out.push(format!("{at}: oracle deviation {d:e} > {:e}", c.oracle_tolerance));
            }
        }
    }
    if cfg.couplings.rwa {
        for s in &report.scenarios {
            if s.probe_norm_defect > c.tolerance {
                out.push(format!("{}: probe norm defect {:e} > {:e}", s.name, s.probe_norm_defect, c.tolerance));
            }
        }
    }
    out
}
