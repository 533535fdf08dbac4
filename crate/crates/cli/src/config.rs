//! TOML configuration: strict schema, defaults and validation.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use qcr_averaging::FilterSpec;
use qcr_lambda::HcSign;
use qcr_pulse::GaussianAmplitude;
use qcr_scenarios::{Ancilla, AtomicInput, Internal, OpticalInput, PairInput, RamanSetup, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub seed: u64,
    pub units: Units,
    pub levels: Levels,
    pub couplings: Couplings,
    #[serde(default)]
    pub basis: Basis,
    #[serde(default)]
    pub filter: Filter,
    pub pulse: Pulse,
    #[serde(rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// ℏ = 1; every frequency shares one scaled unit.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub hbar: f64,
    pub frequency: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Levels {
    pub omega_b: f64,
    pub ancillas: Vec<f64>,
    #[serde(default = "infinite")]
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    Hermitian,
    Literal,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    pub photon: [f64; 2],
    #[serde(default = "counter_propagating")]
    pub wavenumbers: [i64; 2],
    /// Per ancilla [|c_a|, |c_b|].
    pub amplitudes: Vec<[f64; 2]>,
    /// Per ancilla [arg c_a, arg c_b] in radians.
    #[serde(default)]
    pub phases: Option<Vec<[f64; 2]>>,
    #[serde(default = "yes")]
    pub rwa: bool,
    #[serde(default)]
    pub hc_sign: SignConvention,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Ladder,
    Ring,
    Grid,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Basis {
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "one_usize")]
    pub d: usize,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default = "one")]
    pub unit: f64,
}

impl Default for Basis {
    fn default() -> Self {
        Self { n_max: default_n_max(), d: 1, backend: Backend::Ladder, unit: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Gaussian,
    Ideal,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Filter {
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default)]
    pub window: WindowKind,
    /// Oracle sampling step.
    #[serde(default = "default_dt")]
    pub dt: f64,
}

impl Default for Filter {
    fn default() -> Self {
        Self { cutoff: default_cutoff(), window: WindowKind::Gaussian, dt: default_dt() }
    }
}

/// Exactly one of `theta` (ϑ) or `angle` (ϑ times the scenario's reference Rabi frequency).
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    pub theta: Option<f64>,
    pub angle: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Single,
    Hom,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub kind: ScenarioKind,
    pub light: LightConfig,
    #[serde(default)]
    pub atom: Option<AtomConfig>,
    #[serde(default)]
    pub pair: Option<PairConfig>,
}

/// `fock = [n_a, n_b]` or `table = [[n_a, n_b, re, im], …]`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LightConfig {
    pub fock: Option<[usize; 2]>,
    pub table: Option<Vec<[f64; 4]>>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StateName {
    A,
    B,
}

/// A momentum mode, or a Gaussian when `sigma` is given.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub state: StateName,
    #[serde(default)]
    pub momentum: i64,
    pub sigma: Option<f64>,
    pub kappa: Option<Vec<f64>>,
    #[serde(default = "default_support")]
    pub support: i64,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    #[serde(default)]
    pub momentum_a: i64,
    /// Defaults to momentum_a + K.
    pub momentum_b: Option<i64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub max_coincidence: Option<f64>,
    #[serde(default = "default_oracle_tolerance")]
    pub oracle_tolerance: f64,
    #[serde(default = "default_probes")]
    pub probes: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { tolerance: default_tolerance(), max_coincidence: None, oracle_tolerance: default_oracle_tolerance(), probes: default_probes() }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn infinite() -> f64 {
    f64::INFINITY
}
fn counter_propagating() -> [i64; 2] {
    [1, -1]
}
fn yes() -> bool {
    true
}
fn default_n_max() -> usize {
    8
}
fn one_usize() -> usize {
    1
}
fn one() -> f64 {
    1.0
}
fn default_cutoff() -> f64 {
    2.0
}
fn default_dt() -> f64 {
    0.25
}
fn default_support() -> i64 {
    4
}
fn default_tolerance() -> f64 {
    1e-10
}
fn default_oracle_tolerance() -> f64 {
    2e-3
}
fn default_probes() -> usize {
    8
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<SimulationConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SimulationConfig, CliError> {
    let de = toml::Deserializer::parse(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let cfg: SimulationConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Parse(format!("{path}: {}", e.into_inner()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn positive(path: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::schema(path, format!("must be positive and finite, got {x}")))
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.units.hbar != 1.0 {
            return Err(CliError::schema("units.hbar", format!("only hbar = 1 is supported, got {}", self.units.hbar)));
        }
        if self.levels.ancillas.is_empty() {
            return Err(CliError::schema("levels.ancillas", "at least one ancilla is required"));
        }
        if !(self.levels.mass > 0.0) {
            return Err(CliError::schema("levels.mass", format!("must be positive, got {}", self.levels.mass)));
        }
        if self.couplings.amplitudes.len() != self.levels.ancillas.len() {
            return Err(CliError::schema(
                "couplings.amplitudes",
                format!("{} entries for {} ancillas", self.couplings.amplitudes.len(), self.levels.ancillas.len()),
            ));
        }
        if let Some(p) = &self.couplings.phases {
            if p.len() != self.levels.ancillas.len() {
                return Err(CliError::schema("couplings.phases", format!("{} entries for {} ancillas", p.len(), self.levels.ancillas.len())));
            }
        }
        for (i, w) in self.couplings.photon.iter().enumerate() {
            positive(&format!("couplings.photon[{i}]"), *w)?;
        }
        if self.basis.n_max == 0 {
            return Err(CliError::schema("basis.n_max", "must be at least 1"));
        }
        if !matches!(self.basis.d, 1 | 3) {
            return Err(CliError::schema("basis.d", format!("must be 1 or 3, got {}", self.basis.d)));
        }
        if self.basis.backend != Backend::Ladder {
            return Err(CliError::schema("basis.backend", "scenarios run on the momentum-ladder backend"));
        }
        positive("basis.unit", self.basis.unit)?;
        positive("filter.cutoff", self.filter.cutoff)?;
        positive("filter.dt", self.filter.dt)?;
        match (self.pulse.theta, self.pulse.angle) {
            (Some(t), None) => nonnegative("pulse.theta", t)?,
            (None, Some(a)) => nonnegative("pulse.angle", a)?,
            _ => return Err(CliError::schema("pulse", "give exactly one of theta or angle")),
        }
        if self.scenarios.is_empty() {
            return Err(CliError::schema("scenario", "at least one scenario is required"));
        }
        for (i, s) in self.scenarios.iter().enumerate() {
            if self.scenarios[..i].iter().any(|o| o.name == s.name) {
                return Err(CliError::schema(format!("scenario[{i}].name"), format!("duplicate name {:?}", s.name)));
            }
            self.scenario(i)?;
        }
        positive("check.tolerance", self.check.tolerance)?;
        positive("check.oracle_tolerance", self.check.oracle_tolerance)?;
        if let Some(s) = &self.sweep {
            crate::sweep_spec::grid_from_config(s)?;
        }
        Ok(())
    }

    pub fn setup(&self) -> RamanSetup<f64> {
        let c = &self.couplings;
        let ancillas = self
            .levels
            .ancillas
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let ph = c.phases.as_ref().map(|p| p[j]).unwrap_or([0.0, 0.0]);
                Ancilla {
                    omega: *w,
                    coupling: [Complex::from_polar(c.amplitudes[j][0], ph[0]), Complex::from_polar(c.amplitudes[j][1], ph[1])],
                }
            })
            .collect();
        RamanSetup {
            omega_b: self.levels.omega_b,
            ancillas,
            photon: c.photon,
            wavenumbers: c.wavenumbers,
            unit: self.basis.unit,
            mass: self.levels.mass,
            n_max: self.basis.n_max,
            rwa: c.rwa,
            hc_sign: match c.hc_sign {
                SignConvention::Hermitian => HcSign::Hermitian,
                SignConvention::Literal => HcSign::Literal,
            },
        }
    }

    pub fn filter_spec(&self) -> Result<FilterSpec<f64>, CliError> {
        Ok(match self.filter.window {
            WindowKind::Gaussian => FilterSpec::gaussian(self.filter.cutoff)?,
            WindowKind::Ideal => FilterSpec::ideal(self.filter.cutoff, 10.0 / self.filter.cutoff)?,
        })
    }

    /// Scenario i as a runnable description.
    pub fn scenario(&self, i: usize) -> Result<Scenario<f64>, CliError> {
        let s = &self.scenarios[i];
        let at = |f: &str| format!("scenario[{i}].{f}");
        let setup = self.setup();
        let light = match (&s.light.fock, &s.light.table) {
            (Some([a, b]), None) => OpticalInput::fock(*a, *b),
            (None, Some(t)) => {
                let mut entries = Vec::new();
                for (k, [a, b, re, im]) in t.iter().enumerate() {
                    if *a < 0.0 || *b < 0.0 || a.fract() != 0.0 || b.fract() != 0.0 {
                        return Err(CliError::schema(at(&format!("light.table[{k}]")), "photon numbers must be non-negative integers"));
                    }
                    entries.push(((*a as usize, *b as usize), Complex::new(*re, *im)));
                }
                OpticalInput::from_table(entries)
            }
            _ => return Err(CliError::schema(at("light"), "give exactly one of fock or table")),
        };
        if light.norm_sqr() == 0.0 {
            return Err(CliError::schema(at("light"), "zero norm"));
        }
        if light.max_photons() > setup.n_max {
            return Err(CliError::schema(at("light"), format!("needs {} photons, basis.n_max = {}", light.max_photons(), setup.n_max)));
        }
        Ok(match s.kind {
            ScenarioKind::Single => {
                let a = s.atom.as_ref().ok_or_else(|| CliError::schema(at("atom"), "single-particle scenarios need an atom table"))?;
                if s.pair.is_some() {
                    return Err(CliError::schema(at("pair"), "only for hom scenarios"));
                }
                let state = match a.state {
                    StateName::A => Internal::A,
                    StateName::B => Internal::B,
                };
                let atom = match a.sigma {
                    None => AtomicInput::momentum(state, a.momentum),
                    Some(sigma) => {
                        positive(&at("atom.sigma"), sigma)?;
                        let kappa = a.kappa.clone().unwrap_or_else(|| vec![0.0; self.basis.d]);
                        if kappa.len() != self.basis.d {
                            return Err(CliError::schema(at("atom.kappa"), format!("needs {} components (basis.d)", self.basis.d)));
                        }
                        if self.basis.d != 1 {
                            return Err(CliError::schema("basis.d", "Gaussian inputs on the momentum ladder need d = 1"));
                        }
                        if a.support < 0 {
                            return Err(CliError::schema(at("atom.support"), "must be non-negative"));
                        }
                        let amplitude = GaussianAmplitude::new(sigma, kappa).map_err(|e| CliError::schema(at("atom"), e.to_string()))?;
                        AtomicInput::Gaussian { state, amplitude, support: a.support }
                    }
                };
                Scenario::Single { setup, atom, light }
            }
            ScenarioKind::Hom => {
                if s.atom.is_some() {
                    return Err(CliError::schema(at("atom"), "only for single-particle scenarios"));
                }
                let p = s.pair.clone().unwrap_or_default();
                let pb = p.momentum_b.unwrap_or(p.momentum_a + setup.kick());
                if light.entries().any(|((a, b), _)| a != b) {
                    return Err(CliError::schema(at("light"), "hom scenarios need n_a = n_b"));
                }
                Scenario::Hom { setup, pair: PairInput::ab(p.momentum_a, pb), light }
            }
        })
    }
}

fn nonnegative(path: &str, x: f64) -> Result<(), CliError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::schema(path, format!("must be finite and non-negative, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[units]
hbar = 1.0
frequency = "scaled"

[levels]
omega_b = 10.0
ancillas = [105.0]

[couplings]
photon = [100.0, 90.0]
amplitudes = [[0.1, 0.1]]

[pulse]
angle = 0.5

[[scenario]]
name = "rabi"
kind = "single"
light = { fock = [1, 0] }
atom = { state = "a" }
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.basis.n_max, 8);
        assert_eq!(c.basis.d, 1);
        assert_eq!(c.basis.backend, Backend::Ladder);
        assert!(c.couplings.rwa);
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn negative_sigma_names_the_field() {
        let text = MINIMAL.replace("atom = { state = \"a\" }", "atom = { state = \"a\", sigma = -1.0 }");
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(e.contains("scenario[0].atom.sigma"), "{e}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = parse_config(&format!("foo = 1\n{MINIMAL}")).unwrap_err().to_string();
        assert!(e.contains("foo"), "{e}");
        let e = parse_config(&MINIMAL.replace("omega_b = 10.0", "omega_b = 10.0\nfoo = 2")).unwrap_err().to_string();
        assert!(e.contains("levels") && e.contains("foo"), "{e}");
    }

    #[test]
    fn units_are_mandatory() {
        let text = MINIMAL.replace("[units]\nhbar = 1.0\nfrequency = \"scaled\"\n", "");
        let e = parse_config(&text).unwrap_err().to_string();
        assert!(e.contains("units"), "{e}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_config("[units\nhbar = 1").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
    }

    #[test]
    fn pulse_needs_exactly_one_area() {
        let e = parse_config(&MINIMAL.replace("angle = 0.5", "angle = 0.5\ntheta = 1.0")).unwrap_err().to_string();
        assert!(e.starts_with("pulse"), "{e}");
    }
}
