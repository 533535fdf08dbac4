//! Sweep specifications: `name=start:step:stop` or `name=v1,v2,…`.

use std::str::FromStr;

use qcr_scenarios::SweepParameter;

use crate::config::SweepConfig;
use crate::error::CliError;

/// What a sweep varies. `Angle` is ϑ times the reference Rabi frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Angle,
    Scenario(SweepParameter),
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Angle => "angle",
            Axis::Scenario(p) => p.name(),
        }
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "angle" {
            return Ok(Axis::Angle);
        }
        s.parse::<SweepParameter>()
            .map(Axis::Scenario)
            .map_err(|_| CliError::Parse(format!("unknown sweep parameter {s:?} (theta, angle, n_a, n_b, detuning)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
}

/// start, start + step, …, stop with round((stop − start)/step) + 1 points.
pub fn range(start: f64, step: f64, stop: f64) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
        return Err(CliError::Parse("sweep bounds must be finite".into()));
    }
    if step <= 0.0 || stop < start {
        return Err(CliError::Parse(format!("empty or backwards range {start}:{step}:{stop}")));
    }
    let n = ((stop - start) / step).round();
    if n > 1e7 {
        return Err(CliError::Parse(format!("range {start}:{step}:{stop} has too many points")));
    }
    Ok((0..=n as usize).map(|i| start + i as f64 * step).collect())
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Parse(format!("not a number: {s:?}")))
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, grid) = s.split_once('=').ok_or_else(|| CliError::Parse(format!("sweep {s:?} is not name=grid")))?;
        let axis: Axis = name.trim().parse()?;
        let parts: Vec<&str> = grid.split(':').collect();
        let values = match parts.as_slice() {
            [start, step, stop] => range(number(start)?, number(step)?, number(stop)?)?,
            [list] => list.split(',').map(number).collect::<Result<_, _>>()?,
            _ => return Err(CliError::Parse(format!("grid {grid:?} is neither start:step:stop nor a list"))),
        };
        Ok(SweepSpec { axis, values })
    }
}

pub fn grid_from_config(c: &SweepConfig) -> Result<SweepSpec, CliError> {
    let axis: Axis = c.parameter.parse().map_err(|e: CliError| CliError::schema("sweep.parameter", e.to_string()))?;
    let values = match (&c.values, c.start, c.step, c.stop) {
        (Some(v), None, None, None) => v.clone(),
        (None, Some(a), Some(h), Some(b)) => range(a, h, b).map_err(|e| CliError::schema("sweep", e.to_string()))?,
        _ => return Err(CliError::schema("sweep", "give either values or all of start, step, stop")),
    };
    Ok(SweepSpec { axis, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_counts_points() {
        let s: SweepSpec = "theta=0:0.1:3.2".parse().unwrap();
        assert_eq!(s.axis, Axis::Scenario(SweepParameter::Theta));
        assert_eq!(s.values.len(), 33);
        assert!((s.values[32] - 3.2).abs() < 1e-12);
        assert_eq!("n_a=0:1:8".parse::<SweepSpec>().unwrap().values.len(), 9);
    }

    #[test]
    fn lists_and_angles() {
        let s: SweepSpec = "angle=0.5, 1.0,2".parse().unwrap();
        assert_eq!(s.axis, Axis::Angle);
        assert_eq!(s.values, vec![0.5, 1.0, 2.0]);
    }

    #[test]
    fn malformed_specs_fail() {
        for bad in ["theta", "phi=0:1:2", "theta=0:1", "theta=2:1:0", "theta=0:0:1", "theta=a,b"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    proptest::proptest! {
        #[test]
        fn range_hits_both_ends(start in -10.0f64..10.0, step in 0.01f64..1.0, n in 0usize..200) {
            let stop = start + n as f64 * step;
            let v = range(start, step, stop).unwrap();
            proptest::prop_assert_eq!(v.len(), n + 1);
            proptest::prop_assert!((v[n] - stop).abs() < 1e-9);
        }
    }
}
