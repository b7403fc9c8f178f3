//! Run configuration: JSON file, command-line overrides, defaults.
//!
//! Precedence is flags > file > defaults. Every section rejects unknown keys.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use kpb_core::bands::{DEFAULT_DISPERSION_POINTS, DEFAULT_E_MAX, DEFAULT_E_MIN, DEFAULT_GRID_N};
use kpb_core::sweep::{linspace, rotation_axis, DEFAULT_AXIS_SAMPLES, DEFAULT_PARAM_SAMPLES};
use kpb_core::{
    make_connection, AxisMode, ContactInteraction, FamilyKind, FamilySpec, LatticeParams,
    Tolerances,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_000_101;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_K0_WINDOW: (f64, f64) = (-5.0, 40.0);
pub const DEFAULT_TRANSMISSION_WINDOW: (f64, f64) = (1e-3, 1e3);
pub const DEFAULT_TRANSMISSION_POINTS: usize = 601;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilyConfig {
    pub kind: Option<FamilyKind>,
    pub param: Option<f64>,
    pub param_range: Option<ParamRange>,
    /// Row-major `g, d, b, al` for the raw family.
    pub matrix: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Log,
    Linear,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "log" => Ok(Scale::Log),
            "linear" => Ok(Scale::Linear),
            other => Err(format!("unknown scale `{other}` (expected log or linear)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    /// Largest accepted `|det V - 1|` for raw matrices.
    pub det: f64,
    pub oracle: f64,
    /// Residual threshold for `kpb verify`.
    pub verify: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let core = Tolerances::default();
        Self {
            det: core.det,
            oracle: core.oracle,
            verify: DEFAULT_VERIFY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub lattice: LatticeParams,
    pub window: WindowConfig,
    pub mode: AxisMode,
    pub scale: Scale,
    pub output: OutputConfig,
    pub tolerances: ToleranceConfig,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub dispersion_points: Option<usize>,
    pub strict_missed_bands: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn family_kind(&self) -> FamilyKind {
        self.family.kind.unwrap_or(FamilyKind::Delta)
    }

    /// The single connection matrix used by `bands`, `dispersion` and
    /// `transmission`.
    pub fn connection(&self) -> Result<ContactInteraction, CliError> {
        let kind = self.family_kind();
        let spec = match kind {
            FamilyKind::Raw => {
                let m = self.family.matrix.ok_or_else(|| {
                    CliError::Config("family `raw` needs --matrix g,d,b,al".into())
                })?;
                let v =
                    ContactInteraction::with_tolerance(m[0], m[1], m[2], m[3], self.tolerances.det)
                        .map_err(|e| CliError::Config(e.to_string()))?;
                FamilySpec::raw(v)
            }
            _ => {
                let p = self
                    .family
                    .param
                    .ok_or_else(|| CliError::Config(format!("family `{kind}` needs --param")))?;
                FamilySpec::of(kind, p)
            }
        };
        make_connection(&spec).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Energy window and scan grid for `bands` and `dispersion`.
    pub fn energy_window(&self) -> Result<(f64, f64, usize), CliError> {
        let lo = self.window.min.unwrap_or(DEFAULT_E_MIN);
        let hi = self.window.max.unwrap_or(DEFAULT_E_MAX);
        let n = self.window.n.unwrap_or(DEFAULT_GRID_N);
        check_window(lo, hi, n)?;
        Ok((lo, hi, n))
    }

    /// Vertical axis values for `sweep`.
    pub fn sweep_axis(&self) -> Result<Vec<f64>, CliError> {
        let (dlo, dhi) = match self.mode {
            AxisMode::Energy => (DEFAULT_E_MIN, DEFAULT_E_MAX),
            AxisMode::Wavenumber => DEFAULT_K0_WINDOW,
        };
        let lo = self.window.min.unwrap_or(dlo);
        let hi = self.window.max.unwrap_or(dhi);
        let n = self.window.n.unwrap_or(DEFAULT_AXIS_SAMPLES);
        check_window(lo, hi, n)?;
        Ok(linspace(lo, hi, n))
    }

    /// Family-parameter values for `sweep`.
    pub fn sweep_params(&self) -> Result<Vec<f64>, CliError> {
        let kind = self.family_kind();
        if kind == FamilyKind::Raw {
            return Err(CliError::Config("cannot sweep the raw family".into()));
        }
        let values = match self.family.param_range {
            Some(r) => {
                check_window(r.lo, r.hi, r.n)?;
                linspace(r.lo, r.hi, r.n)
            }
            None => match kind {
                FamilyKind::Delta => linspace(-15.0, 15.0, DEFAULT_PARAM_SAMPLES),
                FamilyKind::Rotation => rotation_axis(DEFAULT_PARAM_SAMPLES),
                _ => linspace(-3.0, 3.0, DEFAULT_PARAM_SAMPLES),
            },
        };
        if let Some(bad) = values.iter().find(|&&p| !kind.accepts(p)) {
            return Err(CliError::Config(format!(
                "parameter {bad} outside the {kind} domain{}",
                if kind == FamilyKind::Rotation {
                    " (-pi, pi]"
                } else {
                    ""
                }
            )));
        }
        Ok(values)
    }

    /// Incident wavenumbers for `transmission`.
    pub fn k0_grid(&self) -> Result<Vec<f64>, CliError> {
        let lo = self.window.min.unwrap_or(DEFAULT_TRANSMISSION_WINDOW.0);
        let hi = self.window.max.unwrap_or(DEFAULT_TRANSMISSION_WINDOW.1);
        let n = self.window.n.unwrap_or(DEFAULT_TRANSMISSION_POINTS);
        check_window(lo, hi, n)?;
        if lo <= 0.0 {
            return Err(CliError::Config(format!(
                "transmission needs k0 > 0, window starts at {lo}"
            )));
        }
        Ok(match self.scale {
            Scale::Linear => linspace(lo, hi, n),
            Scale::Log => linspace(lo.log10(), hi.log10(), n)
                .into_iter()
                .enumerate()
                .map(|(i, x)| match i {
                    0 => lo,
                    i if i == n - 1 => hi,
                    _ => 10f64.powf(x),
                })
                .collect(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn dispersion_points(&self) -> usize {
        self.dispersion_points.unwrap_or(DEFAULT_DISPERSION_POINTS)
    }
}

fn check_window(lo: f64, hi: f64, n: usize) -> Result<(), CliError> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(CliError::Config(format!("invalid range {lo}:{hi}")));
    }
    if n < 2 {
        return Err(CliError::Config(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    Ok(())
}

/// Parses `lo:hi`.
pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi] => Ok((parse_float(lo)?, parse_float(hi)?)),
        _ => Err(format!("expected lo:hi, got `{s}`")),
    }
}

/// Parses `lo:hi:n`.
pub fn parse_param_range(s: &str) -> Result<ParamRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => Ok(ParamRange {
            lo: parse_float(lo)?,
            hi: parse_float(hi)?,
            n: n.trim()
                .parse()
                .map_err(|e| format!("bad sample count `{n}`: {e}"))?,
        }),
        _ => Err(format!("expected lo:hi:n, got `{s}`")),
    }
}

/// Parses `g,d,b,al`.
pub fn parse_matrix(s: &str) -> Result<[f64; 4], String> {
    let parts = s
        .split(',')
        .map(parse_float)
        .collect::<Result<Vec<_>, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("expected four comma-separated entries, got `{s}`"))
}

/// Accepts plain floats plus `pi`, `-pi` and `pi/2`-style fractions.
pub fn parse_float(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let value = if let Some(rest) = body.strip_prefix("pi") {
        let div = match rest.strip_prefix('/') {
            Some(d) => d
                .parse::<f64>()
                .map_err(|e| format!("bad number `{s}`: {e}"))?,
            None if rest.is_empty() => 1.0,
            None => return Err(format!("bad number `{s}`")),
        };
        PI / div
    } else {
        body.parse::<f64>()
            .map_err(|e| format!("bad number `{s}`: {e}"))?
    };
    let value = if neg { -value } else { value };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("non-finite number `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        assert_eq!(parse_window("-25:50").unwrap(), (-25.0, 50.0));
        assert_eq!(parse_window("1e-3:1e3").unwrap(), (1e-3, 1e3));
        assert!(parse_window("1:2:3").is_err());
        let r = parse_param_range("-pi/2:pi:11").unwrap();
        assert_eq!((r.lo, r.hi, r.n), (-PI / 2.0, PI, 11));
        assert!(parse_param_range("0:1").is_err());
        assert_eq!(parse_matrix("1,0,0,1").unwrap(), [1.0, 0.0, 0.0, 1.0]);
        assert!(parse_matrix("1,0,0").is_err());
        assert!(parse_float("inf").is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::from_json(r#"{"famly": {}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"family": {"knd": "delta"}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"lattice": {"mass": 1, "a": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerances": {"det": 1e-12, "x": 1}}"#).is_err());
    }

    #[test]
    fn accepts_a_full_document() {
        let cfg = RunConfig::from_json(
            r#"{
                "family": {"kind": "rotation", "param": 1.0, "param_range": {"lo": -1, "hi": 1, "n": 5}},
                "lattice": {"mass": 0.5, "spacing": 1.0},
                "window": {"min": -25, "max": 120, "n": 1201},
                "mode": "k0",
                "scale": "linear",
                "output": {"out": "x.csv", "svg": "x.svg"},
                "tolerances": {"det": 1e-12, "oracle": 1e-10, "verify": 1e-9},
                "seed": 7,
                "samples": 10,
                "dispersion_points": 21,
                "strict_missed_bands": true
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.family_kind(), FamilyKind::Rotation);
        assert_eq!(cfg.mode, AxisMode::Wavenumber);
        assert_eq!(cfg.sweep_params().unwrap().len(), 5);
    }

    #[test]
    fn rotation_sweep_rejects_minus_pi() {
        let mut cfg = RunConfig::default();
        cfg.family.kind = Some(FamilyKind::Rotation);
        cfg.family.param_range = Some(ParamRange {
            lo: -PI,
            hi: PI,
            n: 5,
        });
        assert!(matches!(cfg.sweep_params(), Err(CliError::Config(_))));
        cfg.family.param_range = None;
        assert_eq!(cfg.sweep_params().unwrap().len(), DEFAULT_PARAM_SAMPLES);
    }

    #[test]
    fn log_grid_is_geometric() {
        let mut cfg = RunConfig {
            window: WindowConfig {
                min: Some(1e-2),
                max: Some(1e2),
                n: Some(5),
            },
            ..RunConfig::default()
        };
        let g = cfg.k0_grid().unwrap();
        for (x, want) in g.iter().zip([1e-2, 1e-1, 1.0, 1e1, 1e2]) {
            assert!((x / want - 1.0).abs() < 1e-14);
        }
        cfg.window.min = Some(0.0);
        assert!(cfg.k0_grid().is_err());
    }
}
