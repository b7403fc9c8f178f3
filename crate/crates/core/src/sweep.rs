//! Allowed/forbidden rasters over (family parameter × energy axis).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::connection::{make_connection, FamilyKind, FamilySpec};
use crate::error::{KpbError, Result};
use crate::exec::{map_range, Execution};
use crate::lattice::LatticeParams;
use crate::propagator::trace_value;

pub const DEFAULT_PARAM_SAMPLES: usize = 601;
pub const DEFAULT_AXIS_SAMPLES: usize = 1201;

/// What the vertical axis of a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AxisMode {
    /// Energy `E`.
    #[default]
    #[serde(rename = "E")]
    Energy,
    /// Signed wavenumber `k0 = ±sqrt(2m|E|)`.
    #[serde(rename = "k0")]
    Wavenumber,
}

impl AxisMode {
    pub fn label(self) -> &'static str {
        match self {
            AxisMode::Energy => "E",
            AxisMode::Wavenumber => "k0",
        }
    }

    pub fn energy(self, value: f64, lat: &LatticeParams) -> f64 {
        match self {
            AxisMode::Energy => value,
            AxisMode::Wavenumber => lat.energy_from_signed_k0(value),
        }
    }
}

impl std::str::FromStr for AxisMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "E" => Ok(AxisMode::Energy),
            "k0" => Ok(AxisMode::Wavenumber),
            other => Err(format!("unknown axis mode `{other}` (expected E or k0)")),
        }
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` evenly spaced rotation angles covering `(-π, π]`.
pub fn rotation_axis(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            if i == n {
                PI
            } else {
                -PI + 2.0 * PI * i as f64 / n as f64
            }
        })
        .collect()
}

/// Row-major raster: row `i` is `params[i]`, column `j` is `axis[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub family: FamilyKind,
    pub mode: AxisMode,
    pub params: Vec<f64>,
    pub axis: Vec<f64>,
    /// `f(E)/2` per cell.
    pub f_half: Vec<f64>,
}

impl SweepGrid {
    pub fn compute(
        family: FamilyKind,
        params: Vec<f64>,
        axis: Vec<f64>,
        mode: AxisMode,
        lat: &LatticeParams,
    ) -> Result<Self> {
        Self::compute_with(family, params, axis, mode, lat, Execution::default())
    }

    pub fn compute_with(
        family: FamilyKind,
        params: Vec<f64>,
        axis: Vec<f64>,
        mode: AxisMode,
        lat: &LatticeParams,
        exec: Execution,
    ) -> Result<Self> {
        if family == FamilyKind::Raw {
            return Err(KpbError::MissingRawMatrix);
        }
        for values in [&params, &axis] {
            if !values.windows(2).all(|w| w[1] > w[0]) {
                return Err(KpbError::NonIncreasingAxis);
            }
        }
        let matrices = params
            .iter()
            .map(|&p| make_connection(&FamilySpec::of(family, p)))
            .collect::<Result<Vec<_>>>()?;
        let energies: Vec<f64> = axis.iter().map(|&x| mode.energy(x, lat)).collect();

        let cols = axis.len();
        let rows = map_range(params.len(), exec, |i| {
            let v = &matrices[i];
            energies
                .iter()
                .map(|&e| trace_value(e, v, lat) / 2.0)
                .collect::<Vec<f64>>()
        });
        let mut f_half = Vec::with_capacity(params.len() * cols);
        for row in rows {
            f_half.extend(row);
        }
        Ok(Self {
            family,
            mode,
            params,
            axis,
            f_half,
        })
    }

    pub fn rows(&self) -> usize {
        self.params.len()
    }

    pub fn cols(&self) -> usize {
        self.axis.len()
    }

    pub fn f_half_at(&self, i: usize, j: usize) -> f64 {
        self.f_half[i * self.cols() + j]
    }

    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.f_half_at(i, j).abs() <= 1.0
    }

    /// Allowed flags of row `i`.
    pub fn allowed_row(&self, i: usize) -> Vec<bool> {
        (0..self.cols()).map(|j| self.allowed(i, j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_axis_is_half_open() {
        let axis = rotation_axis(600);
        assert_eq!(axis.len(), 600);
        assert!(axis[0] > -PI);
        assert_eq!(*axis.last().unwrap(), PI);
        assert!(axis.iter().all(|&p| FamilyKind::Rotation.accepts(p)));
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-25.0, 120.0, 1201);
        assert_eq!(v[0], -25.0);
        assert_eq!(v[1200], 120.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn free_column_is_allowed_above_zero() {
        let lat = LatticeParams::default();
        let grid = SweepGrid::compute(
            FamilyKind::Delta,
            vec![-1.0, 0.0, 1.0],
            linspace(0.01, 50.0, 200),
            AxisMode::Energy,
            &lat,
        )
        .unwrap();
        assert!(grid.allowed_row(1).iter().all(|&a| a));
        assert!(!grid.allowed_row(2).iter().all(|&a| a));
    }

    #[test]
    fn rejects_bad_axes() {
        let lat = LatticeParams::default();
        let err = SweepGrid::compute(
            FamilyKind::Delta,
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            AxisMode::Energy,
            &lat,
        );
        assert_eq!(err, Err(KpbError::NonIncreasingAxis));
        let err = SweepGrid::compute(
            FamilyKind::Rotation,
            vec![-4.0, 0.0],
            vec![0.0, 1.0],
            AxisMode::Energy,
            &lat,
        );
        assert!(matches!(err, Err(KpbError::RotationOutOfRange(_))));
    }

    #[test]
    fn wavenumber_mode_maps_to_energy() {
        let lat = LatticeParams::default();
        assert_eq!(AxisMode::Wavenumber.energy(3.0, &lat), 9.0);
        assert_eq!(AxisMode::Wavenumber.energy(-2.0, &lat), -4.0);
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let lat = LatticeParams::default();
        let run = |exec| {
            SweepGrid::compute_with(
                FamilyKind::Hyperbolic,
                linspace(-3.0, 3.0, 61),
                linspace(-25.0, 120.0, 301),
                AxisMode::Energy,
                &lat,
                exec,
            )
            .unwrap()
        };
        let a = run(Execution::Sequential);
        let b = run(Execution::Parallel);
        let bits = |g: &SweepGrid| g.f_half.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }
}
