//! Seeded randomized run of every oracle check.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    bloch_consistency, eigencheck_g, propagator_by_expm, trace_by_expm,
    transmission_by_eigenvectors, BiorthoPair,
};
use crate::connection::ContactInteraction;
use crate::error::Result;
use crate::exec::{map_range, Execution};
use crate::lattice::{Energy, LatticeParams};
use crate::propagator::{propagator, trace_function};
use crate::scattering::transmission_probability;

/// Minimum `|det(I - G̃Ṽ)|` required of an off-shell negative control.
pub const OFF_SHELL_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub samples: usize,
    pub seed: u64,
    pub lattice: LatticeParams,
    /// Pass threshold for every residual.
    pub tolerance: f64,
    pub exec: Execution,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 0x6b70_625f_7665_7269,
            lattice: LatticeParams::default(),
            tolerance: 1e-9,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub value: f64,
    /// `value` must stay below the threshold, or above it for negative controls.
    pub threshold: f64,
    pub lower_bound: bool,
}

impl CheckResult {
    fn max(name: &str, samples: usize, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_owned(),
            samples,
            value,
            threshold,
            lower_bound: false,
        }
    }

    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value > self.threshold
        } else {
            self.value < self.threshold
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub checks: Vec<CheckResult>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A random member of SL(2,R) with entries of order one.
pub fn random_sl2r<R: Rng>(rng: &mut R) -> ContactInteraction {
    loop {
        let alpha = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let beta = rng.random_range(-3.0..3.0);
        let delta = rng.random_range(-3.0..3.0);
        let gamma = (1.0 + beta * delta) / alpha;
        if let Ok(v) = ContactInteraction::new(gamma, delta, beta, alpha) {
            return v;
        }
    }
}

/// Energies in `[-10, 100]`, one in twenty (at least 50) drawn from
/// `|E| < 1e-3` so the series branch is exercised.
fn energy_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let near_zero = (n / 20).max(50).min(n);
    (0..n)
        .map(|i| {
            if i < near_zero {
                rng.random_range(-1e-3..1e-3)
            } else {
                rng.random_range(-10.0..100.0)
            }
        })
        .collect()
}

fn fold_max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn run_battery(config: &BatteryConfig) -> Result<BatteryReport> {
    let lat = config.lattice;
    let n = config.samples.max(1);
    let tol = config.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let energies = energy_samples(&mut rng, n);
    let matrices: Vec<ContactInteraction> = (0..n).map(|_| random_sl2r(&mut rng)).collect();
    let displacements: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let positive: Vec<f64> = (0..n).map(|_| rng.random_range(1e-2..100.0)).collect();
    let wavenumbers: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(rng.random_range(-3.0..3.0)))
        .collect();
    let shifts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();

    let exec = config.exec;
    let trace_residuals = map_range(n, exec, |i| -> Result<f64> {
        let en = Energy::new(energies[i])?;
        let f = trace_function(en, &matrices[i], &lat);
        let oracle = trace_by_expm(en, &matrices[i], &lat)?;
        Ok((f - oracle).abs() / f.abs().max(1.0))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let propagator_residuals = map_range(n, exec, |i| -> Result<f64> {
        let en = Energy::new(energies[i])?;
        let x = displacements[i];
        let g = propagator(x, en, &lat)?;
        let oracle = propagator_by_expm(x, en, &lat)?;
        Ok(g.max_abs_diff(&oracle) / g.norm_inf().max(1.0))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let eigen = map_range(n, exec, |i| {
        eigencheck_g(displacements[i], Energy::new(positive[i])?, &lat)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let biortho = map_range(n, exec, |i| {
        BiorthoPair::new(lat.signed_k0(positive[i]), &lat).map(|p| p.biorthogonality_residual())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    // Bloch checks: on-shell where the sampled (E, V) is allowed, off-shell
    // controls everywhere else with a detuned k.
    let bloch = map_range(n, exec, |i| -> Result<(Option<f64>, f64, Option<f64>)> {
        let en = Energy::new(energies[i])?;
        let v = &matrices[i];
        let f = trace_function(en, v, &lat);
        let a = lat.spacing();
        let on_shell = if f.abs() <= 2.0 {
            let k = (f / 2.0).acos() / a;
            let r = bloch_consistency(en, k, v, &lat)?;
            Some(r.det.max(r.dispersion_trace))
        } else {
            None
        };
        let k_off = shifts[i] / a;
        let detuning = (2.0 * (k_off * a).cos() - f).abs();
        let off = bloch_consistency(en, k_off, v, &lat)?;
        let off_shell = (detuning > 0.05).then_some(off.det);
        Ok((on_shell, off.trace_relation, off_shell))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let scattering = map_range(n, exec, |i| -> Result<f64> {
        let closed = transmission_probability(&matrices[i], wavenumbers[i], &lat)?;
        let oracle = transmission_by_eigenvectors(&matrices[i], wavenumbers[i], &lat)?;
        Ok((closed.transmission - oracle).abs())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let on_shell: Vec<f64> = bloch.iter().filter_map(|b| b.0).collect();
    let off_shell: Vec<f64> = bloch.iter().filter_map(|b| b.2).collect();
    let checks = vec![
        CheckResult::max("trace_vs_expm", n, fold_max(trace_residuals), tol),
        CheckResult::max("propagator_vs_expm", n, fold_max(propagator_residuals), tol),
        CheckResult::max(
            "eigenvectors",
            n,
            fold_max(eigen.iter().map(|r| r.right_residual.max(r.left_residual))),
            tol,
        ),
        CheckResult::max("biorthogonality", n, fold_max(biortho), tol),
        CheckResult::max(
            "bloch_trace_relation",
            n,
            fold_max(bloch.iter().map(|b| b.1)),
            tol,
        ),
        CheckResult::max("bloch_on_shell", on_shell.len(), fold_max(on_shell), tol),
        CheckResult {
            name: "bloch_off_shell".to_owned(),
            samples: off_shell.len(),
            value: off_shell.iter().copied().fold(f64::INFINITY, f64::min),
            threshold: OFF_SHELL_MARGIN,
            lower_bound: true,
        },
        CheckResult::max("transmission_vs_eigenvectors", n, fold_max(scattering), tol),
    ];
    Ok(BatteryReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_passes() {
        let report = run_battery(&BatteryConfig {
            samples: 200,
            ..BatteryConfig::default()
        })
        .unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn impossible_tolerance_fails() {
        let report = run_battery(&BatteryConfig {
            samples: 100,
            tolerance: 1e-16,
            ..BatteryConfig::default()
        })
        .unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = BatteryConfig {
            samples: 64,
            ..BatteryConfig::default()
        };
        assert_eq!(run_battery(&cfg).unwrap(), run_battery(&cfg).unwrap());
        let seq = BatteryConfig {
            exec: Execution::Sequential,
            ..cfg
        };
        assert_eq!(run_battery(&cfg).unwrap(), run_battery(&seq).unwrap());
    }
}
