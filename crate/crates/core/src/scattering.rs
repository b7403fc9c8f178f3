//! Transmission through a single contact interaction.

use serde::{Deserialize, Serialize};

use crate::connection::ContactInteraction;
use crate::error::{ensure_finite, KpbError, Result};
use crate::lattice::LatticeParams;

/// Transmission and reflection probabilities at one incident wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub k0: f64,
    pub transmission: f64,
    /// Always `1 - transmission`.
    pub reflection: f64,
}

/// `|T|² = 4 / (α² + γ² + 2 + δ² k0²/4m² + β² 4m²/k0²)` for a wave incident
/// from the left.
pub fn transmission_probability(
    v: &ContactInteraction,
    k0: f64,
    lat: &LatticeParams,
) -> Result<ScatteringResult> {
    ensure_finite(k0, "wavenumber")?;
    if k0 <= 0.0 {
        return Err(KpbError::NonPositiveWavenumber(k0));
    }
    let two_m = 2.0 * lat.mass();
    let r = k0 / two_m;
    let (a, b, g, d) = (v.alpha(), v.beta(), v.gamma(), v.delta());
    let denom = a * a + g * g + 2.0 + d * d * r * r + b * b / (r * r);
    // αγ - βδ = 1 makes denom >= 4 analytically; clip rounding overshoot.
    let transmission = (4.0 / denom).min(1.0);
    Ok(ScatteringResult {
        k0,
        transmission,
        reflection: 1.0 - transmission,
    })
}

/// Evaluates [`transmission_probability`] along an ascending list of `k0`.
pub fn limit_profile(
    v: &ContactInteraction,
    lat: &LatticeParams,
    k0_list: &[f64],
) -> Result<Vec<ScatteringResult>> {
    if let Some(i) = k0_list.windows(2).position(|w| w[1] < w[0]) {
        return Err(KpbError::UnsortedWavenumbers(i + 1));
    }
    k0_list
        .iter()
        .map(|&k0| transmission_probability(v, k0, lat))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::connection::{make_connection, FamilySpec};

    #[test]
    fn no_obstacle_transmits_everything() {
        let lat = LatticeParams::default();
        for k0 in [1e-3, 0.5, 7.0, 1e4] {
            let r = transmission_probability(&ContactInteraction::identity(), k0, &lat).unwrap();
            assert_eq!(r.transmission, 1.0);
            assert_eq!(r.reflection, 0.0);
        }
    }

    #[test]
    fn delta_strength_two_halves_transmission() {
        // 1 / (1 + v²m²/k0²) with v = 2, m = 1/2, k0 = 1
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::delta(2.0)).unwrap();
        let r = transmission_probability(&v, 1.0, &lat).unwrap();
        assert!((r.transmission - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quarter_rotation_is_transparent_at_k0_equal_2m() {
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::rotation(FRAC_PI_2)).unwrap();
        let r = transmission_probability(&v, 1.0, &lat).unwrap();
        assert!((r.transmission - 1.0).abs() < 1e-15);
    }

    #[test]
    fn epsilon_strength_four() {
        // 1 / (1 + u²k0²/16m²) with u = 4, m = 1/2, k0 = 1
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::epsilon(4.0)).unwrap();
        let r = transmission_probability(&v, 1.0, &lat).unwrap();
        assert!((r.transmission - 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_wavenumber() {
        let lat = LatticeParams::default();
        let id = ContactInteraction::identity();
        assert_eq!(
            transmission_probability(&id, 0.0, &lat),
            Err(KpbError::NonPositiveWavenumber(0.0))
        );
        assert!(transmission_probability(&id, -1.0, &lat).is_err());
        assert!(transmission_probability(&id, f64::NAN, &lat).is_err());
    }

    #[test]
    fn profile_requires_ascending_list() {
        let lat = LatticeParams::default();
        let id = ContactInteraction::identity();
        assert_eq!(
            limit_profile(&id, &lat, &[1.0, 3.0, 2.0]),
            Err(KpbError::UnsortedWavenumbers(2))
        );
        assert_eq!(limit_profile(&id, &lat, &[1.0, 2.0]).unwrap().len(), 2);
    }

    #[test]
    fn hyperbolic_reflects_at_high_energy() {
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::hyperbolic(1.0)).unwrap();
        let profile = limit_profile(&v, &lat, &[1.0, 10.0, 1e3]).unwrap();
        assert!(profile[2].transmission < 1e-4);
        assert!(profile[2].transmission < profile[1].transmission);
    }
}
