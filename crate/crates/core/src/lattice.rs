use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, KpbError, Result};

/// Particle mass and lattice spacing, in units with `ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct LatticeParams {
    mass: f64,
    spacing: f64,
}

impl LatticeParams {
    pub const DEFAULT_MASS: f64 = 0.5;
    pub const DEFAULT_SPACING: f64 = 1.0;

    pub fn new(mass: f64, spacing: f64) -> Result<Self> {
        ensure_finite(mass, "mass")?;
        ensure_finite(spacing, "lattice spacing")?;
        if mass <= 0.0 {
            return Err(KpbError::NonPositiveLattice {
                name: "mass",
                value: mass,
            });
        }
        if spacing <= 0.0 {
            return Err(KpbError::NonPositiveLattice {
                name: "spacing",
                value: spacing,
            });
        }
        Ok(Self { mass, spacing })
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Signed wavenumber axis: `sqrt(2mE)` for `E >= 0`, `-sqrt(-2mE)` below.
    pub fn signed_k0(&self, energy: f64) -> f64 {
        let q = 2.0 * self.mass * energy;
        q.signum() * q.abs().sqrt()
    }

    /// Inverse of [`signed_k0`](Self::signed_k0).
    pub fn energy_from_signed_k0(&self, k0: f64) -> f64 {
        k0.signum() * k0 * k0 / (2.0 * self.mass)
    }
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self {
            mass: Self::DEFAULT_MASS,
            spacing: Self::DEFAULT_SPACING,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    #[serde(default = "default_mass")]
    mass: f64,
    #[serde(default = "default_spacing")]
    spacing: f64,
}

fn default_mass() -> f64 {
    LatticeParams::DEFAULT_MASS
}

fn default_spacing() -> f64 {
    LatticeParams::DEFAULT_SPACING
}

impl TryFrom<RawLattice> for LatticeParams {
    type Error = KpbError;

    fn try_from(raw: RawLattice) -> Result<Self> {
        Self::new(raw.mass, raw.spacing)
    }
}

impl From<LatticeParams> for RawLattice {
    fn from(lat: LatticeParams) -> Self {
        Self {
            mass: lat.mass,
            spacing: lat.spacing,
        }
    }
}

/// A real energy. Positive energies propagate with `k0 = sqrt(2mE)`, negative
/// ones decay with `κ = sqrt(-2mE)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Energy(f64);

impl Energy {
    pub fn new(value: f64) -> Result<Self> {
        ensure_finite(value, "energy")?;
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `2mE`, i.e. `k0²` with sign.
    #[inline]
    pub fn k0_squared(self, lat: &LatticeParams) -> f64 {
        2.0 * lat.mass() * self.0
    }

    pub fn k0(self, lat: &LatticeParams) -> Option<f64> {
        (self.0 > 0.0).then(|| self.k0_squared(lat).sqrt())
    }

    pub fn kappa(self, lat: &LatticeParams) -> Option<f64> {
        (self.0 < 0.0).then(|| (-self.k0_squared(lat)).sqrt())
    }
}

impl From<Energy> for f64 {
    fn from(e: Energy) -> f64 {
        e.0
    }
}
