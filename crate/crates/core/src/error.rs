use thiserror::Error;

pub type Result<T> = std::result::Result<T, KpbError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KpbError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("connection matrix has det = {det}, expected 1 within {tolerance:e}")]
    NotUnimodular { det: f64, tolerance: f64 },

    #[error("rotation parameter {0} outside (-pi, pi]")]
    RotationOutOfRange(f64),

    #[error("family `raw` requires an explicit matrix")]
    MissingRawMatrix,

    #[error("lattice parameter `{name}` must be positive, got {value}")]
    NonPositiveLattice { name: &'static str, value: f64 },

    #[error("incident wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("wavenumber list must be sorted ascending (index {0})")]
    UnsortedWavenumbers(usize),

    #[error("invalid energy window [{min}, {max}]")]
    InvalidWindow { min: f64, max: f64 },

    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("band [{e_lo}, {e_hi}] is stale: |f/2| = {f_half_abs} at E = {energy}")]
    StaleBand {
        e_lo: f64,
        e_hi: f64,
        energy: f64,
        f_half_abs: f64,
    },

    #[error("axis must be strictly increasing")]
    NonIncreasingAxis,

    #[error("matrix exponential overflowed (norm {0:e})")]
    ExpmOverflow(f64),
}

pub(crate) fn ensure_finite(value: f64, what: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(KpbError::NonFinite(what))
    }
}
