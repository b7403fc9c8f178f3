//! Band structure engine for a one-dimensional lattice of generalized contact
//! interactions.
//!
//! Each lattice site carries a zero-range obstacle described by a real
//! connection matrix `V ∈ SL(2,R)` acting on `(φ, φ'/2m)`. Between sites the
//! wavefunction evolves with the free propagator `G(x) = exp(H x)`, and the
//! Bloch condition reduces to the scalar equation `Tr(G(a) V) = 2 cos(k a)`.
//!
//! Module map:
//!
//! - [`matrix`]: real and complex 2x2 matrices.
//! - [`lattice`], [`connection`]: domain types and the one-parameter families.
//! - [`propagator`]: `G(x)`, the trace function and the band condition, valid
//!   for positive, zero and negative energies.
//! - [`bands`]: band-edge search, dispersion curves and width/gap profiles.
//! - [`scattering`]: single-obstacle transmission and reflection probabilities.
//! - [`oracle`]: independent numerical cross-checks (matrix exponential,
//!   bi-orthogonal eigenvectors, Bloch-space trace identities).
//! - [`sweep`]: parameter × energy rasters of the allowed set.
//!
//! Units use `ħ = 1`; the defaults `m = 1/2`, `a = 1` make `E = k0²`.

pub mod bands;
pub mod connection;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod propagator;
pub mod scattering;
pub mod sweep;
pub mod tolerance;

pub use bands::{
    band_width_and_gap_profile, dispersion_curve, find_band_edges, Band, BandProfile, BandScan,
    DispersionPoint, EdgeKind, MissedBandWarning,
};
pub use connection::{make_connection, ContactInteraction, FamilyKind, FamilySpec};
pub use error::{KpbError, Result};
pub use exec::Execution;
pub use lattice::{Energy, LatticeParams};
pub use matrix::{CMatrix2, Matrix2};
pub use propagator::{band_condition, propagator, trace_function};
pub use scattering::{limit_profile, transmission_probability, ScatteringResult};
pub use sweep::{AxisMode, SweepGrid};
pub use tolerance::Tolerances;

/// Crate version, recorded in output manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
