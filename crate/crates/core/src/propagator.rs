//! Free propagation between obstacles and the Kronig-Penney trace function.
//!
//! With `q = 2mE` (so `q = k0²` above zero and `q = -κ²` below),
//!
//! ```text
//! H    = [[0, 2m], [-q/2m, 0]]
//! G(x) = C(x) I + S(x) H
//! C(x) = cos(k0 x)       | cosh(κ x)
//! S(x) = sin(k0 x) / k0  | sinh(κ x) / κ
//! ```
//!
//! `H` is real for every real energy, so the negative-energy branch is the
//! real continuation of the positive one. Near `E = 0` both `C` and `S` are
//! evaluated from their Taylor series in `z = q x²`.

use crate::connection::ContactInteraction;
use crate::error::{ensure_finite, Result};
use crate::lattice::{Energy, LatticeParams};
use crate::matrix::Matrix2;
use crate::tolerance::SERIES_THRESHOLD;

/// `(C(x), S(x))` for `q = 2mE`.
pub(crate) fn cos_sinc(q: f64, x: f64) -> (f64, f64) {
    let z = q * x * x;
    if z.abs() < SERIES_THRESHOLD * SERIES_THRESHOLD {
        // cos√z and sin√z/√z, four terms each
        let c = 1.0 - z / 2.0 * (1.0 - z / 12.0 * (1.0 - z / 30.0));
        let s = x * (1.0 - z / 6.0 * (1.0 - z / 20.0 * (1.0 - z / 42.0)));
        return (c, s);
    }
    if q > 0.0 {
        let k0 = q.sqrt();
        let (sin, cos) = (k0 * x).sin_cos();
        (cos, sin / k0)
    } else {
        let kappa = (-q).sqrt();
        let t = kappa * x;
        (t.cosh(), t.sinh() / kappa)
    }
}

/// The generator `H` of free propagation.
pub fn generator(energy: Energy, lat: &LatticeParams) -> Matrix2 {
    let two_m = 2.0 * lat.mass();
    let q = energy.k0_squared(lat);
    Matrix2::new(0.0, two_m, -q / two_m, 0.0)
}

/// `G(x) = exp(H x)`, the transfer matrix across a field-free stretch `x`.
pub fn propagator(x: f64, energy: Energy, lat: &LatticeParams) -> Result<Matrix2> {
    ensure_finite(x, "displacement")?;
    ensure_finite(energy.value(), "energy")?;
    let two_m = 2.0 * lat.mass();
    let q = energy.k0_squared(lat);
    let (c, s) = cos_sinc(q, x);
    Ok(Matrix2::new(c, two_m * s, -q * s / two_m, c))
}

/// `f(E) = Tr(G(a) V)`.
///
/// Above zero this is `(α+γ) cos(k0 a) + sin(k0 a) (2mβ/k0 - k0 δ/2m)`;
/// below zero the same expression continued to `k0 = iκ`.
pub fn trace_function(energy: Energy, v: &ContactInteraction, lat: &LatticeParams) -> f64 {
    trace_value(energy.value(), v, lat)
}

/// [`trace_function`] on a bare `f64`, for hot loops that already know the
/// energy is finite.
#[inline]
pub fn trace_value(energy: f64, v: &ContactInteraction, lat: &LatticeParams) -> f64 {
    let two_m = 2.0 * lat.mass();
    let q = two_m * energy;
    let (c, s) = cos_sinc(q, lat.spacing());
    (v.alpha() + v.gamma()) * c + s * (two_m * v.beta() - q * v.delta() / two_m)
}

/// `|f(E)| <= 2`: the energy lies in an allowed band.
pub fn band_condition(energy: Energy, v: &ContactInteraction, lat: &LatticeParams) -> bool {
    trace_function(energy, v, lat).abs() <= 2.0
}
