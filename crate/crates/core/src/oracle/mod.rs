//! Independent numerical cross-checks.
//!
//! Nothing here is used to compute bands or transmission; these routines
//! recompute the same quantities along a different route so that the closed
//! forms in [`crate::propagator`] and [`crate::scattering`] can be checked.
//!
//! - [`expm2`] / [`expm2_complex`]: 2x2 matrix exponential by scaling and
//!   squaring of a truncated Taylor series.
//! - [`eigencheck_g`]: the plane-wave eigenvectors `u±` of `G(x)` and `v±` of
//!   `G†(x)`, with their bi-orthogonality.
//! - [`bloch_consistency`]: the periodic-part formulation, where the Bloch
//!   condition reads `det(I - G̃(a) Ṽ) = 0`.

mod battery;

pub use battery::{random_sl2r, run_battery, BatteryConfig, BatteryReport, CheckResult};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::connection::ContactInteraction;
use crate::error::{ensure_finite, KpbError, Result};
use crate::lattice::{Energy, LatticeParams};
use crate::matrix::{CMatrix2, Mat2, Matrix2};
use crate::propagator::{generator, trace_function};

/// Scalars the matrix exponential can run over.
pub trait ExpmScalar:
    Copy
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
{
    fn modulus(self) -> f64;
}

impl ExpmScalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl ExpmScalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

fn norm_inf<T: ExpmScalar>(m: &Mat2<T>) -> f64 {
    if m.rows.iter().flatten().any(|x| !x.modulus().is_finite()) {
        return f64::INFINITY;
    }
    m.rows
        .iter()
        .map(|r| r[0].modulus() + r[1].modulus())
        .fold(0.0, f64::max)
}

const TAYLOR_MAX_TERMS: usize = 30;

/// Inputs beyond this norm are refused rather than squared a thousand times.
const MAX_INPUT_NORM: f64 = 1e12;

/// `exp(A)` for a 2x2 matrix.
///
/// `A` is scaled by `2^-s` until its norm is at most 1/2, the Taylor series
/// is summed until terms drop below `1e-18` relative, and the result is
/// squared `s` times.
pub fn expm<T: ExpmScalar>(a: &Mat2<T>) -> Result<Mat2<T>> {
    let norm = norm_inf(a);
    if !norm.is_finite() || norm > MAX_INPUT_NORM {
        return Err(KpbError::ExpmOverflow(norm));
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.map(|x| x * 2f64.powi(-squarings));

    let mut sum = Mat2::<T>::identity();
    let mut term = Mat2::<T>::identity();
    for n in 1..=TAYLOR_MAX_TERMS {
        term = (term * scaled).map(|x| x * (1.0 / n as f64));
        sum = sum + term;
        if norm_inf(&term) <= 1e-18 * norm_inf(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    let out_norm = norm_inf(&sum);
    if !out_norm.is_finite() {
        return Err(KpbError::ExpmOverflow(norm));
    }
    Ok(sum)
}

pub fn expm2(a: &Matrix2) -> Result<Matrix2> {
    expm(a)
}

pub fn expm2_complex(a: &CMatrix2) -> Result<CMatrix2> {
    expm(a)
}

/// `G(x)` computed as `expm(H x)`.
pub fn propagator_by_expm(x: f64, energy: Energy, lat: &LatticeParams) -> Result<Matrix2> {
    ensure_finite(x, "displacement")?;
    expm2(&generator(energy, lat).scale(x))
}

/// `Tr(expm(H a) V)`, the oracle value of the trace function.
pub fn trace_by_expm(energy: Energy, v: &ContactInteraction, lat: &LatticeParams) -> Result<f64> {
    let g = propagator_by_expm(lat.spacing(), energy, lat)?;
    Ok((g * v.as_matrix()).trace())
}

type CVec2 = [Complex64; 2];

fn dot_conj(a: &CVec2, b: &CVec2) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn vec_diff_norm(a: &CVec2, b: &CVec2) -> f64 {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

fn scale_vec(s: Complex64, v: &CVec2) -> CVec2 {
    [s * v[0], s * v[1]]
}

/// Right eigenvectors `u±` of `G(x)` and `v±` of `G†(x)` at wavenumber `k0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthoPair {
    pub u_plus: CVec2,
    pub u_minus: CVec2,
    pub v_plus: CVec2,
    pub v_minus: CVec2,
}

impl BiorthoPair {
    /// `u± = (1, ±i k0/2m)/√2`, `v± = (1, ±i 2m/k0)/√2`.
    pub fn new(k0: f64, lat: &LatticeParams) -> Result<Self> {
        ensure_finite(k0, "wavenumber")?;
        if k0 <= 0.0 {
            return Err(KpbError::NonPositiveWavenumber(k0));
        }
        let two_m = 2.0 * lat.mass();
        let norm = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        let i = Complex64::i();
        Ok(Self {
            u_plus: [norm, norm * i * (k0 / two_m)],
            u_minus: [norm, -norm * i * (k0 / two_m)],
            v_plus: [norm, norm * i * (two_m / k0)],
            v_minus: [norm, -norm * i * (two_m / k0)],
        })
    }

    /// Largest deviation from `v±†u± = 1`, `v∓†u± = 0`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let one = Complex64::one();
        [
            (dot_conj(&self.v_plus, &self.u_plus) - one).norm(),
            (dot_conj(&self.v_minus, &self.u_minus) - one).norm(),
            dot_conj(&self.v_minus, &self.u_plus).norm(),
            dot_conj(&self.v_plus, &self.u_minus).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    /// `max |G u± - e^{±ik0x} u±|`.
    pub right_residual: f64,
    /// `max |G† v± - e^{∓ik0x} v±|`.
    pub left_residual: f64,
    pub biorthogonality_residual: f64,
}

impl EigenReport {
    pub fn max_residual(&self) -> f64 {
        self.right_residual
            .max(self.left_residual)
            .max(self.biorthogonality_residual)
    }
}

/// Checks the plane-wave eigen-decomposition of `G(x) = expm(H x)`.
pub fn eigencheck_g(x: f64, energy: Energy, lat: &LatticeParams) -> Result<EigenReport> {
    let k0 = energy
        .k0(lat)
        .ok_or(KpbError::NonPositiveWavenumber(energy.value()))?;
    let pair = BiorthoPair::new(k0, lat)?;
    let g = propagator_by_expm(x, energy, lat)?.to_complex();
    let g_adj = g.adjoint();
    let phase = Complex64::from_polar(1.0, k0 * x);

    let right_residual =
        vec_diff_norm(&g.apply(pair.u_plus), &scale_vec(phase, &pair.u_plus)).max(vec_diff_norm(
            &g.apply(pair.u_minus),
            &scale_vec(phase.conj(), &pair.u_minus),
        ));
    let left_residual = vec_diff_norm(
        &g_adj.apply(pair.v_plus),
        &scale_vec(phase.conj(), &pair.v_plus),
    )
    .max(vec_diff_norm(
        &g_adj.apply(pair.v_minus),
        &scale_vec(phase, &pair.v_minus),
    ));
    Ok(EigenReport {
        right_residual,
        left_residual,
        biorthogonality_residual: pair.biorthogonality_residual(),
    })
}

/// `|T|²` as `|v₊† V⁻¹ u₊|⁻²`, evaluated with complex vectors.
pub fn transmission_by_eigenvectors(
    v: &ContactInteraction,
    k0: f64,
    lat: &LatticeParams,
) -> Result<f64> {
    let pair = BiorthoPair::new(k0, lat)?;
    let v_inv = v.inverse().as_matrix().to_complex();
    let amp = dot_conj(&pair.v_plus, &v_inv.apply(pair.u_plus));
    Ok(1.0 / amp.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochReport {
    /// `|Tr(G̃(a)Ṽ) - e^{-ika} f(E)|`; holds for every `(E, k)`.
    pub trace_relation: f64,
    /// `|Tr(G̃(a)Ṽ) - (1 + e^{-2ika})|`; vanishes on shell.
    pub dispersion_trace: f64,
    /// `|det(I - G̃(a)Ṽ)|`; vanishes on shell.
    pub det: f64,
    /// Deviation of `expm(H̃ a)` from its closed form.
    pub closed_form: f64,
}

/// Rebuilds the Bloch condition in the periodic-part representation
/// `φ = e^{ikx} u(x)`.
///
/// The change of basis is taken at `x = 0`, `M = [[1, 0], [ik/2m, 1]]`; every
/// quantity checked is a trace or determinant and so does not depend on it.
pub fn bloch_consistency(
    energy: Energy,
    k: f64,
    v: &ContactInteraction,
    lat: &LatticeParams,
) -> Result<BlochReport> {
    ensure_finite(k, "Bloch wavenumber")?;
    let two_m = 2.0 * lat.mass();
    let a = lat.spacing();
    let i = Complex64::i();
    let ik = i * k;
    let q = energy.k0_squared(lat);

    let m = CMatrix2::new(1.0.into(), 0.0.into(), ik * (1.0 / two_m), 1.0.into());
    let m_inv = CMatrix2::new(1.0.into(), 0.0.into(), -ik * (1.0 / two_m), 1.0.into());
    let v_tilde = m_inv * v.as_matrix().to_complex() * m;

    let h_tilde = CMatrix2::new(
        0.0.into(),
        two_m.into(),
        ((k * k - q) / two_m).into(),
        -ik * 2.0,
    );
    let g_tilde = expm2_complex(&h_tilde.map(|x| x * a))?;
    let x = g_tilde * v_tilde;

    let f = trace_function(energy, v, lat);
    let phase = Complex64::from_polar(1.0, -k * a);
    let trace_relation = (x.trace() - phase * f).norm();
    let dispersion_trace = (x.trace() - (Complex64::one() + phase * phase)).norm();
    let det = (CMatrix2::identity() - x).det().norm();

    let (c, s) = crate::propagator::cos_sinc(q, a);
    let inner = CMatrix2::new(ik, two_m.into(), ((k * k - q) / two_m).into(), -ik);
    let closed = (CMatrix2::identity().scale(c.into()) + inner.scale(s.into())).scale(phase);
    Ok(BlochReport {
        trace_relation,
        dispersion_trace,
        det,
        closed_form: g_tilde.max_abs_diff(&closed),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::connection::{make_connection, FamilySpec};
    use crate::propagator::propagator;

    fn e(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    #[test]
    fn expm_of_zero_is_identity() {
        assert_eq!(expm2(&Matrix2::zero()).unwrap(), Matrix2::identity());
    }

    #[test]
    fn expm_of_diagonal() {
        let a = Matrix2::new(1.5, 0.0, 0.0, -40.0);
        let x = expm2(&a).unwrap();
        assert!((x.get(0, 0) / 1.5f64.exp() - 1.0).abs() < 1e-13);
        assert!((x.get(1, 1) / (-40f64).exp() - 1.0).abs() < 1e-11);
        assert_eq!(x.get(0, 1), 0.0);
    }

    #[test]
    fn expm_of_nilpotent() {
        let a = Matrix2::new(0.0, 7.0, 0.0, 0.0);
        let x = expm2(&a).unwrap();
        assert!(x.max_abs_diff(&Matrix2::new(1.0, 7.0, 0.0, 1.0)) < 1e-14);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 2.3;
        let a = CMatrix2::new(0.0.into(), (-t).into(), t.into(), 0.0.into());
        let x = expm2_complex(&a).unwrap();
        let (s, c) = t.sin_cos();
        let expected = Matrix2::new(c, -s, s, c).to_complex();
        assert!(x.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn expm_overflow_is_reported() {
        let a = Matrix2::new(1e300, 1e300, 0.0, 0.0);
        assert!(matches!(expm2(&a), Err(KpbError::ExpmOverflow(_))));
        let a = Matrix2::new(1e3, 0.0, 0.0, 0.0);
        assert!(matches!(expm2(&a), Err(KpbError::ExpmOverflow(_))));
        let a = Matrix2::new(f64::NAN, 0.0, 0.0, 0.0);
        assert!(expm2(&a).is_err());
    }

    #[test]
    fn expm_matches_closed_form_propagator() {
        let lat = LatticeParams::default();
        for en in [-10.0, -0.3, 1e-6, 2.0, 37.0, 100.0] {
            let a = propagator_by_expm(1.0, e(en), &lat).unwrap();
            let b = propagator(1.0, e(en), &lat).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12, "E = {en}");
        }
    }

    #[test]
    fn eigencheck_at_half_period() {
        let lat = LatticeParams::default();
        let report = eigencheck_g(1.0, e(PI * PI), &lat).unwrap();
        assert!(report.max_residual() < 1e-12);
        assert!(eigencheck_g(1.0, e(-1.0), &lat).is_err());
    }

    #[test]
    fn biorthogonality_cancels_exactly() {
        let lat = LatticeParams::default();
        let pair = BiorthoPair::new(1.7, &lat).unwrap();
        assert_eq!(dot_conj(&pair.v_minus, &pair.u_plus), Complex64::zero());
        assert_eq!(dot_conj(&pair.v_plus, &pair.u_minus), Complex64::zero());
        assert!(pair.biorthogonality_residual() < 1e-15);
    }

    #[test]
    fn free_case_is_on_shell_at_k_equal_k0() {
        let lat = LatticeParams::default();
        let k0 = 1.2;
        let r = bloch_consistency(e(k0 * k0), k0, &ContactInteraction::identity(), &lat).unwrap();
        assert!(r.trace_relation < 1e-12);
        assert!(r.det < 1e-12);
        assert!(r.dispersion_trace < 1e-12);
        assert!(r.closed_form < 1e-12);
    }

    #[test]
    fn off_shell_fails_only_the_dispersion_checks() {
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::delta(2.0)).unwrap();
        let en = 3.0;
        let f = trace_function(e(en), &v, &lat);
        let k_on = (f / 2.0).acos();
        let on = bloch_consistency(e(en), k_on, &v, &lat).unwrap();
        assert!(on.det < 1e-9 && on.trace_relation < 1e-12);
        let off = bloch_consistency(e(en), k_on + 0.4, &v, &lat).unwrap();
        assert!(off.trace_relation < 1e-12);
        assert!(off.det > 1e-3);
    }

    #[test]
    fn transmission_oracle_agrees_with_closed_form() {
        let lat = LatticeParams::default();
        let v = make_connection(&FamilySpec::rotation(0.9)).unwrap();
        for k0 in [0.01, 0.7, 3.0, 120.0] {
            let a = transmission_by_eigenvectors(&v, k0, &lat).unwrap();
            let b = crate::scattering::transmission_probability(&v, k0, &lat)
                .unwrap()
                .transmission;
            assert!((a - b).abs() < 1e-12);
        }
    }
}
