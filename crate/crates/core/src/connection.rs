//! Connection matrices and the one-parameter families built from them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, KpbError, Result};
use crate::matrix::Matrix2;
use crate::tolerance::DET_TOLERANCE;

/// A time-reversal symmetric contact interaction, the real unimodular matrix
///
/// ```text
/// V = [[γ, δ],
///      [β, α]]
/// ```
///
/// acting on `(φ, φ'/2m)` across the obstacle. `αγ - βδ = 1` is enforced at
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct ContactInteraction {
    gamma: f64,
    delta: f64,
    beta: f64,
    alpha: f64,
}

impl ContactInteraction {
    /// Builds `[[gamma, delta], [beta, alpha]]`, rejecting `|det - 1| > 1e-12`.
    pub fn new(gamma: f64, delta: f64, beta: f64, alpha: f64) -> Result<Self> {
        Self::with_tolerance(gamma, delta, beta, alpha, DET_TOLERANCE)
    }

    pub fn with_tolerance(
        gamma: f64,
        delta: f64,
        beta: f64,
        alpha: f64,
        tolerance: f64,
    ) -> Result<Self> {
        for (v, name) in [
            (gamma, "gamma"),
            (delta, "delta"),
            (beta, "beta"),
            (alpha, "alpha"),
        ] {
            ensure_finite(v, name)?;
        }
        let det = alpha * gamma - beta * delta;
        if (det - 1.0).abs() > tolerance {
            return Err(KpbError::NotUnimodular { det, tolerance });
        }
        Ok(Self {
            gamma,
            delta,
            beta,
            alpha,
        })
    }

    /// Entries taken in row-major order `g, d, b, al`.
    pub fn from_row_major(entries: [f64; 4]) -> Result<Self> {
        Self::new(entries[0], entries[1], entries[2], entries[3])
    }

    pub fn identity() -> Self {
        Self {
            gamma: 1.0,
            delta: 0.0,
            beta: 0.0,
            alpha: 1.0,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn det(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.delta
    }

    pub fn as_matrix(&self) -> Matrix2 {
        Matrix2::new(self.gamma, self.delta, self.beta, self.alpha)
    }

    pub fn row_major(&self) -> [f64; 4] {
        [self.gamma, self.delta, self.beta, self.alpha]
    }

    /// `V⁻¹ = [[α, -δ], [-β, γ]]`.
    pub fn inverse(&self) -> Self {
        Self {
            gamma: self.alpha,
            delta: -self.delta,
            beta: -self.beta,
            alpha: self.gamma,
        }
    }

    /// `-V`, which has the same band spectrum as `V`.
    pub fn negated(&self) -> Self {
        Self {
            gamma: -self.gamma,
            delta: -self.delta,
            beta: -self.beta,
            alpha: -self.alpha,
        }
    }
}

impl TryFrom<[f64; 4]> for ContactInteraction {
    type Error = KpbError;

    fn try_from(entries: [f64; 4]) -> Result<Self> {
        Self::from_row_major(entries)
    }
}

impl From<ContactInteraction> for [f64; 4] {
    fn from(v: ContactInteraction) -> Self {
        v.row_major()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `[[1, 0], [v, 1]]`: continuous φ, jump in φ'.
    Delta,
    /// `[[1, u], [0, 1]]`: continuous φ', jump in φ.
    Epsilon,
    /// `[[cos p, -sin p], [sin p, cos p]]`, `p ∈ (-π, π]`.
    Rotation,
    /// `[[cosh p, sinh p], [sinh p, cosh p]]`.
    Hyperbolic,
    /// Any matrix supplied by the caller.
    Raw,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Delta,
        FamilyKind::Epsilon,
        FamilyKind::Rotation,
        FamilyKind::Hyperbolic,
        FamilyKind::Raw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Delta => "delta",
            FamilyKind::Epsilon => "epsilon",
            FamilyKind::Rotation => "rotation",
            FamilyKind::Hyperbolic => "hyperbolic",
            FamilyKind::Raw => "raw",
        }
    }

    /// Whether `param` is inside the family's domain.
    pub fn accepts(self, param: f64) -> bool {
        match self {
            FamilyKind::Rotation => param > -PI && param <= PI,
            _ => param.is_finite(),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A family member: the kind plus its strength (`v`, `u` or `p`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub param: f64,
    pub raw_matrix: Option<ContactInteraction>,
}

impl FamilySpec {
    pub fn delta(v: f64) -> Self {
        Self::of(FamilyKind::Delta, v)
    }

    pub fn epsilon(u: f64) -> Self {
        Self::of(FamilyKind::Epsilon, u)
    }

    pub fn rotation(p: f64) -> Self {
        Self::of(FamilyKind::Rotation, p)
    }

    pub fn hyperbolic(p: f64) -> Self {
        Self::of(FamilyKind::Hyperbolic, p)
    }

    pub fn raw(matrix: ContactInteraction) -> Self {
        Self {
            kind: FamilyKind::Raw,
            param: 0.0,
            raw_matrix: Some(matrix),
        }
    }

    pub fn of(kind: FamilyKind, param: f64) -> Self {
        Self {
            kind,
            param,
            raw_matrix: None,
        }
    }
}

/// Builds the connection matrix of a family member.
pub fn make_connection(spec: &FamilySpec) -> Result<ContactInteraction> {
    let p = spec.param;
    if spec.kind != FamilyKind::Raw {
        ensure_finite(p, "family parameter")?;
    }
    let v = match spec.kind {
        FamilyKind::Delta => ContactInteraction {
            gamma: 1.0,
            delta: 0.0,
            beta: p,
            alpha: 1.0,
        },
        FamilyKind::Epsilon => ContactInteraction {
            gamma: 1.0,
            delta: p,
            beta: 0.0,
            alpha: 1.0,
        },
        FamilyKind::Rotation => {
            if !FamilyKind::Rotation.accepts(p) {
                return Err(KpbError::RotationOutOfRange(p));
            }
            let (s, c) = p.sin_cos();
            ContactInteraction {
                gamma: c,
                delta: -s,
                beta: s,
                alpha: c,
            }
        }
        FamilyKind::Hyperbolic => {
            let (s, c) = (p.sinh(), p.cosh());
            ContactInteraction {
                gamma: c,
                delta: s,
                beta: s,
                alpha: c,
            }
        }
        FamilyKind::Raw => {
            let m = spec.raw_matrix.ok_or(KpbError::MissingRawMatrix)?;
            ContactInteraction::new(m.gamma, m.delta, m.beta, m.alpha)?
        }
    };
    Ok(v)
}
