//! Band edges, Bloch dispersion and width/gap profiles.
//!
//! The allowed set is `{E : |f(E)| <= 2}`. Each grid point is classified as
//! above (`f > 2`), inside, or below (`f < -2`); every change of class between
//! neighbouring points is refined by bisection on `f - 2` or `f + 2`. A jump
//! straight from above to below (or back) is a band narrower than the grid
//! spacing and yields two edges in the same cell.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::connection::ContactInteraction;
use crate::error::{ensure_finite, KpbError, Result};
use crate::exec::{map_range, Execution};
use crate::lattice::LatticeParams;
use crate::propagator::trace_value;
use crate::tolerance::{CLAMP_TOLERANCE, EDGE_REL_TOLERANCE};

pub const DEFAULT_E_MIN: f64 = -25.0;
pub const DEFAULT_E_MAX: f64 = 120.0;
pub const DEFAULT_GRID_N: usize = 20_000;
pub const DEFAULT_DISPERSION_POINTS: usize = 101;

/// Which condition pins a band edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// `f = +2`, Bloch wavenumber `k = 0`.
    Plus,
    /// `f = -2`, Bloch wavenumber `k = π/a`.
    Minus,
    /// Truncated by the search window.
    Window,
}

impl EdgeKind {
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Plus => "+2",
            EdgeKind::Minus => "-2",
            EdgeKind::Window => "window",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One allowed energy interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub index: usize,
    pub e_lo: f64,
    pub e_hi: f64,
    pub edge_lo: EdgeKind,
    pub edge_hi: EdgeKind,
    /// The lower edge lies at or below the window minimum.
    pub open_below: bool,
    /// The upper edge lies at or above the window maximum.
    pub open_above: bool,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.e_hi - self.e_lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.e_lo + self.e_hi)
    }

    /// Width on the signed `k0` axis.
    pub fn width_k0(&self, lat: &LatticeParams) -> f64 {
        lat.signed_k0(self.e_hi) - lat.signed_k0(self.e_lo)
    }

    pub fn is_truncated(&self) -> bool {
        self.open_below || self.open_above
    }
}

/// A grid cell whose end points agree but whose midpoint does not.
///
/// The edges inside were recovered by splitting the cell, but a band (or gap)
/// touching the allowed boundary from one side could still hide in a cell
/// like this one. A finer grid removes the ambiguity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissedBandWarning {
    pub e_left: f64,
    pub e_right: f64,
}

impl fmt::Display for MissedBandWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "grid cell [{}, {}] hides two band edges; increase the grid size",
            self.e_left, self.e_right
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BandScan {
    pub bands: Vec<Band>,
    pub warnings: Vec<MissedBandWarning>,
}

/// A `(k, E)` sample on a band's reduced-zone dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub k: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Zone {
    Above,
    Inside,
    Below,
}

impl Zone {
    fn of(f: f64) -> Self {
        if f > 2.0 {
            Zone::Above
        } else if f < -2.0 {
            Zone::Below
        } else {
            Zone::Inside
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    energy: f64,
    kind: EdgeKind,
    entering: bool,
}

struct Scanner<'a> {
    v: &'a ContactInteraction,
    lat: &'a LatticeParams,
}

impl Scanner<'_> {
    fn f(&self, e: f64) -> f64 {
        trace_value(e, self.v, self.lat)
    }

    /// Bisects between a point outside the half-line `f <= 2` (or `f >= -2`
    /// for [`EdgeKind::Minus`]) and one inside it, returning the inside end.
    fn refine(&self, kind: EdgeKind, mut outside: f64, mut inside: f64) -> f64 {
        let admits = |f: f64| match kind {
            EdgeKind::Plus => f <= 2.0,
            _ => f >= -2.0,
        };
        for _ in 0..200 {
            let mid = 0.5 * (outside + inside);
            if mid == outside
                || mid == inside
                || (outside - inside).abs() <= 1e-15 * mid.abs().max(1.0)
            {
                break;
            }
            if admits(self.f(mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    }

    fn cell(
        &self,
        (lo, f_lo): (f64, f64),
        (hi, f_hi): (f64, f64),
        probe: bool,
        edges: &mut Vec<Edge>,
        warnings: &mut Vec<MissedBandWarning>,
    ) {
        use Zone::*;
        let edge = |energy, kind, entering| Edge {
            energy,
            kind,
            entering,
        };
        match (Zone::of(f_lo), Zone::of(f_hi)) {
            (a, b) if a == b => {
                if !probe {
                    return;
                }
                let mid = 0.5 * (lo + hi);
                let f_mid = self.f(mid);
                if Zone::of(f_mid) != a {
                    warnings.push(MissedBandWarning {
                        e_left: lo,
                        e_right: hi,
                    });
                    self.cell((lo, f_lo), (mid, f_mid), false, edges, warnings);
                    self.cell((mid, f_mid), (hi, f_hi), false, edges, warnings);
                }
            }
            (Above, Inside) => edges.push(edge(
                self.refine(EdgeKind::Plus, lo, hi),
                EdgeKind::Plus,
                true,
            )),
            (Inside, Above) => edges.push(edge(
                self.refine(EdgeKind::Plus, hi, lo),
                EdgeKind::Plus,
                false,
            )),
            (Below, Inside) => edges.push(edge(
                self.refine(EdgeKind::Minus, lo, hi),
                EdgeKind::Minus,
                true,
            )),
            (Inside, Below) => edges.push(edge(
                self.refine(EdgeKind::Minus, hi, lo),
                EdgeKind::Minus,
                false,
            )),
            (Above, Below) => {
                let enter = self.refine(EdgeKind::Plus, lo, hi);
                let leave = if self.f(enter) >= -2.0 {
                    self.refine(EdgeKind::Minus, hi, enter)
                } else {
                    enter
                };
                edges.push(edge(enter, EdgeKind::Plus, true));
                edges.push(edge(leave, EdgeKind::Minus, false));
            }
            (Below, Above) => {
                let enter = self.refine(EdgeKind::Minus, lo, hi);
                let leave = if self.f(enter) <= 2.0 {
                    self.refine(EdgeKind::Plus, hi, enter)
                } else {
                    enter
                };
                edges.push(edge(enter, EdgeKind::Minus, true));
                edges.push(edge(leave, EdgeKind::Plus, false));
            }
            _ => unreachable!("zone pairs are exhaustive"),
        }
    }
}

/// Locates every band in `[e_min, e_max]` using a uniform scan of `grid_n`
/// points refined by bisection.
pub fn find_band_edges(
    v: &ContactInteraction,
    lat: &LatticeParams,
    e_min: f64,
    e_max: f64,
    grid_n: usize,
) -> Result<BandScan> {
    find_band_edges_with(v, lat, e_min, e_max, grid_n, Execution::default())
}

pub fn find_band_edges_with(
    v: &ContactInteraction,
    lat: &LatticeParams,
    e_min: f64,
    e_max: f64,
    grid_n: usize,
    exec: Execution,
) -> Result<BandScan> {
    ensure_finite(e_min, "window minimum")?;
    ensure_finite(e_max, "window maximum")?;
    if e_min >= e_max {
        return Err(KpbError::InvalidWindow {
            min: e_min,
            max: e_max,
        });
    }
    if grid_n < 2 {
        return Err(KpbError::GridTooSmall {
            min: 2,
            got: grid_n,
        });
    }

    let scanner = Scanner { v, lat };
    let step = (e_max - e_min) / (grid_n - 1) as f64;
    let energy_at = |i: usize| {
        if i == grid_n - 1 {
            e_max
        } else {
            e_min + step * i as f64
        }
    };
    let samples: Vec<(f64, f64)> = map_range(grid_n, exec, |i| {
        let e = energy_at(i);
        (e, scanner.f(e))
    });

    let per_cell = map_range(grid_n - 1, exec, |i| {
        let mut edges = Vec::new();
        let mut warnings = Vec::new();
        scanner.cell(samples[i], samples[i + 1], true, &mut edges, &mut warnings);
        (edges, warnings)
    });
    let mut edges = Vec::new();
    let mut warnings = Vec::new();
    for (e, w) in per_cell {
        edges.extend(e);
        warnings.extend(w);
    }

    let starts_inside = Zone::of(samples[0].1) == Zone::Inside;
    let bands = assemble(&edges, starts_inside, e_min, e_max);
    Ok(BandScan { bands, warnings })
}

fn assemble(edges: &[Edge], starts_inside: bool, e_min: f64, e_max: f64) -> Vec<Band> {
    let mut bands: Vec<Band> = Vec::new();
    let mut open: Option<(f64, EdgeKind)> = starts_inside.then_some((e_min, EdgeKind::Window));

    for edge in edges {
        if edge.entering {
            // A zero-width gap between two bands is a touch, not a gap.
            if let Some(last) = bands.last_mut() {
                let tol = EDGE_REL_TOLERANCE * edge.energy.abs().max(1.0);
                if open.is_none() && edge.energy - last.e_hi <= tol {
                    let last = bands.pop().expect("checked above");
                    open = Some((last.e_lo, last.edge_lo));
                    continue;
                }
            }
            open = Some((edge.energy, edge.kind));
        } else if let Some((e_lo, edge_lo)) = open.take() {
            push_band(&mut bands, e_lo, edge_lo, edge.energy, edge.kind);
        }
    }
    if let Some((e_lo, edge_lo)) = open {
        push_band(&mut bands, e_lo, edge_lo, e_max, EdgeKind::Window);
    }

    for (i, band) in bands.iter_mut().enumerate() {
        band.index = i;
        band.open_below = band.edge_lo == EdgeKind::Window;
        band.open_above = band.edge_hi == EdgeKind::Window;
    }
    bands
}

fn push_band(bands: &mut Vec<Band>, e_lo: f64, edge_lo: EdgeKind, e_hi: f64, edge_hi: EdgeKind) {
    if e_hi > e_lo {
        bands.push(Band {
            index: 0,
            e_lo,
            e_hi,
            edge_lo,
            edge_hi,
            open_below: false,
            open_above: false,
        });
    }
}

/// Samples `k(E) = arccos(f(E)/2) / a` across a band at Chebyshev–Lobatto
/// energies, which cluster toward the edges where `k(E)` is steepest.
pub fn dispersion_curve(
    band: &Band,
    v: &ContactInteraction,
    lat: &LatticeParams,
    n_points: usize,
) -> Result<Vec<DispersionPoint>> {
    if n_points < 2 {
        return Err(KpbError::GridTooSmall {
            min: 2,
            got: n_points,
        });
    }
    let mid = band.midpoint();
    let half = 0.5 * band.width();
    let last = n_points - 1;
    (0..n_points)
        .map(|j| {
            let energy = match j {
                0 => band.e_lo,
                j if j == last => band.e_hi,
                j => mid - half * (PI * j as f64 / last as f64).cos(),
            };
            let half_f = trace_value(energy, v, lat) / 2.0;
            if half_f.abs() > 1.0 + CLAMP_TOLERANCE {
                return Err(KpbError::StaleBand {
                    e_lo: band.e_lo,
                    e_hi: band.e_hi,
                    energy,
                    f_half_abs: half_f.abs(),
                });
            }
            let k = half_f.clamp(-1.0, 1.0).acos() / lat.spacing();
            Ok(DispersionPoint { k, energy })
        })
        .collect()
}

/// Width of one band and the gap above it, on both the energy and signed
/// `k0` axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub index: usize,
    pub width_e: f64,
    pub width_k0: f64,
    pub gap_e: Option<f64>,
    pub gap_k0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandProfile {
    pub bands: Vec<Band>,
    pub rows: Vec<ProfileRow>,
    pub warnings: Vec<MissedBandWarning>,
}

impl BandProfile {
    pub fn widths_k0(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.width_k0).collect()
    }

    pub fn gaps_k0(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.gap_k0).collect()
    }

    pub fn widths_e(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.width_e).collect()
    }

    pub fn gaps_e(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.gap_e).collect()
    }
}

const PROFILE_MAX_PASSES: usize = 6;

/// Widths of the lowest `n_bands` bands and the gaps above each of them.
///
/// The search window grows until `n_bands + 1` closed bands are visible (the
/// extra band bounds the last gap) or the growth budget runs out, which is the
/// fate of spectra with no gaps at all such as free space.
pub fn band_width_and_gap_profile(
    v: &ContactInteraction,
    lat: &LatticeParams,
    n_bands: usize,
) -> Result<BandProfile> {
    if n_bands < 2 {
        return Err(KpbError::GridTooSmall {
            min: 2,
            got: n_bands,
        });
    }
    let a = lat.spacing();
    let mut e_min = DEFAULT_E_MIN;
    let mut k0_max = (n_bands + 2) as f64 * PI / a;
    let mut scan = BandScan::default();

    for _ in 0..PROFILE_MAX_PASSES {
        let e_max = lat.energy_from_signed_k0(k0_max);
        // at least 400 samples per π of k0 at the top of the window
        let de = (k0_max / lat.mass()) * PI / (400.0 * a);
        let grid_n = (((e_max - e_min) / de).ceil() as usize).max(DEFAULT_GRID_N);
        scan = find_band_edges(v, lat, e_min, e_max, grid_n)?;

        let lowest_open = scan.bands.first().is_some_and(|b| b.open_below);
        let closed = scan.bands.iter().filter(|b| !b.open_above).count();
        if lowest_open {
            e_min *= 4.0;
        }
        if closed < n_bands + 1 {
            k0_max *= 2.0;
        }
        if !lowest_open && closed > n_bands {
            break;
        }
    }

    let bands: Vec<Band> = scan.bands.iter().take(n_bands).copied().collect();
    let rows = bands
        .iter()
        .map(|b| {
            let next = scan.bands.get(b.index + 1);
            ProfileRow {
                index: b.index,
                width_e: b.width(),
                width_k0: b.width_k0(lat),
                gap_e: next.map(|n| n.e_lo - b.e_hi),
                gap_k0: next.map(|n| lat.signed_k0(n.e_lo) - lat.signed_k0(b.e_hi)),
            }
        })
        .collect();
    Ok(BandProfile {
        bands,
        rows,
        warnings: scan.warnings,
    })
}
