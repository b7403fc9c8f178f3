//! One function per subcommand. Each returns the data file contents plus any
//! diagnostics; writing to disk or stdout is left to [`emit`].

use std::path::Path;

use kpb_core::bands::find_band_edges;
use kpb_core::oracle::{run_battery, BatteryConfig, BatteryReport};
use kpb_core::{
    dispersion_curve, transmission_probability, FamilyKind, MissedBandWarning, SweepGrid,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::csv::{float, Table};
use crate::error::CliError;
use crate::svg;

pub const BANDS_HEADER: [&str; 7] = [
    "band_index",
    "E_lo",
    "E_hi",
    "edge_lo",
    "edge_hi",
    "width_E",
    "width_k0",
];
pub const SWEEP_HEADER: [&str; 4] = ["param", "axis_value", "f_half", "allowed"];
pub const DISPERSION_HEADER: [&str; 3] = ["band_index", "k", "E"];
pub const TRANSMISSION_HEADER: [&str; 3] = ["k0", "T2", "R2"];

pub struct BandsOutput {
    pub csv: String,
    pub warnings: Vec<MissedBandWarning>,
}

/// Band-edge table. Band indices in the CSV start at 1.
pub fn bands(cfg: &RunConfig) -> Result<BandsOutput, CliError> {
    let v = cfg.connection()?;
    let (lo, hi, n) = cfg.energy_window()?;
    let scan = find_band_edges(&v, &cfg.lattice, lo, hi, n)?;
    let mut table = Table::new(&BANDS_HEADER);
    for b in &scan.bands {
        table.row(&[
            (b.index + 1).to_string(),
            float(b.e_lo),
            float(b.e_hi),
            b.edge_lo.label().to_owned(),
            b.edge_hi.label().to_owned(),
            float(b.width()),
            float(b.width_k0(&cfg.lattice)),
        ]);
    }
    Ok(BandsOutput {
        csv: table.into_string(),
        warnings: scan.warnings,
    })
}

pub struct SweepOutput {
    pub csv: String,
    pub svg: Option<String>,
}

pub fn sweep_grid(cfg: &RunConfig) -> Result<SweepGrid, CliError> {
    let params = cfg.sweep_params()?;
    let axis = cfg.sweep_axis()?;
    Ok(SweepGrid::compute(
        cfg.family_kind(),
        params,
        axis,
        cfg.mode,
        &cfg.lattice,
    )?)
}

/// Row-major raster: parameter outer, axis inner; `allowed` is `1` or `0`.
pub fn sweep(cfg: &RunConfig) -> Result<SweepOutput, CliError> {
    let grid = sweep_grid(cfg)?;
    let mut table = Table::new(&SWEEP_HEADER);
    for (i, &p) in grid.params.iter().enumerate() {
        let p = float(p);
        for (j, &x) in grid.axis.iter().enumerate() {
            table.row(&[
                p.clone(),
                float(x),
                float(grid.f_half_at(i, j)),
                u8::from(grid.allowed(i, j)).to_string(),
            ]);
        }
    }
    let svg = cfg
        .output
        .svg
        .as_ref()
        .map(|_| svg::render(&grid, param_symbol(cfg.family_kind())));
    Ok(SweepOutput {
        csv: table.into_string(),
        svg,
    })
}

fn param_symbol(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Delta => "v",
        FamilyKind::Epsilon => "u",
        FamilyKind::Rotation | FamilyKind::Hyperbolic => "p",
        FamilyKind::Raw => "",
    }
}

pub fn dispersion(cfg: &RunConfig) -> Result<BandsOutput, CliError> {
    let v = cfg.connection()?;
    let (lo, hi, n) = cfg.energy_window()?;
    let scan = find_band_edges(&v, &cfg.lattice, lo, hi, n)?;
    let mut table = Table::new(&DISPERSION_HEADER);
    for b in &scan.bands {
        let index = (b.index + 1).to_string();
        for p in dispersion_curve(b, &v, &cfg.lattice, cfg.dispersion_points())? {
            table.row(&[index.clone(), float(p.k), float(p.energy)]);
        }
    }
    Ok(BandsOutput {
        csv: table.into_string(),
        warnings: scan.warnings,
    })
}

pub fn transmission(cfg: &RunConfig) -> Result<String, CliError> {
    let v = cfg.connection()?;
    let mut table = Table::new(&TRANSMISSION_HEADER);
    for k0 in cfg.k0_grid()? {
        let r = transmission_probability(&v, k0, &cfg.lattice)?;
        table.row(&[float(k0), float(r.transmission), float(r.reflection)]);
    }
    Ok(table.into_string())
}

pub fn verify(cfg: &RunConfig) -> Result<BatteryReport, CliError> {
    if cfg.tolerances.verify.is_nan() || cfg.tolerances.verify <= 0.0 {
        return Err(CliError::Config(format!(
            "verify tolerance must be positive, got {}",
            cfg.tolerances.verify
        )));
    }
    let battery = BatteryConfig {
        samples: cfg.samples(),
        seed: cfg.seed(),
        lattice: cfg.lattice,
        tolerance: cfg.tolerances.verify,
        ..BatteryConfig::default()
    };
    Ok(run_battery(&battery)?)
}

/// Human-readable battery summary, one line per check.
pub fn format_report(report: &BatteryReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let relation = if c.lower_bound { ">" } else { "<" };
        out.push_str(&format!(
            "{:<28} n={:<6} {:.3e} {relation} {:.1e}  {}\n",
            c.name,
            c.samples,
            c.value,
            c.threshold,
            if c.passed() { "ok" } else { "FAIL" }
        ));
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
}

pub fn manifest(command: &str, cfg: &RunConfig) -> String {
    let m = Manifest {
        tool: "kpb",
        version: env!("CARGO_PKG_VERSION"),
        core_version: kpb_core::VERSION,
        command,
        config: cfg,
    };
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    text
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `data` to `--out` (plus a `<out>.manifest.json` sidecar) or stdout.
pub fn emit(command: &str, cfg: &RunConfig, data: &str) -> Result<(), CliError> {
    match &cfg.output.out {
        Some(path) => {
            write_file(path, data)?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".manifest.json");
            write_file(Path::new(&sidecar), &manifest(command, cfg))
        }
        None => {
            use std::io::Write as _;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(data.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn emit_svg(cfg: &RunConfig, svg: &str) -> Result<(), CliError> {
    match &cfg.output.svg {
        Some(path) => write_file(path, svg),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use kpb_core::FamilyKind;

    use super::*;
    use crate::config::WindowConfig;

    fn delta(v: f64) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.family.kind = Some(FamilyKind::Delta);
        cfg.family.param = Some(v);
        cfg
    }

    #[test]
    fn bands_table_has_header_and_rows() {
        let mut cfg = delta(1e6);
        cfg.window = WindowConfig {
            min: Some(1.0),
            max: Some(100.0),
            n: None,
        };
        let out = bands(&cfg).unwrap();
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines[0], BANDS_HEADER.join(","));
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,"));
    }

    #[test]
    fn transmission_rows_are_unitary() {
        let mut cfg = delta(1.0);
        cfg.window.n = Some(11);
        for line in transmission(&cfg).unwrap().lines().skip(1) {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells[1] + cells[2], 1.0);
        }
    }

    #[test]
    fn manifest_has_no_clock() {
        let text = manifest("bands", &delta(1.0));
        assert!(text.contains("\"version\""));
        assert!(!text.to_lowercase().contains("time"));
        assert_eq!(text, manifest("bands", &delta(1.0)));
    }

    #[test]
    fn missing_param_is_a_config_error() {
        let mut cfg = RunConfig::default();
        cfg.family.kind = Some(FamilyKind::Epsilon);
        assert!(matches!(bands(&cfg), Err(CliError::Config(_))));
    }
}
