use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kpb::commands;
use kpb::config::{parse_float, parse_matrix, parse_param_range, parse_window, ParamRange, Scale};
use kpb::{exit, CliError, RunConfig};
use kpb_core::{AxisMode, FamilyKind, LatticeParams, MissedBandWarning};

/// Band structure, dispersion and transmission for a periodic array of
/// generalized point interactions.
#[derive(Parser)]
#[command(name = "kpb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List band edges in an energy window.
    Bands(Common),
    /// Allowed/forbidden raster over family parameter × energy (or k0).
    Sweep(Common),
    /// Reduced-zone dispersion k(E) for every band in the window.
    Dispersion(Common),
    /// Single-obstacle transmission and reflection probabilities.
    Transmission(Common),
    /// Run the randomized oracle battery.
    Verify(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bands(_) => "bands",
            Command::Sweep(_) => "sweep",
            Command::Dispersion(_) => "dispersion",
            Command::Transmission(_) => "transmission",
            Command::Verify(_) => "verify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Bands(c)
            | Command::Sweep(c)
            | Command::Dispersion(c)
            | Command::Transmission(c)
            | Command::Verify(c) => c,
        }
    }
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Contact family: delta, epsilon, rotation, hyperbolic or raw.
    #[arg(long)]
    family: Option<FamilyKind>,
    /// Family parameter (accepts `pi`, `-pi/2`, ...).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_float)]
    param: Option<f64>,
    /// Sweep range `lo:hi:n`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_param_range)]
    param_range: Option<ParamRange>,
    /// Raw connection matrix `g,d,b,al` (row major, det 1).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
    matrix: Option<[f64; 4]>,
    /// Particle mass m.
    #[arg(long)]
    mass: Option<f64>,
    /// Lattice spacing a.
    #[arg(long)]
    lattice: Option<f64>,
    /// Window `lo:hi` (energy, k0 or incident k0 depending on the command).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<(f64, f64)>,
    /// Number of samples across the window.
    #[arg(long)]
    grid: Option<usize>,
    /// Vertical sweep axis: E or k0.
    #[arg(long)]
    mode: Option<AxisMode>,
    /// Spacing of the transmission k0 grid: log or linear.
    #[arg(long)]
    scale: Option<Scale>,
    /// Data output path (stdout if absent); a manifest is written alongside.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output path for `sweep`.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// RNG seed for `verify`.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random samples for `verify`.
    #[arg(long)]
    samples: Option<usize>,
    /// Residual threshold for `verify`.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Points per band for `dispersion`.
    #[arg(long)]
    points: Option<usize>,
    /// Exit with status 3 when a band may have been missed by the scan.
    #[arg(long)]
    strict_missed_bands: bool,
}

impl Common {
    /// Layers flags over the config file over defaults.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(kind) = self.family {
            cfg.family.kind = Some(kind);
        }
        if let Some(p) = self.param {
            cfg.family.param = Some(p);
        }
        if let Some(r) = self.param_range {
            cfg.family.param_range = Some(r);
        }
        if let Some(m) = self.matrix {
            cfg.family.matrix = Some(m);
        }
        if self.mass.is_some() || self.lattice.is_some() {
            let mass = self.mass.unwrap_or(cfg.lattice.mass());
            let spacing = self.lattice.unwrap_or(cfg.lattice.spacing());
            cfg.lattice =
                LatticeParams::new(mass, spacing).map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some((lo, hi)) = self.window {
            cfg.window.min = Some(lo);
            cfg.window.max = Some(hi);
        }
        if let Some(n) = self.grid {
            cfg.window.n = Some(n);
        }
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        if let Some(scale) = self.scale {
            cfg.scale = scale;
        }
        if let Some(out) = &self.out {
            cfg.output.out = Some(out.clone());
        }
        if let Some(svg) = &self.svg {
            cfg.output.svg = Some(svg.clone());
        }
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        if let Some(n) = self.samples {
            cfg.samples = Some(n);
        }
        if let Some(tol) = self.tolerance {
            cfg.tolerances.verify = tol;
        }
        if let Some(n) = self.points {
            cfg.dispersion_points = Some(n);
        }
        if self.strict_missed_bands {
            cfg.strict_missed_bands = true;
        }
        Ok(cfg)
    }
}

fn report_warnings(cfg: &RunConfig, warnings: &[MissedBandWarning]) -> Result<(), CliError> {
    for w in warnings {
        eprintln!(
            "warning: possible missed band in [{:e}, {:e}], recovered by midpoint probe",
            w.e_left, w.e_right
        );
    }
    if cfg.strict_missed_bands && !warnings.is_empty() {
        return Err(CliError::MissedBands(warnings.len()));
    }
    Ok(())
}

fn run(command: &Command) -> Result<(), CliError> {
    let cfg = command.common().resolve()?;
    let name = command.name();
    match command {
        Command::Bands(_) => {
            let out = commands::bands(&cfg)?;
            commands::emit(name, &cfg, &out.csv)?;
            report_warnings(&cfg, &out.warnings)
        }
        Command::Dispersion(_) => {
            let out = commands::dispersion(&cfg)?;
            commands::emit(name, &cfg, &out.csv)?;
            report_warnings(&cfg, &out.warnings)
        }
        Command::Sweep(_) => {
            let out = commands::sweep(&cfg)?;
            commands::emit(name, &cfg, &out.csv)?;
            match &out.svg {
                Some(svg) => commands::emit_svg(&cfg, svg),
                None => Ok(()),
            }
        }
        Command::Transmission(_) => {
            let csv = commands::transmission(&cfg)?;
            commands::emit(name, &cfg, &csv)
        }
        Command::Verify(_) => {
            let report = commands::verify(&cfg)?;
            let text = commands::format_report(&report);
            commands::emit(name, &cfg, &text)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Residual)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("kpb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
