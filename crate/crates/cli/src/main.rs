//! Command-line front end: detuning sweeps to CSV, single-point evaluation,
//! hierarchy-versus-integrator comparison, and SVG plotting.

mod config;
mod csv;
mod svg;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dark_resonance::spectra::{self, find_features, FeatureReport};
use dark_resonance::{oracle, Error, SystemParams};

use config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// Bad flags, unreadable or invalid config, unwritable path.
    Usage,
    /// Numerical failure: singular resolvent, divergent integration, or too
    /// many failed sweep points.
    Numerical,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidParameter { .. }
            | Error::GridTooSmall { .. }
            | Error::NonUniformGrid { .. } => ExitKind::Usage,
            _ => ExitKind::Numerical,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "darkres",
    about = "Weak-probe susceptibility and group index of a four-level atom \
             with two perturbing fields on the upper transition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the probe detuning and write a CSV (optionally an SVG chart).
    Sweep {
        /// JSON configuration file.
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Override a config key, e.g. --override r=0.03 (repeatable).
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output CSV path (defaults to the config's output_path, then sweep.csv).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also write an SVG chart next to the CSV.
        #[arg(long)]
        plot: bool,
    },
    /// Evaluate χ and the group index at a single probe detuning.
    Point {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Probe detuning Δ_p.
        #[arg(long = "delta-p", value_name = "X", allow_hyphen_values = true)]
        delta_p: f64,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Compare the hierarchy result against the time-domain integrator.
    Oracle {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long = "delta-p", value_name = "X", allow_hyphen_values = true)]
        delta_p: f64,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Flip the harmonic pairing in the hierarchy resolvent (sign
        /// sensitivity experiment; expected to FAIL the comparison).
        #[arg(long = "flip-delta")]
        flip_delta: bool,
    },
    /// Render an SVG chart of χ′ (dashed) and χ″ (solid) from a sweep CSV.
    Plot {
        /// Input CSV, as produced by `sweep`.
        csv: PathBuf,
        /// Output SVG path (defaults to the CSV path with .svg extension).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Restrict the horizontal axis to [A, B].
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        xlim: Option<Vec<f64>>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(match e.kind {
                ExitKind::Usage => 1,
                ExitKind::Numerical => 2,
            })
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            overrides,
            out,
            plot,
        } => cmd_sweep(&config, &overrides, out.as_deref(), plot),
        Command::Point {
            config,
            delta_p,
            overrides,
        } => cmd_point(&config, &overrides, delta_p),
        Command::Oracle {
            config,
            delta_p,
            overrides,
            flip_delta,
        } => cmd_oracle(&config, &overrides, delta_p, flip_delta),
        Command::Plot { csv, out, xlim } => {
            let xlim = xlim.map(|v| (v[0], v[1]));
            cmd_plot(&csv, out.as_deref(), xlim)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError {
        kind: ExitKind::Usage,
        message: format!("cannot write `{}`: {e}", path.display()),
    })
}

fn summary_line(report: &FeatureReport, total: usize, failed: usize) -> String {
    let fmt_extrema = |v: &[spectra::Extremum]| -> String {
        v.iter()
            .map(|e| format!("({}, {:e})", e.delta_p, e.height))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mid = match report.mid_slope_sign {
        Some(1) => "+",
        Some(-1) => "-",
        Some(_) => "0",
        None => "n/a",
    };
    format!(
        "points={total} failed={failed} chi_im_maxima=[{}] chi_im_minima=[{}] mid_dispersion_slope={mid}",
        fmt_extrema(&report.maxima),
        fmt_extrema(&report.minima),
    )
}

fn cmd_sweep(
    config_path: &Path,
    overrides: &[String],
    out: Option<&Path>,
    plot_flag: bool,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config_path, overrides)?;
    let params = cfg.params();
    let spec = cfg.sweep_spec();
    let solver = cfg.solver_config();
    solver.validate()?;
    let result = spectra::sweep(&params, &spec, &solver)?;

    let failed = result.invalid_count();
    if failed * 10 > result.samples.len() {
        return Err(CliError {
            kind: ExitKind::Numerical,
            message: format!(
                "{failed} of {} sweep points failed; refusing to write a mostly-empty CSV",
                result.samples.len()
            ),
        });
    }

    let csv_text = csv::render(&result);
    let csv_path: PathBuf = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    write_file(&csv_path, &csv_text)?;

    let report = find_features(&result);
    println!("{}", summary_line(&report, result.samples.len(), failed));
    println!("wrote {}", csv_path.display());

    if plot_flag || cfg.emit_plot {
        // Plot from the emitted CSV text so the chart shows exactly what a
        // later `plot` invocation would.
        let samples = csv::parse(&csv_text)?;
        let svg_text = svg::render(&samples, None)?;
        let svg_path = csv_path.with_extension("svg");
        write_file(&svg_path, &svg_text)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn cmd_point(config_path: &Path, overrides: &[String], delta_p: f64) -> Result<(), CliError> {
    let cfg = RunConfig::load(config_path, overrides)?;
    let spec = cfg.sweep_spec();
    spec.validate()?;
    let solver = cfg.solver_config();
    solver.validate()?;
    let at = |dp: f64| -> SystemParams {
        SystemParams {
            delta_p: dp,
            ..cfg.params()
        }
    };
    let h = spec.step();
    let chi = spectra::susceptibility(&at(delta_p), &solver)?;
    let left = spectra::susceptibility(&at(delta_p - h), &solver)?;
    let right = spectra::susceptibility(&at(delta_p + h), &solver)?;
    // Same stencil arithmetic as the sweep, so a grid-aligned point
    // reproduces the CSV row bit for bit.
    let slope = (right.re - left.re) / (2.0 * h);
    let n_g = 1.0 + TAU * chi.re + TAU * spec.omega_p_carrier * slope;
    println!(
        "delta_p={:e} chi_re={:e} chi_im={:e} n_g={:e}",
        delta_p, chi.re, chi.im, n_g
    );
    Ok(())
}

fn cmd_oracle(
    config_path: &Path,
    overrides: &[String],
    delta_p: f64,
    flip_delta: bool,
) -> Result<(), CliError> {
    const TOLERANCE: f64 = 5e-4;
    let cfg = RunConfig::load(config_path, overrides)?;
    let params = SystemParams {
        delta_p,
        ..cfg.params()
    };
    let mut solver = cfg.solver_config();
    solver.flip_resolvent_sign = flip_delta;
    solver.validate()?;
    let integration = cfg.integration_config();

    let chi_floquet = spectra::susceptibility(&params, &solver)?;
    let scale = spectra::chi_scale(&params, &solver);
    let chi_oracle = oracle::oracle_susceptibility(&params, &integration, scale)?;
    let diff = (chi_floquet - chi_oracle).norm();

    println!("chi_floquet = {:e} + {:e}i", chi_floquet.re, chi_floquet.im);
    println!("chi_oracle  = {:e} + {:e}i", chi_oracle.re, chi_oracle.im);
    println!("difference  = {diff:e}");
    if diff <= TOLERANCE {
        println!("PASS (tolerance {TOLERANCE:e})");
    } else {
        println!("FAIL (tolerance {TOLERANCE:e})");
    }
    Ok(())
}

fn cmd_plot(
    csv_path: &Path,
    out: Option<&Path>,
    xlim: Option<(f64, f64)>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(csv_path).map_err(|e| CliError {
        kind: ExitKind::Usage,
        message: format!("cannot read `{}`: {e}", csv_path.display()),
    })?;
    let samples = csv::parse(&text)?;
    let svg_text = svg::render(&samples, xlim)?;
    let svg_path: PathBuf = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| csv_path.with_extension("svg"));
    write_file(&svg_path, &svg_text)?;
    println!("wrote {}", svg_path.display());
    Ok(())
}
