//! Command-line surface: subcommands, dispatch, file emission and exit
//! codes.
//!
//! Exit codes: 0 success, 1 config/usage error, 2 runtime or numerical
//! failure, 3 tolerance failure in a verification job (the report is
//! still written — "ran correctly, physics disagreed" is not a crash).

use std::f64::consts::TAU;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use cqed_core::{
    cavity_emission_fraction, derive_params, enhanced_emission_rate, DriveSpec, SpectrumResult,
};

use crate::config::{parse_config, Config, ConfigError, Format, JobKind};
use crate::svg::{self, Series};
use crate::sweep::{
    run_fig1, run_fig4, run_inset, run_oracle_compare, run_peaks, run_spectrum, ComparisonReport,
    SweepError, SweepJob,
};
use crate::table::{Cell, Table};

/// Environment variable overriding the output directory (the only
/// environment input the tool reads).
pub const OUT_DIR_ENV: &str = "CQED_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "cqed",
    version,
    about = "Weak-field spectra of a driven cavity QED system, with a Lindblad steady-state cross-check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the derived parameters (cooperativities, saturation photon
    /// number, enhanced emission rate) for the configured rates
    Params(CommonArgs),
    /// Weak-field spectra on the configured detuning grid
    Spectrum(CommonArgs),
    /// Closed-form and numeric doublet positions per cooperativity
    Peaks(CommonArgs),
    /// Resonant response versus cooperativity
    Inset(CommonArgs),
    /// Fluorescence spectra family and the single-peak/doublet transition
    Fig1(CommonArgs),
    /// Doublet positions versus cooperativity, optionally with the oracle
    Fig4(CommonArgs),
    /// Brute-force Lindblad steady states against the closed forms
    OracleCompare(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Path to the JSON config file
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides config and CQED_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip all oracle computations
    #[arg(long)]
    no_oracle: bool,
    /// Worker threads for sweeps (default: logical cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Core(#[from] cqed_core::Error),
    #[error("{0}")]
    Plot(#[from] svg::PlotWriteError),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Core(c) => CliError::Core(c),
            SweepError::Pool(p) => CliError::Pool(p),
        }
    }
}

/// Entry point used by `main` and by tests; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let (args, job_kind) = match &cli.command {
        Command::Params(a) => (a, None),
        Command::Spectrum(a) => (a, Some(JobKind::Spectrum)),
        Command::Peaks(a) => (a, None),
        Command::Inset(a) => (a, Some(JobKind::Inset)),
        Command::Fig1(a) => (a, Some(JobKind::Fig1)),
        Command::Fig4(a) => (a, Some(JobKind::Fig4)),
        Command::OracleCompare(a) => (a, Some(JobKind::OracleCompare)),
    };
    match dispatch(&cli.command, args, job_kind) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(
    command: &Command,
    args: &CommonArgs,
    job_kind: Option<JobKind>,
) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| {
        // An unreadable config is a config error, not a runtime failure.
        CliError::Config(ConfigError::Invalid(vec![format!(
            "cannot read config {}: {source}",
            args.config.display()
        )]))
    })?;
    let config = parse_config(&text)?;

    if let Command::Params(_) = command {
        print_params(&config);
        return Ok(0);
    }

    let kind = match command {
        Command::Peaks(_) => {
            // Peaks reuses whatever cooperativity list the job carries.
            let job = config.job.as_ref().ok_or_else(|| {
                ConfigError::Invalid(vec![
                    "a `job` block with c_list, c_grid or n_list is required for `peaks`".into(),
                ])
            })?;
            job.kind
        }
        _ => job_kind.expect("non-params commands carry a job kind"),
    };

    let job = SweepJob::from_config(&config, kind, args.no_oracle, args.jobs)?;
    let emitter = Emitter::new(args, &config)?;

    match command {
        Command::Spectrum(_) => {
            let results = run_spectrum(&job)?;
            emit_spectra(&emitter, "spectrum", &results)?;
            let mut series = Vec::new();
            for (c, spec) in &results {
                series.push(spectrum_series(format!("X, C={c}"), spec, |p| p.transmission));
                series.push(spectrum_series(format!("2Re(xp), C={c}"), spec, |p| p.cross_term));
            }
            emitter.plot("spectrum", "Weak-field spectra", "Ω/2π (MHz)", "normalized intensity", &series)?;
            Ok(0)
        }
        Command::Peaks(_) => {
            let rows = run_peaks(&job)?;
            let mut table = Table::new(&[
                "c",
                "omega_X_over_2pi_MHz",
                "omega_xp_over_2pi_MHz",
                "height_X",
                "height_xp",
                "is_doublet_X",
                "is_doublet_xp",
                "omega_X_numeric_over_2pi_MHz",
                "omega_xp_numeric_over_2pi_MHz",
            ]);
            for r in &rows {
                table.push(vec![
                    Cell::Float(r.c),
                    Cell::opt_float(r.transmission_detuning.map(|o| o / TAU)),
                    Cell::opt_float(r.emission_detuning.map(|o| o / TAU)),
                    Cell::Float(r.transmission_height),
                    Cell::Float(r.emission_height),
                    Cell::Bool(r.transmission_detuning.is_some()),
                    Cell::Bool(r.emission_detuning.is_some()),
                    Cell::Float(r.transmission_numeric / TAU),
                    Cell::Float(r.emission_numeric / TAU),
                ]);
            }
            emitter.table("peaks", &table)?;
            Ok(0)
        }
        Command::Inset(_) => {
            let out = run_inset(&job)?;
            let mut table = Table::new(&["c", "X0", "F_cross0", "p_sq0"]);
            for r in &out.rows {
                table.push(vec![
                    Cell::Float(r.c),
                    Cell::Float(r.transmission),
                    Cell::Float(r.cross_term),
                    Cell::Float(r.polarization_sq),
                ]);
            }
            emitter.table("inset", &table)?;
            let series = vec![
                Series {
                    label: "X(0)".into(),
                    points: out.rows.iter().map(|r| (r.c, r.transmission)).collect(),
                },
                Series {
                    label: "2Re(xp)(0)".into(),
                    points: out.rows.iter().map(|r| (r.c, r.cross_term)).collect(),
                },
                Series {
                    label: "|p|²(0)".into(),
                    points: out.rows.iter().map(|r| (r.c, r.polarization_sq)).collect(),
                },
            ];
            emitter.plot("inset", "Resonant response vs cooperativity", "C", "normalized intensity", &series)?;
            println!(
                "resonant cross term peaks at C = {} with value {}",
                out.argmax_c, out.argmax_value
            );
            Ok(0)
        }
        Command::Fig1(_) => {
            let out = run_fig1(&job)?;
            emit_spectra(&emitter, "fig1", &out.curves)?;
            let mut table = Table::new(&[
                "c",
                "omega_xp_over_2pi_MHz",
                "omega_xp_numeric_over_2pi_MHz",
                "split_numeric",
                "peak_height",
            ]);
            for s in &out.summary {
                table.push(vec![
                    Cell::Float(s.c),
                    Cell::opt_float(s.emission_detuning.map(|o| o / TAU)),
                    Cell::Float(s.emission_numeric / TAU),
                    Cell::Bool(s.split_numeric),
                    Cell::Float(s.height),
                ]);
            }
            emitter.table("fig1_summary", &table)?;
            let mut transition = Table::new(&["c_single_peak", "c_double_peak"]);
            if let Some((lo, hi)) = out.transition {
                transition.push(vec![Cell::Float(lo), Cell::Float(hi)]);
            }
            emitter.table("fig1_transition", &transition)?;
            let series: Vec<Series> = out
                .curves
                .iter()
                .map(|(c, spec)| spectrum_series(format!("C={c}"), spec, |p| p.cross_term))
                .collect();
            emitter.plot(
                "fig1",
                "Spontaneous emission into the mode",
                "Ω/2π (MHz)",
                "2Re(xp) / Y",
                &series,
            )?;
            match out.transition {
                Some((lo, hi)) => println!("argmax leaves the origin between C = {lo} and C = {hi}"),
                None => println!("no single-peak/doublet transition inside the c list"),
            }
            Ok(0)
        }
        Command::Fig4(_) => {
            let out = run_fig4(&job)?;
            let mut table = Table::new(&[
                "c",
                "n_atoms",
                "omega_X_over_2pi_MHz",
                "omega_xp_over_2pi_MHz",
                "omega_X_numeric_over_2pi_MHz",
                "omega_xp_numeric_over_2pi_MHz",
                "oracle_argmax_over_2pi_MHz",
            ]);
            for r in &out.rows {
                table.push(vec![
                    Cell::Float(r.c),
                    match r.n_atoms {
                        Some(n) => Cell::Int(n as i64),
                        None => Cell::Empty,
                    },
                    Cell::opt_float(r.transmission_detuning.map(|o| o / TAU)),
                    Cell::opt_float(r.emission_detuning.map(|o| o / TAU)),
                    Cell::Float(r.transmission_numeric / TAU),
                    Cell::Float(r.emission_numeric / TAU),
                    Cell::opt_float(r.oracle_detuning.map(|o| o / TAU)),
                ]);
            }
            emitter.table("fig4", &table)?;
            let tr: Vec<(f64, f64)> = out
                .rows
                .iter()
                .filter_map(|r| r.transmission_detuning.map(|o| (r.c, o / TAU)))
                .collect();
            let em: Vec<(f64, f64)> = out
                .rows
                .iter()
                .filter_map(|r| r.emission_detuning.map(|o| (r.c, o / TAU)))
                .collect();
            if tr.len() >= 2 && em.len() >= 2 {
                let series = vec![
                    Series { label: "Ω_X".into(), points: tr },
                    Series { label: "Ω_xp".into(), points: em },
                ];
                emitter.plot(
                    "fig4",
                    "Doublet position vs cooperativity",
                    "C",
                    "Ω/2π (MHz)",
                    &series,
                )?;
            } else if emitter.wants(Format::Svg) {
                eprintln!("fig4: too few split entries to draw the doublet plot, skipping SVG");
            }
            Ok(0)
        }
        Command::OracleCompare(_) => {
            if !job.oracle_enabled {
                return Err(ConfigError::Invalid(vec![
                    "oracle-compare needs the oracle; drop --no-oracle / oracle.enabled=false"
                        .into(),
                ])
                .into());
            }
            let report = run_oracle_compare(&job)?;
            emit_comparison(&emitter, &report)?;
            print_comparison_summary(&report);
            Ok(if report.all_passed { 0 } else { 3 })
        }
        Command::Params(_) => unreachable!("handled above"),
    }
}

fn print_params(config: &Config) {
    let rates = config.system_rates(config.n_atoms);
    let drive = DriveSpec::new(0.0, 0.0).expect("zero drive is valid");
    let p = derive_params(&rates, &drive);
    let (c1_prime, fraction) = cavity_emission_fraction(&rates);
    let (g, kappa, gamma) = config.rates_mhz;
    println!("rates: g/2pi = {g} MHz, kappa/2pi = {kappa} MHz, gamma/2pi = {gamma} MHz, N = {}", rates.n_atoms());
    println!("C1 (single-atom cooperativity)           = {}", p.c1);
    println!("C = N*C1                                 = {}", p.c);
    println!("n0 (saturation photon number)            = {}", p.n_sat);
    println!("gamma*(1+2*C1)/2pi (enhanced decay) MHz  = {}", enhanced_emission_rate(&rates) / TAU);
    println!("C1' = C1*2kappa/(gamma+2kappa)           = {c1_prime}");
    println!("escape fraction 2kappa/(gamma+2kappa)    = {fraction}");
}

fn spectrum_series(
    label: String,
    spec: &SpectrumResult,
    value: impl Fn(&cqed_core::WeakFieldPoint) -> f64,
) -> Series {
    Series {
        label,
        points: spec.points.iter().map(|p| (p.omega / TAU, value(p))).collect(),
    }
}

/// Spectrum CSV contract: these columns, exactly.
const SPECTRUM_COLUMNS: [&str; 6] =
    ["omega_over_2pi_MHz", "X", "F_cross", "p_sq", "F_total", "Y_residual"];

fn spectrum_table(spec: &SpectrumResult) -> Table {
    let mut table = Table::new(&SPECTRUM_COLUMNS);
    for p in &spec.points {
        table.push(vec![
            Cell::Float(p.omega / TAU),
            Cell::Float(p.transmission),
            Cell::Float(p.cross_term),
            Cell::Float(p.polarization_sq),
            Cell::Float(p.fluorescence),
            Cell::Float(p.energy_residual()),
        ]);
    }
    table
}

fn emit_spectra(
    emitter: &Emitter,
    prefix: &str,
    results: &[(f64, SpectrumResult)],
) -> Result<(), CliError> {
    for (c, spec) in results {
        emitter.table(&format!("{prefix}_c{c}"), &spectrum_table(spec))?;
    }
    Ok(())
}

fn emit_comparison(emitter: &Emitter, report: &ComparisonReport) -> Result<(), CliError> {
    let mut table = Table::new(&[
        "n_atoms",
        "y",
        "omega_over_2pi_MHz",
        "X_analytic",
        "X_oracle",
        "abs_gap",
        "rel_gap",
        "tolerance",
        "passed",
    ]);
    for r in &report.rows {
        table.push(vec![
            Cell::Int(r.n_atoms as i64),
            Cell::Float(r.y),
            Cell::Float(r.omega / TAU),
            Cell::Float(r.x_analytic),
            Cell::opt_float(r.x_oracle),
            Cell::Float(r.abs_gap),
            Cell::opt_float(r.rel_gap),
            Cell::Float(r.tolerance),
            Cell::Bool(r.passed),
        ]);
    }
    emitter.table("oracle_compare", &table)?;

    let mut exps = Table::new(&["n_atoms", "omega_over_2pi_MHz", "exponent", "passed"]);
    for e in &report.exponents {
        exps.push(vec![
            Cell::Int(e.n_atoms as i64),
            Cell::Float(e.omega / TAU),
            Cell::Float(e.exponent),
            Cell::Bool(e.passed),
        ]);
    }
    emitter.table("oracle_exponents", &exps)?;
    Ok(())
}

fn print_comparison_summary(report: &ComparisonReport) {
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    println!(
        "oracle comparison: {} rows, {} failed",
        report.rows.len(),
        failed
    );
    for (n, e) in &report.median_exponent {
        println!("N = {n}: median gap-scaling exponent = {e}");
    }
    println!("verdict: {}", if report.all_passed { "PASS" } else { "FAIL" });
}

/// Writes tables and plots into the resolved output directory in the
/// requested formats.
struct Emitter {
    dir: PathBuf,
    formats: Vec<Format>,
}

impl Emitter {
    fn new(args: &CommonArgs, config: &Config) -> Result<Self, CliError> {
        let dir = args
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .or_else(|| config.output.directory.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&dir)
            .map_err(|source| CliError::Io { path: dir.clone(), source })?;
        Ok(Self { dir, formats: config.output.formats.clone() })
    }

    fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }

    fn path(&self, name: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{name}.{ext}"))
    }

    fn table(&self, name: &str, table: &Table) -> Result<(), CliError> {
        if self.formats.contains(&Format::Csv) {
            let path = self.path(name, "csv");
            table
                .write_csv(&path)
                .map_err(|source| CliError::Io { path, source })?;
        }
        if self.formats.contains(&Format::Json) {
            let path = self.path(name, "json");
            table
                .write_json(&path)
                .map_err(|source| CliError::Io { path, source })?;
        }
        Ok(())
    }

    fn plot(
        &self,
        name: &str,
        title: &str,
        x_label: &str,
        y_label: &str,
        series: &[Series],
    ) -> Result<(), CliError> {
        if self.formats.contains(&Format::Svg) {
            svg::write_plot(&self.path(name, "svg"), title, x_label, y_label, series)?;
        }
        Ok(())
    }
}

