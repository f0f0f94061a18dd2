//! Command-line driver: reproducible experiments wired from the core
//! samplers, evaluators, oracles, and renderers.
//!
//! Monte Carlo reps and grid rows run in parallel; results are collected
//! by index and reduced in a fixed order, so outputs are bitwise
//! deterministic for a fixed seed regardless of worker count.

use crate::io;
use crate::verify;
use clap::{Args, Parser, Subcommand};
use ege_core::charpoly::{eval_f, render_portrait, Grid};
use ege_core::clinalg::eigenvalues_default;
use ege_core::gaflimit::{sample_limit_function, GafParams, HSeries};
use ege_core::momentcomb::CovTable;
use ege_core::sampling::{derive_stream, sample_ege, EgeParams};
use ege_core::spectrum::{export_scatter, outlier_count, EllipseSpec};
use ege_core::tracestats::{aggregate_moments, compute_sample, MomentEstimate};
use ege_core::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(
    name = "ege-lab",
    about = "Elliptic Ginibre ensemble laboratory: portraits, trace statistics, limit samples, spectra, verification",
    version
)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Phase portrait of the normalised characteristic polynomial (PPM).
    Portrait(PortraitArgs),
    /// Limiting covariance table plus the exact identity-check report.
    Moments(MomentsArgs),
    /// Monte Carlo trace statistics with jackknife errors (CSV/JSON).
    Traces(TracesArgs),
    /// Draws of the limiting analytic function at one point (CSV).
    Gaf(GafArgs),
    /// Eigenvalue scatter and outlier count (CSV).
    Spectrum(SpectrumArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CommonSeed {
    /// Master seed; sample i uses the derived stream (seed, i).
    #[arg(long, env = "EGE_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub seed: CommonSeed,
    /// Pixels per side.
    #[arg(long, default_value_t = 512)]
    pub res: usize,
    #[arg(long, default_value_t = 0.0)]
    pub center_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center_im: f64,
    #[arg(long, default_value_t = 0.95)]
    pub half_width: f64,
    #[arg(long, default_value = "portrait.ppm")]
    pub out: String,
    /// Output format (ppm only for portraits).
    #[arg(long, default_value = "ppm")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[arg(long)]
    pub t: f64,
    /// Largest monomial degree tabulated.
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    #[arg(long, default_value = "covtable.json")]
    pub out: String,
    #[arg(long, default_value = "json")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct TracesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub seed: CommonSeed,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 5)]
    pub kmax: usize,
    #[arg(long, default_value = "traces.csv")]
    pub out: String,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct GafArgs {
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub seed: CommonSeed,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Series truncation of the Gaussian sum.
    #[arg(long, default_value_t = 40)]
    pub kmax: usize,
    /// Evaluation point.
    #[arg(long, default_value_t = 0.3)]
    pub center_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center_im: f64,
    #[arg(long, default_value = "gaf.csv")]
    pub out: String,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub seed: CommonSeed,
    /// Ellipse dilation for the outlier count.
    #[arg(long, default_value_t = 1.1)]
    pub inflation: f64,
    #[arg(long, default_value = "scatter.csv")]
    pub out: String,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Exact identity checks only (seconds).
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Everything, Monte Carlo suites included (minutes).
    #[arg(long)]
    pub full: bool,
}

// ---------------------------------------------------------------------
// Plain-config runners, shared by the CLI and the verification suite.

#[derive(Debug, Clone)]
pub struct PortraitConfig {
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    pub resolution: usize,
    pub center: Complex64,
    pub half_width: f64,
}

impl PortraitConfig {
    fn config_value(&self) -> Value {
        serde_json::json!({
            "subcommand": "portrait",
            "n": self.n,
            "t": self.t,
            "seed": self.seed,
            "res": self.resolution,
            "center_re": self.center.re,
            "center_im": self.center.im,
            "half_width": self.half_width,
        })
    }
}

/// Full PPM bytes for a portrait run; rows are evaluated in parallel and
/// reassembled in row order.
pub fn portrait_bytes(cfg: &PortraitConfig) -> Result<Vec<u8>> {
    let p = EgeParams::new(cfg.n, cfg.t, cfg.seed)?;
    let mut stream = derive_stream(p.seed, 0);
    let a = sample_ege(&mut stream, &p)?;
    let grid = Grid::new(cfg.center, cfg.half_width, cfg.resolution)?;
    let rows: Vec<Vec<ege_core::clinalg::ScaledComplex>> = (0..cfg.resolution)
        .into_par_iter()
        .map(|row| {
            (0..cfg.resolution)
                .map(|col| eval_f(&a, cfg.t, grid.pixel(row, col)).unwrap())
                .collect()
        })
        .collect();
    let values: Vec<_> = rows.into_iter().flatten().collect();
    let raster = render_portrait(&values, cfg.resolution, cfg.resolution)?;
    let cfg_line = io::config_line(&cfg.config_value());
    Ok(raster.to_ppm_bytes(&[cfg_line.as_str()]))
}

#[derive(Debug, Clone)]
pub struct TracesConfig {
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    pub reps: usize,
    pub kmax: usize,
}

impl TracesConfig {
    fn config_value(&self) -> Value {
        serde_json::json!({
            "subcommand": "traces",
            "n": self.n,
            "t": self.t,
            "seed": self.seed,
            "reps": self.reps,
            "kmax": self.kmax,
        })
    }
}

pub fn traces_estimate(cfg: &TracesConfig) -> Result<MomentEstimate> {
    let p = EgeParams::new(cfg.n, cfg.t, cfg.seed)?;
    let samples: std::result::Result<Vec<_>, Error> = (0..cfg.reps)
        .into_par_iter()
        .map(|i| compute_sample(&p, i as u64, cfg.kmax))
        .collect();
    aggregate_moments(&samples?)
}

pub fn traces_csv(cfg: &TracesConfig) -> Result<String> {
    let est = traces_estimate(cfg)?;
    Ok(io::moments_csv(&est, &cfg.config_value()))
}

pub fn traces_json(cfg: &TracesConfig) -> Result<String> {
    let est = traces_estimate(cfg)?;
    Ok(format!("{:#}\n", io::moments_json(&est, &cfg.config_value())))
}

#[derive(Debug, Clone)]
pub struct SpectrumConfig {
    pub n: usize,
    pub t: f64,
    pub seed: u64,
    pub inflation: f64,
}

/// Scatter CSV plus the outlier count at the configured inflation.
pub fn spectrum_csv(cfg: &SpectrumConfig) -> Result<(String, usize)> {
    let p = EgeParams::new(cfg.n, cfg.t, cfg.seed)?;
    let mut stream = derive_stream(p.seed, 0);
    let a = sample_ege(&mut stream, &p)?;
    let spec = eigenvalues_default(&a)?;
    let ellipse = EllipseSpec::new(cfg.t, cfg.inflation)?;
    let outliers = outlier_count(&spec, cfg.n, &ellipse)?;
    let config = serde_json::json!({
        "subcommand": "spectrum",
        "n": cfg.n,
        "t": cfg.t,
        "seed": cfg.seed,
        "inflation": cfg.inflation,
        "outliers": outliers,
    });
    Ok((io::scatter_csv(&export_scatter(&spec, cfg.n), &config), outliers))
}

#[derive(Debug, Clone)]
pub struct GafConfig {
    pub t: f64,
    pub seed: u64,
    pub reps: usize,
    pub truncation: usize,
    pub z: Complex64,
}

pub fn gaf_csv(cfg: &GafConfig) -> Result<String> {
    let params = GafParams::new(cfg.t, cfg.truncation, cfg.seed)?;
    let h = HSeries::compute(cfg.t, ege_core::momentcomb::H_COEFF_BUDGET)?;
    let zs = [cfg.z];
    let draws: std::result::Result<Vec<_>, Error> = (0..cfg.reps)
        .into_par_iter()
        .map(|i| sample_limit_function(&params, &h, i as u64, &zs).map(|v| v[0]))
        .collect();
    let rows: Vec<(usize, Complex64, Complex64)> =
        draws?.into_iter().enumerate().map(|(i, f)| (i, cfg.z, f)).collect();
    let config = serde_json::json!({
        "subcommand": "gaf",
        "t": cfg.t,
        "seed": cfg.seed,
        "reps": cfg.reps,
        "kmax": cfg.truncation,
        "center_re": cfg.z.re,
        "center_im": cfg.z.im,
    });
    Ok(io::gaf_csv(&rows, &config))
}

// ---------------------------------------------------------------------
// Dispatch.

/// Runs a parsed command; returns the process exit code.
pub fn run(cmd: Command) -> i32 {
    match dispatch(cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            verify::exit_code_for_error(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Portrait(args) => {
            if args.format != "ppm" {
                return Err(Error::Domain("portrait supports only --format ppm"));
            }
            let cfg = PortraitConfig {
                n: args.n,
                t: args.t,
                seed: args.seed.seed,
                resolution: args.res,
                center: Complex64::new(args.center_re, args.center_im),
                half_width: args.half_width,
            };
            let bytes = portrait_bytes(&cfg)?;
            write_file(&args.out, &bytes)?;
            println!("wrote {} ({} bytes)", args.out, bytes.len());
            Ok(0)
        }
        Command::Moments(args) => {
            if args.format != "json" {
                return Err(Error::Domain("moments supports only --format json"));
            }
            let table = CovTable::build(args.t, args.kmax);
            let config = serde_json::json!({
                "subcommand": "moments",
                "t": args.t,
                "kmax": args.kmax,
            });
            let json = format!("{:#}\n", io::covtable_json(&table, &config));
            write_file(&args.out, json.as_bytes())?;
            let (ok, report) = verify::exact_identities_report();
            println!("identity checks: {}", if ok { "pass" } else { "FAIL" });
            println!("  {report}");
            println!("wrote {}", args.out);
            Ok(if ok { 0 } else { 2 })
        }
        Command::Traces(args) => {
            // Beyond degree 12 the n^{-k/2} scaling drowns the statistic
            // in Monte Carlo noise.
            if args.kmax > 12 {
                return Err(Error::Domain("traces supports --kmax up to 12"));
            }
            let cfg = TracesConfig {
                n: args.n,
                t: args.t,
                seed: args.seed.seed,
                reps: args.reps,
                kmax: args.kmax,
            };
            let body = match args.format.as_str() {
                "csv" => traces_csv(&cfg)?,
                "json" => traces_json(&cfg)?,
                _ => return Err(Error::Domain("traces supports --format csv or json")),
            };
            write_file(&args.out, body.as_bytes())?;
            println!("wrote {}", args.out);
            Ok(0)
        }
        Command::Gaf(args) => {
            if args.format != "csv" {
                return Err(Error::Domain("gaf supports only --format csv"));
            }
            let cfg = GafConfig {
                t: args.t,
                seed: args.seed.seed,
                reps: args.reps,
                truncation: args.kmax,
                z: Complex64::new(args.center_re, args.center_im),
            };
            let body = gaf_csv(&cfg)?;
            write_file(&args.out, body.as_bytes())?;
            println!("wrote {}", args.out);
            Ok(0)
        }
        Command::Spectrum(args) => {
            if args.format != "csv" {
                return Err(Error::Domain("spectrum supports only --format csv"));
            }
            let cfg = SpectrumConfig {
                n: args.n,
                t: args.t,
                seed: args.seed.seed,
                inflation: args.inflation,
            };
            let (body, outliers) = spectrum_csv(&cfg)?;
            write_file(&args.out, body.as_bytes())?;
            println!("outliers at inflation {}: {}", args.inflation, outliers);
            println!("wrote {}", args.out);
            Ok(0)
        }
        Command::Verify(args) => {
            let results = if args.quick { verify::run_quick() } else { verify::run_full() };
            let mut all_ok = true;
            for r in &results {
                println!("{}", r.line());
                all_ok &= r.passed;
            }
            Ok(if all_ok { 0 } else { 2 })
        }
    }
}

fn write_file(path: &str, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|_| Error::Domain("could not write the output file"))
}
