//! Command-line configuration and the subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fillin_core::collar::{feasibility_charged, FeasibilityOptions, DEFAULT_STRICT_MARGIN};
use fillin_core::verify::{
    certify_divergence_free, certify_energy_condition, certify_lower_bound, default_tolerance, scalar_curvature_grid,
    Certificate,
};
use fillin_core::{
    build, build_charged, feasibility_negative, feasibility_nonnegative, mass_report, BartnikData, BuildOptions,
    Collar, FeasibilityReport, Mode,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::io;
use crate::preset::{generate, Preset, PresetParams};
use crate::sweep::{self, Point, SweepKey, SweepOptions, SweepRange};

#[derive(Debug, Parser)]
#[command(name = "fillin", version, about = "Collar fill-ins of Bartnik data: feasibility, certification and mass bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write boundary data JSON for a preset.
    Generate(RunConfig),
    /// Feasibility report; exit 1 when no admissible mass exists.
    Check(RunConfig),
    /// Build the collar and certify it; exit 1 when a certificate fails.
    Build(RunConfig),
    /// Mass lower bounds; exit 1 when none applies.
    Mass(RunConfig),
    /// Table over a parameter range.
    Sweep(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Exact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Exact => Mode::Exact,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "input"])))]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Boundary data JSON (nodes or axisymmetric profile).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Radius of round and model presets.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Mean curvature of the round and axisymmetric presets.
    #[arg(long = "H", default_value_t = 1.0, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Scalar curvature lower bound.
    #[arg(long = "C", default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Collar mass parameter (default: the largest admissible one).
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long = "grid-t", default_value_t = 200)]
    pub grid_t: usize,
    /// Nodes of the axisymmetric preset.
    #[arg(long = "grid-x", default_value_t = 400)]
    pub grid_x: usize,
    /// Certificate tolerance (default 1e-8, or 1e-5 for sampled surfaces).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Build outside the admissible mass range.
    #[arg(long)]
    pub force: bool,
    /// Output file (directory for `build`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep: Option<SweepRange>,
    /// Flag sweep rows whose bound exceeds this exterior mass.
    #[arg(long = "exterior-mass")]
    pub exterior_mass: Option<f64>,
    /// Sweep worker threads (0: one per core).
    #[arg(long, env = "FILLIN_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Mass of the model presets.
    #[arg(long = "model-m", default_value_t = 1.0)]
    pub model_m: f64,
    /// Charge of the rn preset.
    #[arg(long = "model-q", default_value_t = 0.0)]
    pub model_q: f64,
    /// Amplitude of the cos θ term in the axisymmetric mean curvature.
    #[arg(long = "h-amp", default_value_t = 0.0, allow_negative_numbers = true)]
    pub h_amp: f64,
    /// Deformation of the axisymmetric sphere.
    #[arg(long = "f-bump", default_value_t = 0.0, allow_negative_numbers = true)]
    pub f_bump: f64,
}

impl RunConfig {
    fn preset_params(&self) -> PresetParams {
        PresetParams {
            n: self.n,
            r: self.r,
            h: self.h,
            phi: self.phi,
            c: self.c,
            model_m: self.model_m,
            model_q: self.model_q,
            h_amp: self.h_amp,
            f_bump: self.f_bump,
            grid_x: self.grid_x,
        }
    }

    pub fn data(&self) -> Result<BartnikData> {
        match (&self.input, self.preset) {
            (Some(path), _) => io::read_data(path),
            (None, Some(p)) => generate(p, &self.preset_params()),
            (None, None) => Err(CliError::Usage("one of --preset or --input is required".into())),
        }
    }

    fn build_options(&self) -> Result<BuildOptions> {
        if self.grid_t < 3 {
            return Err(CliError::Usage("--grid-t must be at least 3".into()));
        }
        Ok(BuildOptions {
            mode: self.mode.into(),
            force: self.force,
            samples: self.grid_t,
            strict_margin: DEFAULT_STRICT_MARGIN,
        })
    }

    fn feasibility_options(&self) -> FeasibilityOptions {
        FeasibilityOptions { mode: self.mode.into(), strict_margin: DEFAULT_STRICT_MARGIN }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write_file(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs `cli`, writing results to `out` unless `--out` is given.
/// Returns the exit status for completed runs.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Generate(cfg) => {
            let data = cfg.data()?;
            emit(out, cfg.out.as_deref(), &io::to_json(&data))?;
            Ok(0)
        }
        Command::Check(cfg) => {
            let report = check(cfg, &cfg.data()?)?;
            emit(out, cfg.out.as_deref(), &io::to_json(&report))?;
            Ok(if report.feasible { 0 } else { 1 })
        }
        Command::Build(cfg) => build_verify(cfg, out),
        Command::Mass(cfg) => {
            let report = mass_report(&cfg.data()?, cfg.c);
            emit(out, cfg.out.as_deref(), &io::to_json(&report))?;
            Ok(if report.has_bound() { 0 } else { 1 })
        }
        Command::Sweep(cfg) => run_sweep(cfg, out),
    }
}

fn is_charged_run(cfg: &RunConfig, data: &BartnikData) -> Result<bool> {
    if !data.is_charged() {
        return Ok(false);
    }
    if cfg.c != 0.0 {
        return Err(CliError::Usage("charged data is only supported with C = 0".into()));
    }
    Ok(true)
}

pub fn check(cfg: &RunConfig, data: &BartnikData) -> Result<FeasibilityReport> {
    let opts = cfg.feasibility_options();
    Ok(if is_charged_run(cfg, data)? {
        feasibility_charged(data, &opts)?
    } else if cfg.c < 0.0 {
        feasibility_negative(data, cfg.c, &opts)?
    } else {
        feasibility_nonnegative(data, cfg.c, &opts)?
    })
}

#[derive(Debug, Serialize)]
pub struct Certificates {
    pub pass: bool,
    pub admissible: bool,
    pub m: f64,
    pub lower_bound: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_condition: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence_free: Option<Certificate>,
}

pub fn certify(collar: &Collar, tol: Option<f64>) -> Certificates {
    let tol = tol.unwrap_or_else(|| default_tolerance(collar));
    let lower_bound = certify_lower_bound(collar, tol);
    let energy_condition = certify_energy_condition(collar, tol).ok();
    let divergence_free = certify_divergence_free(collar, tol).ok();
    let pass = lower_bound.pass
        && energy_condition.as_ref().is_none_or(|c| c.pass)
        && divergence_free.as_ref().is_none_or(|c| c.pass);
    Certificates { pass, admissible: collar.admissible, m: collar.m(), lower_bound, energy_condition, divergence_free }
}

pub fn build_collar(cfg: &RunConfig, data: &BartnikData) -> Result<Collar> {
    let opts = cfg.build_options()?;
    if is_charged_run(cfg, data)? {
        if cfg.m.is_some() {
            return Err(CliError::Usage("the charged collar fixes m; drop --m".into()));
        }
        let report = feasibility_charged(data, &cfg.feasibility_options())?;
        Ok(build_charged(data, &report, &opts)?)
    } else {
        Ok(build(data, cfg.c, cfg.m, &opts)?)
    }
}

fn build_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let data = cfg.data()?;
    let collar = build_collar(cfg, &data)?;
    let certs = certify(&collar, cfg.tol);
    let json = io::to_json(&certs);
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
            io::write_file(&dir.join("profile.csv"), &io::profile_csv(&collar.profile))?;
            io::write_file(&dir.join("grid.csv"), &io::grid_csv(&collar, &scalar_curvature_grid(&collar)))?;
            io::write_file(&dir.join("collar.json"), &io::to_json(&io::CollarExport::new(&collar, "profile.csv")))?;
            io::write_file(&dir.join("certificate.json"), &json)?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    Ok(if certs.pass { 0 } else { 1 })
}

fn sweep_points(cfg: &RunConfig, range: &SweepRange) -> Result<Vec<Point>> {
    let base = cfg.data()?;
    if range.key == SweepKey::M && is_charged_run(cfg, &base)? {
        return Err(CliError::Usage("the charged collar fixes m; sweep another key".into()));
    }
    if range.key == SweepKey::R && cfg.preset.is_none() {
        return Err(CliError::Usage("sweeping r needs a preset".into()));
    }
    let mut points = Vec::with_capacity(range.steps);
    for value in range.values() {
        let mut c = cfg.c;
        let mut m = cfg.m;
        let data = match range.key {
            SweepKey::M => {
                m = Some(value);
                Ok(base.clone())
            }
            SweepKey::Lambda => {
                if value > 0.0 {
                    Ok(base.scale_mean_curvature(value))
                } else {
                    Err(format!("lambda = {value} is not positive"))
                }
            }
            SweepKey::C => {
                c = value;
                Ok(base.clone())
            }
            SweepKey::R => {
                let params = PresetParams { r: value, ..cfg.preset_params() };
                generate(cfg.preset.expect("checked above"), &params).map_err(|e| e.to_string())
            }
        };
        points.push(Point { value, data, c, m });
    }
    Ok(points)
}

fn run_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let range = cfg.sweep.ok_or_else(|| CliError::Usage("sweep needs --sweep key=lo:hi:steps".into()))?;
    let points = sweep_points(cfg, &range)?;
    let opts = SweepOptions { build: cfg.build_options()?, tol: cfg.tol, exterior_mass: cfg.exterior_mass };
    let rows = sweep::run(&points, &opts, cfg.jobs)?;
    emit(out, cfg.out.as_deref(), &sweep::to_csv(range.key, &rows))?;
    Ok(if rows.iter().any(|r| r.feasible) { 0 } else { 1 })
}
