//! Command-line front end for the `swipt` binary.
//!
//! Exit codes: 0 success, 1 failed validation suite or numerical failure,
//! 2 invalid configuration or sweep specification, 3 simulation radius
//! violates the truncation guard, 4 output not writable.

mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{
    harvested_energy, harvested_energy_asymptotic, success_asymptotic, success_breakdown,
};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::experiments::{figure_preset, parse_values, run_sweep, write_csv, Axis, SweepSpec};
use crate::interference::truncation_tail_bound;
use crate::montecarlo::{simulate, FarField, SimConfig};
use crate::network::{sector_processes, Scheme, SystemParams};

pub use validate::Suite;

/// Environment variable consulted for the seed when neither the command line
/// nor the config file provides one.
pub const SEED_ENV: &str = "SWIPT_SEED";

#[derive(Debug, Parser)]
#[command(name = "swipt", version, about = "SWIPT in 3-D Poisson bipolar networks with sectorized antennas")]
pub struct Cli {
    /// Scenario file (`key = value` per line); reference values when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form success probability and harvested energy.
    Analytic(AnalyticArgs),
    /// Monte Carlo estimates alongside the closed forms.
    Simulate(SimulateArgs),
    /// Sweep one parameter and write CSV.
    Sweep(SweepArgs),
    /// Run the built-in consistency suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Om,
    As,
    Avs,
    All,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::Om => vec![Scheme::Omni],
            SchemeArg::As => vec![Scheme::Azimuth],
            SchemeArg::Avs => vec![Scheme::AzimuthVertical],
            SchemeArg::All => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_enum, default_value = "avs")]
    pub scheme: SchemeArg,
    /// Machine-readable output.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args, Default)]
pub struct SimFlags {
    /// Monte Carlo snapshots.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Root seed (falls back to the config file, then SWIPT_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulation ball radius in metres.
    #[arg(long = "radius-m", value_name = "R")]
    pub radius_m: Option<f64>,
    /// Accept a radius whose truncation tail exceeds the guard.
    #[arg(long)]
    pub force_radius: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Interferers beyond the radius: add their mean, or drop them.
    #[arg(long = "far-field", value_enum, default_value = "mean")]
    pub far_field: FarFieldArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FarFieldArg {
    #[default]
    Mean,
    Truncate,
}

impl From<FarFieldArg> for FarField {
    fn from(arg: FarFieldArg) -> Self {
        match arg {
            FarFieldArg::Mean => FarField::Mean,
            FarFieldArg::Truncate => FarField::Truncate,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "avs")]
    pub scheme: SchemeArg,
    #[command(flatten)]
    pub sim: SimFlags,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["preset", "axis"]))]
pub struct SweepArgs {
    /// Regenerate the panels of one figure.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Parameter to sweep: p_t, beta, lambda, nu, d0 or m (values in linear SI units).
    #[arg(long, requires = "values")]
    pub axis: Option<String>,
    /// `lo:hi:n` (evenly spaced) or `lo:hi:nlog` (geometric).
    #[arg(long)]
    pub values: Option<String>,
    #[arg(long, value_enum, default_value = "all")]
    pub scheme: SchemeArg,
    #[command(flatten)]
    pub sim: SimFlags,
    /// Skip Monte Carlo columns.
    #[arg(long)]
    pub analytic_only: bool,
    /// Skip asymptotic columns.
    #[arg(long)]
    pub no_asymptotic: bool,
    /// Output file (axis sweep, default stdout) or directory (preset, default `.`).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run only the named suite(s).
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Snapshots per cell in the Monte Carlo suite.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TailBound { .. } => 3,
        Error::Io(_) => 4,
        Error::SweepPoint { source, .. } => exit_code(source),
        Error::Quadrature { .. } => 1,
        Error::Domain(_) | Error::InvalidParams(_) | Error::Config(_) => 2,
    }
}

/// Executes a parsed command line. `env_seed` is the value of
/// [`SEED_ENV`], if set.
pub fn run(cli: &Cli, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, env_seed, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let env_seed = env_seed
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer")))
        })
        .transpose()?;

    match &cli.command {
        Command::Analytic(args) => cmd_analytic(&config, args, out),
        Command::Simulate(args) => cmd_simulate(&config, args, env_seed, out),
        Command::Sweep(args) => cmd_sweep(&config, args, env_seed, out),
        Command::Validate(args) => validate::run(args, env_seed, out),
    }
}

fn checked_params(config: &ScenarioConfig) -> Result<SystemParams> {
    let params = config.params();
    params.validate()?;
    Ok(params)
}

fn sim_config(config: &ScenarioConfig, flags: &SimFlags, env_seed: Option<u64>) -> SimConfig {
    let mut sim = config.sim_config(env_seed.unwrap_or(0));
    if let Some(seed) = flags.seed {
        sim.seed = seed;
    }
    if let Some(trials) = flags.trials {
        sim.trials = trials;
    }
    if let Some(radius) = flags.radius_m {
        sim.radius = radius;
    }
    sim.force_radius = flags.force_radius;
    sim.threads = flags.threads;
    sim.far_field = flags.far_field.into();
    sim
}

pub fn cmd_analytic(config: &ScenarioConfig, args: &AnalyticArgs, out: &mut dyn Write) -> Result<i32> {
    let params = checked_params(config)?;
    if args.csv {
        writeln!(out, "scheme,success,success_asymptotic,energy_w,energy_asymptotic_w,success_underflow")?;
    }
    for scheme in args.scheme.schemes() {
        let success = success_breakdown(&params, scheme)?;
        let success_inf = success_asymptotic(&params, scheme)?;
        let energy = harvested_energy(&params, scheme)?;
        let energy_inf = harvested_energy_asymptotic(&params, scheme)?;
        if args.csv {
            writeln!(
                out,
                "{scheme},{:.16e},{success_inf:.16e},{energy:.16e},{energy_inf:.16e},{}",
                success.probability, success.underflow
            )?;
        } else {
            writeln!(out, "scheme {scheme}")?;
            writeln!(out, "  success_probability           {:.10e}", success.probability)?;
            if success.underflow {
                writeln!(out, "    (underflow: ln P = {:.6})", success.ln_probability)?;
            }
            writeln!(out, "  success_asymptotic            {success_inf:.10e}")?;
            writeln!(out, "  harvested_energy_w            {energy:.10e}")?;
            writeln!(out, "  harvested_energy_asymptotic_w {energy_inf:.10e}")?;
        }
    }
    Ok(0)
}

pub fn cmd_simulate(
    config: &ScenarioConfig,
    args: &SimulateArgs,
    env_seed: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let params = checked_params(config)?;
    let sim = sim_config(config, &args.sim, env_seed);
    let mut body = Vec::new();
    if args.csv {
        writeln!(
            body,
            "scheme,trials,seed,radius_m,tail_bound_ratio,mc_success,mc_success_stderr,mc_success_ci_low,\
             mc_success_ci_high,analytic_success,success_gap,mc_energy_w,mc_energy_stderr,mc_energy_ci_low,\
             mc_energy_ci_high,analytic_energy_w,energy_gap,energy_bias_bound_w"
        )?;
    }
    for scheme in args.scheme.schemes() {
        let report = simulate(&params, scheme, &sim)?;
        let analytic_success = success_breakdown(&params, scheme)?.probability;
        let analytic_energy = harvested_energy(&params, scheme)?;
        let bias = energy_bias_bound(&params, scheme, &sim)?;
        let (s, e) = (report.success, report.energy);
        let success_gap = (s.mean - analytic_success).abs();
        let energy_gap = (e.mean - analytic_energy).abs();
        if args.csv {
            writeln!(
                body,
                "{scheme},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                sim.trials, sim.seed, sim.radius, report.tail_bound_ratio,
                s.mean, s.stderr, s.ci_low, s.ci_high, analytic_success, success_gap,
                e.mean, e.stderr, e.ci_low, e.ci_high, analytic_energy, energy_gap, bias,
            )?;
        } else {
            writeln!(body, "scheme {scheme}")?;
            writeln!(body, "  trials {}  seed {}  radius_m {}  confidence {}", sim.trials, sim.seed, sim.radius, sim.confidence)?;
            writeln!(body, "  tail_bound_ratio      {:.6e}", report.tail_bound_ratio)?;
            writeln!(body, "  success  monte carlo  {:.8e} (stderr {:.3e}, ci [{:.8e}, {:.8e}])", s.mean, s.stderr, s.ci_low, s.ci_high)?;
            writeln!(body, "           analytic     {analytic_success:.8e}")?;
            writeln!(body, "           gap          {success_gap:.3e} (3 stderr {:.3e})", 3.0 * s.stderr)?;
            writeln!(body, "  energy_w monte carlo  {:.8e} (stderr {:.3e}, ci [{:.8e}, {:.8e}])", e.mean, e.stderr, e.ci_low, e.ci_high)?;
            writeln!(body, "           analytic     {analytic_energy:.8e}")?;
            writeln!(body, "           gap          {energy_gap:.3e} (3 stderr {:.3e}, truncation bias <= {bias:.3e})", 3.0 * e.stderr)?;
        }
    }
    out.write_all(&body)?;
    Ok(0)
}

/// Largest expected shortfall of simulated harvested power caused by
/// truncating the field at the simulation radius; zero when the far field
/// is filled in with its mean.
pub fn energy_bias_bound(params: &SystemParams, scheme: Scheme, sim: &SimConfig) -> Result<f64> {
    if sim.far_field == FarField::Mean {
        return Ok(0.0);
    }
    let radius = sim.radius;
    let p = scheme.configure(params);
    let layout = sector_processes(&p, scheme)?;
    let max_gain = layout.processes.iter().map(|q| q.gain).fold(0.0, f64::max);
    let tail = truncation_tail_bound(radius, p.lambda, p.alpha)?;
    Ok(p.zeta * (1.0 - p.nu) * p.p_t * max_gain * tail)
}

fn write_sweep_file(path: &Path, spec: &SweepSpec, rows: &[crate::experiments::SweepRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display())))
    })?;
    write_csv(BufWriter::new(file), spec.axis, rows)
}

pub fn cmd_sweep(
    config: &ScenarioConfig,
    args: &SweepArgs,
    env_seed: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let base = checked_params(config)?;
    let sim = sim_config(config, &args.sim, env_seed);
    let schemes = args.scheme.schemes();

    if let Some(preset) = args.preset {
        let mut specs = figure_preset(preset.name(), &base, sim.seed)?;
        for spec in &mut specs {
            spec.schemes = schemes.clone();
            spec.include_asymptotic = !args.no_asymptotic;
            spec.sim = if args.analytic_only {
                None
            } else {
                let mut s = sim.clone();
                s.trials = args.sim.trials.unwrap_or(crate::experiments::PRESET_TRIALS);
                Some(s)
            };
        }
        let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("cannot create {}: {e}", dir.display())))
        })?;
        for spec in &specs {
            let rows = run_sweep(spec)?;
            let path = dir.join(format!("{}.csv", spec.name));
            write_sweep_file(&path, spec, &rows)?;
            writeln!(out, "wrote {} ({} rows)", path.display(), rows.len())?;
        }
        return Ok(0);
    }

    let axis: Axis = args.axis.as_deref().unwrap_or_default().parse()?;
    let values = parse_values(args.values.as_deref().unwrap_or_default())?;
    let wants_mc = args.sim.trials.is_some() || config.sim.is_some();
    let spec = SweepSpec {
        name: axis.name().to_string(),
        axis,
        values,
        base,
        schemes,
        sim: (wants_mc && !args.analytic_only).then_some(sim),
        include_asymptotic: !args.no_asymptotic,
    };
    let rows = run_sweep(&spec)?;
    match &args.out {
        Some(path) => {
            write_sweep_file(path, &spec, &rows)?;
            writeln!(out, "wrote {} ({} rows)", path.display(), rows.len())?;
        }
        None => write_csv(&mut *out, axis, &rows)?,
    }
    Ok(0)
}
