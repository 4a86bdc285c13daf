//! One-parameter sweeps and the figure presets built from them.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::analytics::{harvested_energy, harvested_energy_asymptotic, success_asymptotic, success_probability};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate, SimConfig};
use crate::network::{Scheme, SystemParams};
use crate::units::{db_to_linear, dbm_to_watts, PowerDbm, RatioDb};

/// First line of every sweep CSV.
pub const CSV_VERSION_LINE: &str = "# swipt-stochgeom csv v1";

pub const CSV_COLUMNS: [&str; 12] = [
    "axis",
    "axis_value",
    "scheme",
    "analytic_success",
    "analytic_energy_w",
    "asymptotic_success",
    "asymptotic_energy_w",
    "mc_success",
    "mc_success_stderr",
    "mc_energy_w",
    "mc_energy_stderr",
    "tail_bound_ratio",
];

/// Parameter varied by a sweep. Values are always linear SI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Transmit power, W.
    TransmitPower,
    /// SINR threshold, linear.
    Beta,
    /// Transmitter density, m⁻³.
    Lambda,
    /// Power-splitting fraction.
    Nu,
    /// Pair distance, m.
    Distance,
    /// Total array elements `M`, split as `m1 = m2 = √M`.
    Elements,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::TransmitPower => "p_t",
            Axis::Beta => "beta",
            Axis::Lambda => "lambda",
            Axis::Nu => "nu",
            Axis::Distance => "d0",
            Axis::Elements => "m",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = *base;
        match self {
            Axis::TransmitPower => p.p_t = value,
            Axis::Beta => p.beta = value,
            Axis::Lambda => p.lambda = value,
            Axis::Nu => p.nu = value,
            Axis::Distance => p.d0 = value,
            Axis::Elements => {
                let m = value as u32;
                match perfect_square_root(m) {
                    Some(r) => {
                        p.m1 = r;
                        p.m2 = r;
                    }
                    None => {
                        p.m1 = m;
                        p.m2 = 1;
                    }
                }
            }
        }
        p
    }
}

fn perfect_square_root(m: u32) -> Option<u32> {
    let r = (m as f64).sqrt().round() as u32;
    (r * r == m).then_some(r)
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p_t" => Axis::TransmitPower,
            "beta" => Axis::Beta,
            "lambda" => Axis::Lambda,
            "nu" => Axis::Nu,
            "d0" => Axis::Distance,
            "m" => Axis::Elements,
            _ => {
                return Err(Error::Config(format!(
                    "unknown axis {s:?} (expected p_t, beta, lambda, nu, d0 or m)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Short identifier, used for output file names.
    pub name: String,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub base: SystemParams,
    pub schemes: Vec<Scheme>,
    pub sim: Option<SimConfig>,
    pub include_asymptotic: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config(format!("sweep {}: no axis values", self.name)));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config(format!("sweep {}: no schemes", self.name)));
        }
        if let Some(bad) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("sweep {}: non-finite axis value {bad}", self.name)));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "sweep {}: axis values must be strictly increasing",
                self.name
            )));
        }
        if self.axis == Axis::Elements {
            for &v in &self.values {
                if v < 1.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                    return Err(Error::Config(format!("sweep {}: M = {v} is not a positive integer", self.name)));
                }
                if self.schemes.contains(&Scheme::AzimuthVertical) && perfect_square_root(v as u32).is_none() {
                    return Err(Error::Config(format!(
                        "sweep {}: M = {v} is not a perfect square, required for AVS",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One `(axis value, scheme)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub scheme: Scheme,
    pub analytic_success: f64,
    pub analytic_energy: f64,
    pub asymptotic_success: Option<f64>,
    pub asymptotic_energy: Option<f64>,
    pub mc_success: Option<f64>,
    pub mc_success_stderr: Option<f64>,
    pub mc_energy: Option<f64>,
    pub mc_energy_stderr: Option<f64>,
    pub tail_bound_ratio: Option<f64>,
}

fn sweep_point(spec: &SweepSpec, value: f64, scheme: Scheme) -> Result<SweepRow> {
    let params = spec.axis.apply(&spec.base, value);
    params.validate()?;

    let mut row = SweepRow {
        axis_value: value,
        scheme,
        analytic_success: success_probability(&params, scheme)?,
        analytic_energy: harvested_energy(&params, scheme)?,
        asymptotic_success: None,
        asymptotic_energy: None,
        mc_success: None,
        mc_success_stderr: None,
        mc_energy: None,
        mc_energy_stderr: None,
        tail_bound_ratio: None,
    };
    if spec.include_asymptotic {
        row.asymptotic_success = Some(success_asymptotic(&params, scheme)?);
        row.asymptotic_energy = Some(harvested_energy_asymptotic(&params, scheme)?);
    }
    if let Some(sim) = &spec.sim {
        let report = simulate(&params, scheme, sim)?;
        row.mc_success = Some(report.success.mean);
        row.mc_success_stderr = Some(report.success.stderr);
        row.mc_energy = Some(report.energy.mean);
        row.mc_energy_stderr = Some(report.energy.stderr);
        row.tail_bound_ratio = Some(report.tail_bound_ratio);
    }
    Ok(row)
}

/// Evaluates every `(axis value, scheme)` pair, ordered by axis value and
/// then scheme.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut schemes = spec.schemes.clone();
    schemes.sort();
    schemes.dedup();

    let mut rows = Vec::with_capacity(spec.values.len() * schemes.len());
    for &value in &spec.values {
        for &scheme in &schemes {
            let row = sweep_point(spec, value, scheme).map_err(|e| Error::SweepPoint {
                axis: spec.axis.name(),
                value,
                source: Box::new(e),
            })?;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn cell(out: &mut String, v: Option<f64>) {
    out.push(',');
    if let Some(v) = v {
        out.push_str(&format!("{v:.16e}"));
    }
}

/// Writes rows in the versioned CSV layout (17 significant digits, empty
/// cells for absent values).
pub fn write_csv<W: Write>(mut w: W, axis: Axis, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{CSV_VERSION_LINE}")?;
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for row in rows {
        let mut line = String::from(axis.name());
        cell(&mut line, Some(row.axis_value));
        line.push(',');
        line.push_str(row.scheme.label());
        cell(&mut line, Some(row.analytic_success));
        cell(&mut line, Some(row.analytic_energy));
        cell(&mut line, row.asymptotic_success);
        cell(&mut line, row.asymptotic_energy);
        cell(&mut line, row.mc_success);
        cell(&mut line, row.mc_success_stderr);
        cell(&mut line, row.mc_energy);
        cell(&mut line, row.mc_energy_stderr);
        cell(&mut line, row.tail_bound_ratio);
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

/// Parses `lo:hi:n` (evenly spaced) or `lo:hi:nlog` (geometric).
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse values {spec:?} (expected lo:hi:n or lo:hi:nlog)"));
    let mut parts = spec.split(':');
    let (Some(lo), Some(hi), Some(count), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count = count.trim();
    let (count, log) = match count.strip_suffix("log") {
        Some(c) => (c, true),
        None => (count, false),
    };
    let n: usize = count.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    if log {
        if !(lo > 0.0 && hi > 0.0) {
            return Err(Error::Config(format!("log-spaced values need positive bounds ({spec})")));
        }
        Ok(logspace(lo, hi, n))
    } else {
        Ok(linspace(lo, hi, n))
    }
}

/// Monte Carlo snapshots per point in the figure presets.
pub const PRESET_TRIALS: u64 = 100_000;

/// Panel sweeps regenerating one figure: two axes, all schemes, asymptotes
/// on, Monte Carlo at [`PRESET_TRIALS`] snapshots per point.
pub fn figure_preset(name: &str, base: &SystemParams, seed: u64) -> Result<Vec<SweepSpec>> {
    let panel = |axis: Axis, values: Vec<f64>| SweepSpec {
        name: format!("{name}_{}", axis.name()),
        axis,
        values,
        base: *base,
        schemes: Scheme::ALL.to_vec(),
        sim: Some(SimConfig::new(PRESET_TRIALS, seed)),
        include_asymptotic: true,
    };
    match name {
        "fig2" => Ok(vec![
            panel(
                Axis::TransmitPower,
                linspace(-20.0, 30.0, 26).into_iter().map(|x| dbm_to_watts(PowerDbm(x))).collect(),
            ),
            panel(
                Axis::Beta,
                linspace(0.0, 30.0, 26).into_iter().map(|x| db_to_linear(RatioDb(x))).collect(),
            ),
        ]),
        "fig3" => Ok(vec![
            panel(Axis::Lambda, logspace(1e-6, 1e-2, 25)),
            panel(Axis::Nu, (1..=26).map(|k| k as f64 / 27.0).collect()),
        ]),
        "fig4" => Ok(vec![
            panel(Axis::Distance, linspace(1.0, 10.0, 26)),
            panel(Axis::Elements, vec![1.0, 4.0, 16.0, 64.0, 256.0]),
        ]),
        _ => Err(Error::Config(format!("unknown preset {name:?} (expected fig2, fig3 or fig4)"))),
    }
}
